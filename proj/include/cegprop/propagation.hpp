#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "cegprop/ceg.hpp"
#include "cegprop/observation.hpp"

namespace cegprop {

struct OperationCounters {
  // One op per edge visited in the backward sweep (zero assignments and
  // potential products alike).
  std::uint64_t backward_edge_ops = 0;
  // One op per emphasis summation at a position with at least one retained
  // outgoing edge. Positions whose whole edge set is excluded get emphasis
  // zero without a counted summation.
  std::uint64_t backward_vertex_ops = 0;
  // One op per division performed in the forward sweep.
  std::uint64_t forward_edge_ops = 0;

  OperationCounters& operator+=(const OperationCounters& o) {
    backward_edge_ops += o.backward_edge_ops;
    backward_vertex_ops += o.backward_vertex_ops;
    forward_edge_ops += o.forward_edge_ops;
    return *this;
  }
  bool operator==(const OperationCounters&) const = default;
};

struct CollectResult {
  std::vector<double> tau;  // per edge: potential, 0 outside the observation
  std::vector<double> phi;  // per position: emphasis, phi[sink] = 1
  OperationCounters counters;
};

// Backward sweep: positions are accommodated children-first; each retained
// edge gets potential tau = prob * phi(target), excluded edges get 0, and a
// position's emphasis is the sum of its edge potentials. The root emphasis
// is the prior probability of the observed event.
CollectResult collect(const TransporterCeg& ceg,
                      const CompatibleObservation& obs);

// Same sweep with a caller-supplied accommodation order over the non-sink
// positions (parents before children; the sweep walks it backwards).
// Throws ValidationError if the order is not a valid linear extension.
CollectResult collect(const TransporterCeg& ceg,
                      const CompatibleObservation& obs,
                      std::span<const PositionId> position_order);

struct PropagationResult {
  std::vector<double> tau;
  std::vector<double> phi;
  std::vector<double> pi_hat;  // revised edge probabilities
  OperationCounters counters;
};

// Forward sweep: pi_hat = tau / phi(source) for retained edges at positions
// with positive emphasis, 0 elsewhere. Counters from `collected` are merged
// into the result.
PropagationResult distribute(const TransporterCeg& ceg,
                             const CompatibleObservation& obs,
                             const CollectResult& collected);

// collect followed by distribute. Throws ZeroProbabilityError when the
// observed event has probability zero (conditioning undefined).
PropagationResult propagate(const TransporterCeg& ceg,
                            const CompatibleObservation& obs);

// Revised probability of a root-to-sink path: the product of pi_hat along
// it. When every emphasis on the path is positive, the value is checked
// against the potential/emphasis ratio form (product of tau over product of
// phi) within 1e-12. Throws InvalidPathError for non-paths.
double conditional_atom_probability(const TransporterCeg& ceg,
                                    const PropagationResult& result,
                                    const Atom& path);

// Revised probability of reaching w: forward DP over pi_hat.
double conditional_reach_probability(const TransporterCeg& ceg,
                                     const PropagationResult& result,
                                     PositionId w);
std::vector<double> conditional_reach_probabilities(
    const TransporterCeg& ceg, const PropagationResult& result);

struct ReducedCeg {
  TransporterCeg graph;
  // Correspondence back to the original graph.
  std::vector<PositionId> position_map;  // per reduced position
  std::vector<EdgeId> edge_map;          // per reduced edge
};

// The support of the conditional model: edges with positive revised
// probability and positions with positive emphasis, further pruned to the
// part reachable from the root and reaching the sink. A position can carry
// positive emphasis yet lose all revised inflow; pruning removes such dead
// structure. Edge probabilities of the result are the pi_hat values.
// Throws ZeroProbabilityError if the root emphasis is zero.
ReducedCeg reduce(const TransporterCeg& ceg, const PropagationResult& result);

}  // namespace cegprop
