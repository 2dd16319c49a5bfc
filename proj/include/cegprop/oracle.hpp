#pragma once

#include <cstdint>
#include <vector>

#include "cegprop/ceg.hpp"
#include "cegprop/observation.hpp"
#include "cegprop/positions.hpp"
#include "cegprop/tree.hpp"

namespace cegprop {

// Everything the enumeration oracle knows about one conditioning problem.
// Computed purely by walking all root-to-sink paths; deliberately shares no
// code with the message-passing engine it is used to check.
struct OracleResult {
  std::vector<Atom> paths;                  // enumerate_paths order
  std::vector<double> path_probability;     // prior, per path
  std::vector<char> in_event;               // per path
  std::vector<double> conditional_path_prob;  // per path, 0 outside the event
  // Per edge e(w,w'): probability mass of event paths using e divided by
  // the mass of event paths passing w; 0 when that denominator is 0.
  std::vector<double> conditional_edge_prob;
  // Per position: probability mass of event paths passing through it.
  std::vector<double> position_event_mass;
  double event_probability = 0.0;
  bool zero_event = false;
};

// Conditions the CEG on the observation by full path enumeration.
// Throws InstanceTooLargeError when the path count exceeds `path_cap`.
OracleResult brute_force_condition(const TransporterCeg& ceg,
                                   const CompatibleObservation& obs,
                                   std::uint64_t path_cap = 1'000'000);

// Tree-level variant: conditions the source tree directly, mapping each
// tree atom through the path bijection to decide event membership. Used to
// cross-check that quotienting preserves the conditional distribution.
struct TreeOracleResult {
  std::vector<Atom> atoms;                    // enumerate_atoms order
  std::vector<Atom> mapped_paths;             // bijection images, per atom
  std::vector<double> conditional_atom_prob;  // per atom
  double event_probability = 0.0;
  bool zero_event = false;
};

TreeOracleResult brute_force_condition_tree(const ProbabilityTree& tree,
                                            const PositionPartition& partition,
                                            const TransporterCeg& ceg,
                                            const CompatibleObservation& obs);

}  // namespace cegprop
