#include "cegprop/propagation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cegprop/errors.hpp"

namespace cegprop {

namespace {

void check_order(const TransporterCeg& ceg,
                 std::span<const PositionId> order) {
  if (order.size() != ceg.position_count() - 1) {
    throw ValidationError("accommodation order must cover all non-sink positions");
  }
  std::vector<std::size_t> rank(ceg.position_count(),
                                std::numeric_limits<std::size_t>::max());
  for (std::size_t i = 0; i < order.size(); ++i) {
    PositionId w = order[i];
    if (w >= ceg.position_count() || ceg.is_sink(w) ||
        rank[w] != std::numeric_limits<std::size_t>::max()) {
      throw ValidationError("accommodation order is not a permutation of positions");
    }
    rank[w] = i;
  }
  for (const auto& e : ceg.edges()) {
    if (ceg.is_sink(e.target)) continue;
    if (rank[e.source] >= rank[e.target]) {
      throw ValidationError("accommodation order lists " +
                            ceg.position_name(e.target) + " before its parent " +
                            ceg.position_name(e.source));
    }
  }
}

CollectResult collect_impl(const TransporterCeg& ceg,
                           const CompatibleObservation& obs,
                           std::span<const PositionId> order) {
  if (obs.graph_edge_count() != ceg.edge_count()) {
    throw ValidationError("observation was built for a different graph");
  }
  CollectResult result;
  result.tau.assign(ceg.edge_count(), 0.0);
  result.phi.assign(ceg.position_count(), 0.0);
  result.phi[ceg.sink()] = 1.0;

  // Children first. Summation follows pi(w) edge order for reproducibility.
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const PositionId w = *it;
    double sum = 0.0;
    bool any_retained = false;
    bool full = true;       // every outgoing edge retained
    bool unit_children = true;  // all retained targets have emphasis exactly 1
    for (EdgeId e : ceg.out_edges(w)) {
      ++result.counters.backward_edge_ops;
      if (!obs.contains(e)) {
        full = false;
        continue;
      }
      any_retained = true;
      const double child_phi = result.phi[ceg.edge(e).target];
      if (child_phi != 1.0) unit_children = false;
      result.tau[e] = ceg.edge(e).prob * child_phi;
      sum += result.tau[e];
    }
    if (any_retained) ++result.counters.backward_vertex_ops;
    // When no mass is removed at or below w the emphasis is one by the
    // sum-to-one invariant of pi(w); keeping it exactly one makes the
    // vacuous observation an exact identity.
    result.phi[w] = (full && unit_children) ? 1.0 : sum;
  }
  return result;
}

}  // namespace

CollectResult collect(const TransporterCeg& ceg,
                      const CompatibleObservation& obs) {
  const auto ordering = topological_edge_order(ceg);
  return collect_impl(ceg, obs, ordering.positions);
}

CollectResult collect(const TransporterCeg& ceg,
                      const CompatibleObservation& obs,
                      std::span<const PositionId> position_order) {
  check_order(ceg, position_order);
  return collect_impl(ceg, obs, position_order);
}

PropagationResult distribute(const TransporterCeg& ceg,
                             const CompatibleObservation& obs,
                             const CollectResult& collected) {
  PropagationResult result;
  result.tau = collected.tau;
  result.phi = collected.phi;
  result.counters = collected.counters;
  result.pi_hat.assign(ceg.edge_count(), 0.0);
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    if (!obs.contains(e)) continue;
    const double phi = result.phi[ceg.edge(e).source];
    if (phi == 0.0) continue;
    result.pi_hat[e] = result.tau[e] / phi;
    ++result.counters.forward_edge_ops;
  }
  return result;
}

PropagationResult propagate(const TransporterCeg& ceg,
                            const CompatibleObservation& obs) {
  auto collected = collect(ceg, obs);
  if (collected.phi[ceg.root()] == 0.0) {
    throw ZeroProbabilityError(
        "observed event has probability zero; conditioning is undefined");
  }
  return distribute(ceg, obs, collected);
}

double conditional_atom_probability(const TransporterCeg& ceg,
                                    const PropagationResult& result,
                                    const Atom& path) {
  if (path.edges.empty()) throw InvalidPathError("empty path");
  PositionId at = ceg.root();
  double product = 1.0;
  double tau_product = 1.0;
  double phi_product = 1.0;
  bool all_phi_positive = true;
  for (EdgeId e : path.edges) {
    if (e >= ceg.edge_count() || ceg.edge(e).source != at) {
      throw InvalidPathError("edge sequence is not a path of this CEG");
    }
    product *= result.pi_hat[e];
    tau_product *= result.tau[e];
    const double phi = result.phi[at];
    if (phi <= 0.0) all_phi_positive = false;
    phi_product *= phi;
    at = ceg.edge(e).target;
  }
  if (!ceg.is_sink(at)) throw InvalidPathError("path does not end at the sink");
  if (all_phi_positive) {
    const double ratio = tau_product / phi_product;
    if (std::abs(product - ratio) > 1e-12) {
      throw std::logic_error("invariance violated: pi_hat product " +
                             format_double(product) + " vs tau/phi ratio " +
                             format_double(ratio));
    }
  }
  return product;
}

std::vector<double> conditional_reach_probabilities(
    const TransporterCeg& ceg, const PropagationResult& result) {
  const auto ordering = topological_edge_order(ceg);
  std::vector<double> reach(ceg.position_count(), 0.0);
  reach[ceg.root()] = 1.0;
  for (PositionId w : ordering.positions) {
    for (EdgeId e : ceg.out_edges(w)) {
      reach[ceg.edge(e).target] += reach[w] * result.pi_hat[e];
    }
  }
  return reach;
}

double conditional_reach_probability(const TransporterCeg& ceg,
                                     const PropagationResult& result,
                                     PositionId w) {
  if (w >= ceg.position_count()) throw ParameterError("unknown position id");
  return conditional_reach_probabilities(ceg, result)[w];
}

ReducedCeg reduce(const TransporterCeg& ceg, const PropagationResult& result) {
  if (result.phi[ceg.root()] == 0.0) {
    throw ZeroProbabilityError("cannot reduce: root emphasis is zero");
  }
  const std::size_t n = ceg.position_count();
  std::vector<char> keep_edge(ceg.edge_count(), 0);
  std::vector<char> keep_pos(n, 0);
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    keep_edge[e] = result.pi_hat[e] > 0.0;
  }
  for (PositionId w = 0; w < n; ++w) keep_pos[w] = result.phi[w] > 0.0;

  // Prune support that lost all inflow or outflow: positive emphasis only
  // guarantees a live future, not a live history.
  std::vector<char> forward(n, 0), backward(n, 0);
  std::vector<PositionId> stack{ceg.root()};
  forward[ceg.root()] = 1;
  while (!stack.empty()) {
    PositionId w = stack.back();
    stack.pop_back();
    for (EdgeId e : ceg.out_edges(w)) {
      PositionId t = ceg.edge(e).target;
      if (keep_edge[e] && keep_pos[t] && !forward[t]) {
        forward[t] = 1;
        stack.push_back(t);
      }
    }
  }
  stack.push_back(ceg.sink());
  backward[ceg.sink()] = 1;
  while (!stack.empty()) {
    PositionId w = stack.back();
    stack.pop_back();
    for (EdgeId e : ceg.in_edges(w)) {
      PositionId s = ceg.edge(e).source;
      if (keep_edge[e] && keep_pos[s] && !backward[s]) {
        backward[s] = 1;
        stack.push_back(s);
      }
    }
  }

  ReducedCeg reduced;
  std::vector<PositionId> new_id(n, std::numeric_limits<PositionId>::max());
  for (PositionId w = 0; w < n; ++w) {
    if (!(keep_pos[w] && forward[w] && backward[w])) continue;
    new_id[w] = reduced.graph.add_position(ceg.position_name(w));
    reduced.position_map.push_back(w);
  }
  reduced.graph.set_root(new_id[ceg.root()]);
  reduced.graph.set_sink(new_id[ceg.sink()]);
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    if (!keep_edge[e]) continue;
    const auto& edge = ceg.edge(e);
    if (new_id[edge.source] == std::numeric_limits<PositionId>::max() ||
        new_id[edge.target] == std::numeric_limits<PositionId>::max()) {
      continue;
    }
    reduced.graph.add_edge(new_id[edge.source], new_id[edge.target],
                           result.pi_hat[e], edge.name, edge.label);
    reduced.edge_map.push_back(e);
  }
  reduced.graph.validate();
  return reduced;
}

}  // namespace cegprop
