#include "cegprop/ceg.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cegprop/errors.hpp"

namespace cegprop {

PositionId TransporterCeg::add_position(std::string name) {
  if (position_index_.contains(name)) {
    throw ValidationError("duplicate position id '" + name + "'");
  }
  const auto id = static_cast<PositionId>(position_names_.size());
  position_index_.emplace(name, id);
  position_names_.push_back(std::move(name));
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

EdgeId TransporterCeg::add_edge(PositionId source, PositionId target,
                                double prob, std::string name,
                                std::string label) {
  if (source >= position_count() || target >= position_count()) {
    throw ValidationError("edge '" + name + "' references unknown position");
  }
  if (edge_index_.contains(name)) {
    throw ValidationError("duplicate edge id '" + name + "'");
  }
  const auto id = static_cast<EdgeId>(edges_.size());
  edge_index_.emplace(name, id);
  edges_.push_back(CegEdge{source, target, prob, std::move(name), std::move(label)});
  out_[source].push_back(id);
  in_[target].push_back(id);
  return id;
}

std::vector<double> TransporterCeg::pi(PositionId w) const {
  std::vector<double> probs;
  probs.reserve(out_[w].size());
  for (EdgeId e : out_[w]) probs.push_back(edges_[e].prob);
  return probs;
}

std::optional<PositionId> TransporterCeg::find_position(
    std::string_view name) const {
  auto it = position_index_.find(std::string(name));
  if (it == position_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> TransporterCeg::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

namespace {

// Kahn sweep; returns positions in some topological order, or an empty
// vector if a cycle prevents completion.
std::vector<PositionId> kahn_order(const TransporterCeg& ceg) {
  std::vector<std::size_t> in_degree(ceg.position_count());
  std::vector<PositionId> order;
  order.reserve(ceg.position_count());
  std::vector<PositionId> ready;
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    in_degree[w] = ceg.in_edges(w).size();
    if (in_degree[w] == 0) ready.push_back(w);
  }
  while (!ready.empty()) {
    PositionId w = ready.back();
    ready.pop_back();
    order.push_back(w);
    for (EdgeId e : ceg.out_edges(w)) {
      if (--in_degree[ceg.edge(e).target] == 0) {
        ready.push_back(ceg.edge(e).target);
      }
    }
  }
  if (order.size() != ceg.position_count()) order.clear();
  return order;
}

}  // namespace

void TransporterCeg::validate() const {
  if (position_count() == 0) throw ValidationError("CEG has no positions");
  if (root_ >= position_count() || sink_ >= position_count() || root_ == sink_) {
    throw ValidationError("CEG root/sink designation is inconsistent");
  }
  for (PositionId w = 0; w < position_count(); ++w) {
    if (in_[w].empty() && w != root_) {
      throw ValidationError("position " + position_names_[w] +
                            " has no incoming edges but is not the root");
    }
    if (out_[w].empty() && w != sink_) {
      throw ValidationError("position " + position_names_[w] +
                            " has no outgoing edges but is not the sink");
    }
  }
  if (!in_[root_].empty()) {
    throw ValidationError("root " + position_names_[root_] + " has incoming edges");
  }
  if (!out_[sink_].empty()) {
    throw ValidationError("sink " + position_names_[sink_] + " has outgoing edges");
  }

  for (const auto& e : edges_) {
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) {
      throw ValidationError("edge " + e.name + " has probability " +
                            format_double(e.prob) + " outside [0,1]");
    }
  }
  for (PositionId w = 0; w < position_count(); ++w) {
    if (w == sink_) continue;
    double sum = 0.0;
    for (EdgeId e : out_[w]) sum += edges_[e].prob;
    if (std::abs(sum - 1.0) > kSumTolerance) {
      throw ValidationError("out-probabilities sum to " + format_double(sum) +
                            " at position " + position_names_[w]);
    }
  }

  if (kahn_order(*this).empty()) {
    throw ValidationError("CEG contains a cycle");
  }

  // Every position must lie on a root-to-sink path: reachable from the root
  // and able to reach the sink. With the degree checks above, forward
  // reachability alone settles both (no out-edge dead ends except the sink).
  std::vector<char> seen(position_count(), 0);
  std::vector<PositionId> stack{root_};
  seen[root_] = 1;
  while (!stack.empty()) {
    PositionId w = stack.back();
    stack.pop_back();
    for (EdgeId e : out_[w]) {
      PositionId t = edges_[e].target;
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  for (PositionId w = 0; w < position_count(); ++w) {
    if (!seen[w]) {
      throw ValidationError("position " + position_names_[w] +
                            " is not reachable from the root");
    }
  }
}

EdgeOrdering topological_edge_order(const TransporterCeg& ceg) {
  auto topo = kahn_order(ceg);
  if (topo.empty()) throw ValidationError("CEG contains a cycle");

  // level(w) = longest distance from the root. An edge out of a shallower
  // source can never lie downstream of an edge out of a deeper one, so
  // sorting by (source level, id) satisfies the no-downstream condition.
  std::vector<std::uint32_t> level(ceg.position_count(), 0);
  for (PositionId w : topo) {
    for (EdgeId e : ceg.out_edges(w)) {
      PositionId t = ceg.edge(e).target;
      level[t] = std::max(level[t], level[w] + 1);
    }
  }

  EdgeOrdering ordering;
  ordering.positions.reserve(ceg.position_count() - 1);
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    if (!ceg.is_sink(w)) ordering.positions.push_back(w);
  }
  std::stable_sort(ordering.positions.begin(), ordering.positions.end(),
                   [&](PositionId a, PositionId b) { return level[a] < level[b]; });

  ordering.edges.reserve(ceg.edge_count());
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) ordering.edges.push_back(e);
  std::stable_sort(ordering.edges.begin(), ordering.edges.end(),
                   [&](EdgeId a, EdgeId b) {
                     return level[ceg.edge(a).source] < level[ceg.edge(b).source];
                   });
  return ordering;
}

std::vector<Atom> enumerate_paths(const TransporterCeg& ceg) {
  std::vector<Atom> paths;
  std::vector<EdgeId> prefix;
  std::vector<std::pair<PositionId, std::size_t>> stack{{ceg.root(), 0}};
  while (!stack.empty()) {
    auto& [w, next] = stack.back();
    const auto& out = ceg.out_edges(w);
    if (next == out.size()) {
      stack.pop_back();
      if (!prefix.empty()) prefix.pop_back();
      continue;
    }
    EdgeId e = out[next++];
    PositionId t = ceg.edge(e).target;
    prefix.push_back(e);
    if (ceg.is_sink(t)) {
      paths.push_back(Atom{prefix});
      prefix.pop_back();
    } else {
      stack.emplace_back(t, 0);
    }
  }
  return paths;
}

std::uint64_t count_paths(const TransporterCeg& ceg) {
  constexpr auto kMax = std::numeric_limits<std::uint64_t>::max();
  auto sat_add = [](std::uint64_t a, std::uint64_t b) {
    return a > kMax - b ? kMax : a + b;
  };
  auto topo = kahn_order(ceg);
  if (topo.empty()) throw ValidationError("CEG contains a cycle");
  std::vector<std::uint64_t> walks(ceg.position_count(), 0);
  walks[ceg.root()] = 1;
  for (PositionId w : topo) {
    for (EdgeId e : ceg.out_edges(w)) {
      auto& t = walks[ceg.edge(e).target];
      t = sat_add(t, walks[w]);
    }
  }
  return walks[ceg.sink()];
}

double path_probability(const TransporterCeg& ceg, const Atom& path) {
  if (path.edges.empty()) throw InvalidPathError("empty path");
  PositionId at = ceg.root();
  double prob = 1.0;
  for (EdgeId e : path.edges) {
    if (e >= ceg.edge_count() || ceg.edge(e).source != at) {
      throw InvalidPathError("edge sequence is not a path of this CEG");
    }
    prob *= ceg.edge(e).prob;
    at = ceg.edge(e).target;
  }
  if (!ceg.is_sink(at)) throw InvalidPathError("path does not end at the sink");
  return prob;
}

std::vector<double> reach_probabilities(const TransporterCeg& ceg) {
  auto topo = kahn_order(ceg);
  if (topo.empty()) throw ValidationError("CEG contains a cycle");
  std::vector<double> reach(ceg.position_count(), 0.0);
  reach[ceg.root()] = 1.0;
  for (PositionId w : topo) {
    for (EdgeId e : ceg.out_edges(w)) {
      reach[ceg.edge(e).target] += reach[w] * ceg.edge(e).prob;
    }
  }
  return reach;
}

double reach_probability(const TransporterCeg& ceg, PositionId w) {
  if (w >= ceg.position_count()) throw ParameterError("unknown position id");
  return reach_probabilities(ceg)[w];
}

}  // namespace cegprop
