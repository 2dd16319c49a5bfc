#include "cegprop/observation.hpp"

#include <algorithm>
#include <set>

#include "cegprop/errors.hpp"

namespace cegprop {

CompatibleObservation CompatibleObservation::from_union(
    const TransporterCeg& ceg, const std::vector<EdgeId>& edges) {
  CompatibleObservation obs;
  obs.member_.assign(ceg.edge_count(), 0);
  for (EdgeId e : edges) {
    if (e >= ceg.edge_count()) {
      throw ValidationError("observation references an unknown edge id");
    }
    obs.member_[e] = 1;
  }
  for (EdgeId e = 0; e < obs.member_.size(); ++e) {
    if (obs.member_[e]) obs.union_.push_back(e);
  }
  return obs;
}

CompatibleObservation CompatibleObservation::from_edge_sets(
    const TransporterCeg& ceg,
    const std::map<PositionId, std::vector<EdgeId>>& sets) {
  std::vector<char> member(ceg.edge_count(), 0);
  std::vector<char> position_given(ceg.position_count(), 0);
  for (const auto& [w, subset] : sets) {
    if (w >= ceg.position_count() || ceg.is_sink(w)) {
      throw ValidationError("observation references an unknown position");
    }
    position_given[w] = 1;
    for (EdgeId e : subset) {
      if (e >= ceg.edge_count() || ceg.edge(e).source != w) {
        throw ValidationError("edge " +
                              (e < ceg.edge_count() ? ceg.edge(e).name
                                                    : std::string("<bad>")) +
                              " listed under position " + ceg.position_name(w) +
                              " it does not leave");
      }
      member[e] = 1;
    }
  }
  // Unmentioned positions carry no information: keep their full edge set.
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    if (ceg.is_sink(w) || position_given[w]) continue;
    for (EdgeId e : ceg.out_edges(w)) member[e] = 1;
  }
  std::vector<EdgeId> edges;
  for (EdgeId e = 0; e < member.size(); ++e) {
    if (member[e]) edges.push_back(e);
  }
  return from_union(ceg, edges);
}

CompatibleObservation CompatibleObservation::vacuous(const TransporterCeg& ceg) {
  std::vector<EdgeId> all(ceg.edge_count());
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) all[e] = e;
  return from_union(ceg, all);
}

std::vector<EdgeId> CompatibleObservation::edges_at(const TransporterCeg& ceg,
                                                    PositionId w) const {
  std::vector<EdgeId> result;
  for (EdgeId e : ceg.out_edges(w)) {
    if (member_[e]) result.push_back(e);
  }
  return result;
}

std::vector<Atom> paths_of(const TransporterCeg& ceg,
                           const CompatibleObservation& obs) {
  std::vector<Atom> paths;
  std::vector<EdgeId> prefix;
  std::vector<std::pair<PositionId, std::size_t>> stack{{ceg.root(), 0}};
  while (!stack.empty()) {
    auto& [w, next] = stack.back();
    const auto& out = ceg.out_edges(w);
    while (next < out.size() && !obs.contains(out[next])) ++next;
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

CompatibilityCheck check_compatibility(const TransporterCeg& ceg,
                                       const std::vector<Atom>& paths) {
  std::vector<EdgeId> used;
  std::set<std::vector<EdgeId>> given;
  for (const auto& path : paths) {
    // Validates root-to-sink chaining as a side effect.
    (void)path_probability(ceg, path);
    given.insert(path.edges);
    for (EdgeId e : path.edges) used.push_back(e);
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  auto observation = CompatibleObservation::from_union(ceg, used);
  auto induced = paths_of(ceg, observation);
  // The induced set always contains the input; compatibility is equality.
  for (const auto& path : induced) {
    if (!given.contains(path.edges)) {
      CompatibilityCheck check;
      check.witness = path;
      return check;
    }
  }
  CompatibilityCheck check;
  check.observation = std::move(observation);
  return check;
}

}  // namespace cegprop
