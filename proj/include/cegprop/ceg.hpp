#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cegprop/types.hpp"

namespace cegprop {

struct CegEdge {
  PositionId source;
  PositionId target;
  double prob;
  std::string name;
  std::string label;
};

// Directed acyclic multigraph of positions with a single root and a single
// sink. Parallel edges between the same pair of positions are permitted and
// carry distinct ids. The outgoing probability vector pi(w) of a position is
// ordered by edge id, which fixes the outcome indexing of the position's
// random variable. Immutable once validated; reads are thread-safe.
class TransporterCeg {
 public:
  PositionId add_position(std::string name);
  EdgeId add_edge(PositionId source, PositionId target, double prob,
                  std::string name, std::string label = {});
  void set_root(PositionId w) { root_ = w; }
  void set_sink(PositionId w) { sink_ = w; }

  std::size_t position_count() const { return position_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  PositionId root() const { return root_; }
  PositionId sink() const { return sink_; }
  bool is_sink(PositionId w) const { return w == sink_; }

  const CegEdge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<CegEdge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(PositionId w) const { return out_[w]; }
  const std::vector<EdgeId>& in_edges(PositionId w) const { return in_[w]; }
  const std::string& position_name(PositionId w) const {
    return position_names_[w];
  }

  // pi(w): outgoing edge probabilities in edge-id order.
  std::vector<double> pi(PositionId w) const;

  std::optional<PositionId> find_position(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;

  // Throws ValidationError on the first violated invariant: single root and
  // sink, acyclicity, probability ranges and sums, and every position lying
  // on some root-to-sink path.
  void validate() const;

 private:
  std::vector<std::string> position_names_;
  std::vector<CegEdge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::string, PositionId> position_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
  PositionId root_ = 0;
  PositionId sink_ = 0;
};

// Total orders used by the message passing sweeps: positions are listed
// parents-before-children (root first, sink excluded), and for edges i < j
// implies e_i never lies downstream of e_j on any root-to-sink path.
struct EdgeOrdering {
  std::vector<EdgeId> edges;
  std::vector<PositionId> positions;  // non-sink, topological
};

// Deterministic ordering by (longest distance from root, id).
// Throws ValidationError if the graph contains a cycle.
EdgeOrdering topological_edge_order(const TransporterCeg& ceg);

// All root-to-sink paths in depth-first order over edge ids.
std::vector<Atom> enumerate_paths(const TransporterCeg& ceg);

// Number of root-to-sink paths, saturating at uint64 max.
std::uint64_t count_paths(const TransporterCeg& ceg);

// Product of edge probabilities along a root-to-sink path.
// Throws InvalidPathError if the edges do not chain root to sink.
double path_probability(const TransporterCeg& ceg, const Atom& path);

// Probability of reaching position w, by forward dynamic programming over
// the prior edge probabilities: p(root) = 1, p(w) = sum over incoming edges
// of p(source) * prob.
double reach_probability(const TransporterCeg& ceg, PositionId w);
std::vector<double> reach_probabilities(const TransporterCeg& ceg);

}  // namespace cegprop
