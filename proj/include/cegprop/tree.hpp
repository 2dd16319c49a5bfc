#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "cegprop/types.hpp"

namespace cegprop {

struct TreeEdge {
  VertexId source;
  VertexId target;
  double prob;
  std::string name;   // stable user-facing id, e.g. "e5"
  std::string label;  // optional descriptor, empty = none
};

// Rooted directed tree with per-edge transition probabilities. Vertices and
// edges are added once; all operations treat the tree as immutable, so
// concurrent reads are safe. Vertex and edge names must be unique; internal
// ids are dense and follow insertion order.
class ProbabilityTree {
 public:
  VertexId add_vertex(std::string name);
  EdgeId add_edge(VertexId source, VertexId target, double prob,
                  std::string name, std::string label = {});

  std::size_t vertex_count() const { return vertex_names_.size(); }
  std::size_t edge_count() const { return edges_.size(); }

  const TreeEdge& edge(EdgeId e) const { return edges_[e]; }
  const std::vector<TreeEdge>& edges() const { return edges_; }
  const std::vector<EdgeId>& out_edges(VertexId v) const { return out_[v]; }
  const std::vector<EdgeId>& in_edges(VertexId v) const { return in_[v]; }
  const std::string& vertex_name(VertexId v) const { return vertex_names_[v]; }

  bool is_leaf(VertexId v) const { return out_[v].empty(); }
  bool is_situation(VertexId v) const { return !out_[v].empty(); }

  // The unique in-degree-zero vertex. Throws ValidationError if the tree
  // does not have exactly one.
  VertexId root() const;

  std::optional<VertexId> find_vertex(std::string_view name) const;
  std::optional<EdgeId> find_edge(std::string_view name) const;

 private:
  std::vector<std::string> vertex_names_;
  std::vector<TreeEdge> edges_;
  std::vector<std::vector<EdgeId>> out_;
  std::vector<std::vector<EdgeId>> in_;
  std::unordered_map<std::string, VertexId> vertex_index_;
  std::unordered_map<std::string, EdgeId> edge_index_;
};

struct Violation {
  std::string code;     // machine-checkable tag, e.g. "prob-sum"
  std::string message;  // human diagnostic naming the offending element
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
};

// Checks every structural invariant and reports all violations: single
// root, unique parents, reachability, probabilities in [0,1], out-probability
// sums within kSumTolerance, and a branching root.
ValidationReport validate_tree(const ProbabilityTree& tree);

// Throws ValidationError with the first violation's message if invalid.
void require_valid(const ProbabilityTree& tree);

// All root-to-leaf paths in depth-first order (children visited in edge
// insertion order), so the result is deterministic.
std::vector<Atom> enumerate_atoms(const ProbabilityTree& tree);

// Product of edge probabilities along the atom. Throws InvalidPathError if
// the edges do not chain from the root to a leaf.
double atom_probability(const ProbabilityTree& tree, const Atom& atom);

// Dense |V| x |V| transition matrix: entry (u,v) is the probability of the
// u->v edge, zero elsewhere. Leaves are absorbing (zero rows).
std::vector<std::vector<double>> to_transition_matrix(
    const ProbabilityTree& tree);

}  // namespace cegprop
