#include "cegprop/tree.hpp"

#include <algorithm>
#include <cmath>

#include "cegprop/errors.hpp"

namespace cegprop {

VertexId ProbabilityTree::add_vertex(std::string name) {
  if (vertex_index_.contains(name)) {
    throw ValidationError("duplicate vertex id '" + name + "'");
  }
  const auto id = static_cast<VertexId>(vertex_names_.size());
  vertex_index_.emplace(name, id);
  vertex_names_.push_back(std::move(name));
  out_.emplace_back();
  in_.emplace_back();
  return id;
}

EdgeId ProbabilityTree::add_edge(VertexId source, VertexId target, double prob,
                                 std::string name, std::string label) {
  if (source >= vertex_count() || target >= vertex_count()) {
    throw ValidationError("edge '" + name + "' references unknown vertex");
  }
  if (edge_index_.contains(name)) {
    throw ValidationError("duplicate edge id '" + name + "'");
  }
  const auto id = static_cast<EdgeId>(edges_.size());
  edge_index_.emplace(name, id);
  edges_.push_back(TreeEdge{source, target, prob, std::move(name), std::move(label)});
  out_[source].push_back(id);
  in_[target].push_back(id);
  return id;
}

VertexId ProbabilityTree::root() const {
  std::optional<VertexId> root;
  for (VertexId v = 0; v < vertex_count(); ++v) {
    if (in_[v].empty()) {
      if (root) throw ValidationError("tree has more than one root");
      root = v;
    }
  }
  if (!root) throw ValidationError("tree has no root");
  return *root;
}

std::optional<VertexId> ProbabilityTree::find_vertex(
    std::string_view name) const {
  auto it = vertex_index_.find(std::string(name));
  if (it == vertex_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<EdgeId> ProbabilityTree::find_edge(std::string_view name) const {
  auto it = edge_index_.find(std::string(name));
  if (it == edge_index_.end()) return std::nullopt;
  return it->second;
}

ValidationReport validate_tree(const ProbabilityTree& tree) {
  ValidationReport report;
  auto add = [&](std::string code, std::string message) {
    report.violations.push_back({std::move(code), std::move(message)});
  };

  if (tree.vertex_count() == 0) {
    add("empty", "tree has no vertices");
    return report;
  }

  std::optional<VertexId> root;
  std::size_t root_count = 0;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    const auto in_degree = tree.in_edges(v).size();
    if (in_degree == 0) {
      ++root_count;
      if (!root) root = v;
    } else if (in_degree > 1) {
      add("multi-parent", "vertex " + tree.vertex_name(v) + " has " +
                              std::to_string(in_degree) + " incoming edges");
    }
  }
  if (root_count == 0) add("no-root", "tree has no root (every vertex has a parent)");
  if (root_count > 1) add("multi-root", std::to_string(root_count) + " roots found");

  for (const auto& e : tree.edges()) {
    if (!(e.prob >= 0.0 && e.prob <= 1.0)) {
      add("prob-range", "edge " + e.name + " has probability " +
                            format_double(e.prob) + " outside [0,1]");
    }
  }

  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    double sum = 0.0;
    for (EdgeId e : tree.out_edges(v)) sum += tree.edge(e).prob;
    if (std::abs(sum - 1.0) > kSumTolerance) {
      add("prob-sum", "out-probabilities sum to " + format_double(sum) +
                          " at vertex " + tree.vertex_name(v));
    }
  }

  if (root_count == 1) {
    if (tree.is_leaf(*root) && tree.vertex_count() == 1) {
      add("degenerate", "root " + tree.vertex_name(*root) +
                            " has no outgoing edges (empty model)");
    }
    // Reachability: with unique parents a cycle shows up as an island.
    std::vector<char> seen(tree.vertex_count(), 0);
    std::vector<VertexId> stack{*root};
    seen[*root] = 1;
    while (!stack.empty()) {
      VertexId v = stack.back();
      stack.pop_back();
      for (EdgeId e : tree.out_edges(v)) {
        VertexId t = tree.edge(e).target;
        if (!seen[t]) {
          seen[t] = 1;
          stack.push_back(t);
        }
      }
    }
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
      if (!seen[v]) {
        add("unreachable",
            "vertex " + tree.vertex_name(v) + " is not reachable from the root");
      }
    }
  }
  return report;
}

void require_valid(const ProbabilityTree& tree) {
  auto report = validate_tree(tree);
  if (!report.ok()) {
    throw ValidationError("invalid tree: " + report.violations.front().message);
  }
}

std::vector<Atom> enumerate_atoms(const ProbabilityTree& tree) {
  std::vector<Atom> atoms;
  const VertexId root = tree.root();
  if (tree.is_leaf(root)) return atoms;

  // Iterative DFS; frame i holds the index into out_edges of the vertex
  // reached by the current prefix.
  std::vector<EdgeId> prefix;
  std::vector<std::pair<VertexId, std::size_t>> stack{{root, 0}};
  while (!stack.empty()) {
    auto& [v, next] = stack.back();
    const auto& out = tree.out_edges(v);
    if (next == out.size()) {
      stack.pop_back();
      if (!prefix.empty()) prefix.pop_back();
      continue;
    }
    EdgeId e = out[next++];
    VertexId t = tree.edge(e).target;
    prefix.push_back(e);
    if (tree.is_leaf(t)) {
      atoms.push_back(Atom{prefix});
      prefix.pop_back();
    } else {
      stack.emplace_back(t, 0);
    }
  }
  return atoms;
}

double atom_probability(const ProbabilityTree& tree, const Atom& atom) {
  if (atom.edges.empty()) throw InvalidPathError("empty atom");
  VertexId at = tree.root();
  double prob = 1.0;
  for (EdgeId e : atom.edges) {
    if (e >= tree.edge_count() || tree.edge(e).source != at) {
      throw InvalidPathError("atom is not a path in this tree");
    }
    prob *= tree.edge(e).prob;
    at = tree.edge(e).target;
  }
  if (!tree.is_leaf(at)) {
    throw InvalidPathError("atom does not end at a leaf");
  }
  return prob;
}

std::vector<std::vector<double>> to_transition_matrix(
    const ProbabilityTree& tree) {
  const std::size_t n = tree.vertex_count();
  std::vector<std::vector<double>> matrix(n, std::vector<double>(n, 0.0));
  for (const auto& e : tree.edges()) {
    matrix[e.source][e.target] = e.prob;
  }
  return matrix;
}

}  // namespace cegprop
