#include <doctest.h>

#include <cmath>

#include "cegprop/errors.hpp"
#include "cegprop/examples.hpp"
#include "cegprop/generators.hpp"
#include "cegprop/tree.hpp"

using namespace cegprop;

namespace {

ProbabilityTree two_leaf_tree(double p0, double p1) {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  t.add_edge(r, a, p0, "e0");
  t.add_edge(r, b, p1, "e1");
  return t;
}

ProbabilityTree balanced_binary(int depth) {
  ProbabilityTree t;
  int vertices = 0;
  int edges = 0;
  auto build = [&](auto&& self, int level) -> VertexId {
    auto v = t.add_vertex("n" + std::to_string(vertices++));
    if (level == 0) return v;
    auto l = self(self, level - 1);
    auto r = self(self, level - 1);
    t.add_edge(v, l, 0.5, "e" + std::to_string(edges++));
    t.add_edge(v, r, 0.5, "e" + std::to_string(edges++));
    return v;
  };
  build(build, depth);
  return t;
}

}  // namespace

TEST_SUITE("tree") {

TEST_CASE("medical example tree is valid") {
  const auto tree = examples::medical_tree();
  CHECK(validate_tree(tree).ok());
  CHECK(tree.vertex_count() == 27);
  CHECK(tree.edge_count() == 26);
}

TEST_CASE("smallest nontrivial tree validates, bad sums are reported") {
  CHECK(validate_tree(two_leaf_tree(0.5, 0.5)).ok());

  const auto report = validate_tree(two_leaf_tree(0.5, 0.6));
  REQUIRE_FALSE(report.ok());
  CHECK(report.violations.front().code == "prob-sum");
  CHECK(report.violations.front().message.find("r") != std::string::npos);
}

TEST_CASE("validation lists every violation") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  t.add_edge(r, a, 0.5, "e0");
  t.add_edge(r, b, 1.5, "e1");  // range and sum both wrong
  const auto report = validate_tree(t);
  CHECK(report.violations.size() == 2);
}

TEST_CASE("second parent and unreachable vertices are violations") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  t.add_edge(r, a, 0.5, "e0");
  t.add_edge(r, b, 0.5, "e1");
  t.add_edge(a, b, 1.0, "e2");  // b now has two parents
  // A two-cycle island: every vertex has a parent, so the root stays
  // unique, but neither island vertex is reachable.
  auto x = t.add_vertex("x");
  auto y = t.add_vertex("y");
  t.add_edge(x, y, 1.0, "e3");
  t.add_edge(y, x, 1.0, "e4");
  const auto report = validate_tree(t);
  bool saw_multi_parent = false;
  bool saw_unreachable = false;
  for (const auto& v : report.violations) {
    saw_multi_parent |= v.code == "multi-parent";
    saw_unreachable |= v.code == "unreachable";
  }
  CHECK(saw_multi_parent);
  CHECK(saw_unreachable);
}

TEST_CASE("atom enumeration counts") {
  CHECK(enumerate_atoms(examples::medical_tree()).size() == 16);

  ProbabilityTree single;
  auto r = single.add_vertex("r");
  auto l = single.add_vertex("l");
  single.add_edge(r, l, 1.0, "e0");
  const auto atoms = enumerate_atoms(single);
  REQUIRE(atoms.size() == 1);
  CHECK(atoms[0].edges.size() == 1);

  CHECK(enumerate_atoms(balanced_binary(3)).size() == 8);
}

TEST_CASE("atom enumeration is a bijection onto leaves") {
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto tree = random_tree(seed, {.max_depth = 5, .merge_bias = 0.4});
    std::size_t leaves = 0;
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
      if (tree.is_leaf(v)) ++leaves;
    }
    CHECK(enumerate_atoms(tree).size() == leaves);
  }
}

TEST_CASE("atom probability is the edge product") {
  const auto tree = examples::medical_tree();
  Atom atom{{*tree.find_edge("e1"), *tree.find_edge("e5"),
             *tree.find_edge("e10")}};
  CHECK(atom_probability(tree, atom) == doctest::Approx(0.10).epsilon(1e-12));

  // Chain with all probabilities one.
  ProbabilityTree chain;
  auto v = chain.add_vertex("n0");
  auto u = chain.add_vertex("n1");
  auto w = chain.add_vertex("n2");
  chain.add_edge(v, u, 1.0, "a");
  chain.add_edge(u, w, 1.0, "b");
  CHECK(atom_probability(chain, enumerate_atoms(chain)[0]) == 1.0);
}

TEST_CASE("atom probability rejects non-paths") {
  const auto tree = examples::medical_tree();
  CHECK_THROWS_AS(atom_probability(tree, Atom{}), InvalidPathError);
  // e1 then e6 does not chain (e6 leaves v2, not v1).
  Atom broken{{*tree.find_edge("e1"), *tree.find_edge("e6")}};
  CHECK_THROWS_AS(atom_probability(tree, broken), InvalidPathError);
  // Stops at a situation.
  Atom prefix{{*tree.find_edge("e1")}};
  CHECK_THROWS_AS(atom_probability(tree, prefix), InvalidPathError);
}

TEST_CASE("atom probabilities sum to one") {
  for (std::uint64_t seed : {7u, 11u, 13u}) {
    const auto tree =
        random_tree(seed, {.max_depth = 5, .max_branch = 4, .merge_bias = 0.3});
    double sum = 0.0;
    for (const auto& atom : enumerate_atoms(tree)) {
      sum += atom_probability(tree, atom);
    }
    CHECK(std::abs(sum - 1.0) <= 1e-9);
  }
}

TEST_CASE("transition matrix matches the edge structure") {
  const auto tree = examples::medical_tree();
  const auto matrix = to_transition_matrix(tree);
  REQUIRE(matrix.size() == tree.vertex_count());

  // First rows carry the initial-stage transitions and nothing else.
  auto at = [&](const char* from, const char* to) {
    return matrix[*tree.find_vertex(from)][*tree.find_vertex(to)];
  };
  CHECK(at("v0", "v1") == 0.5);
  CHECK(at("v0", "v2") == 0.3);
  CHECK(at("v0", "v3") == 0.2);
  CHECK(at("v1", "l1") == 0.6);
  CHECK(at("v1", "v4a") == 0.4);
  CHECK(at("v2", "v4b") == 0.7);
  CHECK(at("v2", "v5a") == 0.3);
  CHECK(at("v3", "v4c") == 0.5);
  CHECK(at("v3", "v5b") == 0.5);
  std::size_t nonzeros = 0;
  for (const auto& row : matrix) {
    for (double value : row) nonzeros += value != 0.0;
  }
  CHECK(nonzeros == tree.edge_count());

  // Row sums: one for situations, zero for leaves; zero diagonal; upper
  // triangular under the parents-first vertex numbering of the example.
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    double row_sum = 0.0;
    for (double value : matrix[v]) row_sum += value;
    if (tree.is_leaf(v)) {
      CHECK(row_sum == 0.0);
    } else {
      CHECK(std::abs(row_sum - 1.0) <= 1e-9);
    }
    CHECK(matrix[v][v] == 0.0);
    for (VertexId u = 0; u < v; ++u) CHECK(matrix[v][u] == 0.0);
  }
}

TEST_CASE("transition matrix of a single edge") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto l = t.add_vertex("l");
  t.add_edge(r, l, 1.0, "e0");
  const auto matrix = to_transition_matrix(t);
  CHECK(matrix.size() == 2);
  CHECK(matrix[0][1] == 1.0);
  CHECK(matrix[0][0] + matrix[1][0] + matrix[1][1] == 0.0);
}

TEST_CASE("transition matrix is nilpotent") {
  const auto tree = random_tree(5, {.max_depth = 4, .max_vertices = 40});
  auto matrix = to_transition_matrix(tree);
  const std::size_t n = matrix.size();
  // Raise to the vertex-count power by repeated multiplication.
  auto multiply = [&](const auto& a, const auto& b) {
    std::vector<std::vector<double>> c(n, std::vector<double>(n, 0.0));
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t k = 0; k < n; ++k) {
        if (a[i][k] == 0.0) continue;
        for (std::size_t j = 0; j < n; ++j) c[i][j] += a[i][k] * b[k][j];
      }
    }
    return c;
  };
  auto power = matrix;
  for (std::size_t step = 1; step < 6; ++step) power = multiply(power, matrix);
  for (const auto& row : power) {
    for (double value : row) CHECK(value == 0.0);
  }
}

}  // TEST_SUITE
