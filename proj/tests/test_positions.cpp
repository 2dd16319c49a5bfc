#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>

#include "cegprop/errors.hpp"
#include "cegprop/examples.hpp"
#include "cegprop/generators.hpp"
#include "cegprop/positions.hpp"
#include "test_helpers.hpp"

using namespace cegprop;
using namespace cegprop::testing;

namespace {

std::set<std::string> block_names(const ProbabilityTree& tree,
                                  const std::vector<VertexId>& block) {
  std::set<std::string> names;
  for (VertexId v : block) names.insert(tree.vertex_name(v));
  return names;
}

}  // namespace

TEST_SUITE("positions") {

TEST_CASE("medical tree has the seven expected positions") {
  const auto tree = examples::medical_tree();
  const auto partition = compute_positions(tree);
  REQUIRE(partition.blocks.size() == 7);

  CHECK(block_names(tree, partition.blocks[0]) == std::set<std::string>{"v0"});
  CHECK(block_names(tree, partition.blocks[1]) == std::set<std::string>{"v1"});
  CHECK(block_names(tree, partition.blocks[2]) == std::set<std::string>{"v2"});
  CHECK(block_names(tree, partition.blocks[3]) == std::set<std::string>{"v3"});
  CHECK(block_names(tree, partition.blocks[4]) ==
        std::set<std::string>{"v4a", "v4b", "v4c"});
  CHECK(block_names(tree, partition.blocks[5]) ==
        std::set<std::string>{"v5a", "v5b"});
  CHECK(block_names(tree, partition.blocks[6]) ==
        std::set<std::string>{"v6a", "v6b"});
}

TEST_CASE("distinct probability vectors give singleton blocks") {
  const auto tree = random_tree(42, {.max_depth = 4, .merge_bias = 0.0});
  const auto partition = compute_positions(tree);
  for (const auto& block : partition.blocks) CHECK(block.size() == 1);
}

TEST_CASE("sibling subtree copies share a block") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  t.add_edge(r, a, 0.4, "ra");
  t.add_edge(r, b, 0.6, "rb");
  for (char side : {'a', 'b'}) {
    auto parent = side == 'a' ? a : b;
    auto l = t.add_vertex(std::string("l") + side);
    auto m = t.add_vertex(std::string("m") + side);
    t.add_edge(parent, l, 0.3, std::string("e") + side + "0");
    t.add_edge(parent, m, 0.7, std::string("e") + side + "1");
  }
  REQUIRE(validate_tree(t).ok());
  CHECK(subtrees_isomorphic(t, a, b));

  const auto partition = compute_positions(t);
  CHECK(partition.block_of[a] == partition.block_of[b]);
}

TEST_CASE("partition agrees with the brute-force subtree comparison") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto tree = random_tree(
        seed, {.max_depth = 4, .max_branch = 3, .merge_bias = 0.6,
               .max_vertices = 50});
    const auto partition = compute_positions(tree);
    std::vector<VertexId> situations;
    for (VertexId v = 0; v < tree.vertex_count(); ++v) {
      if (tree.is_situation(v)) situations.push_back(v);
    }
    for (std::size_t i = 0; i < situations.size(); ++i) {
      for (std::size_t j = i + 1; j < situations.size(); ++j) {
        const bool same_block = partition.block_of[situations[i]] ==
                                partition.block_of[situations[j]];
        const bool isomorphic =
            subtrees_isomorphic(tree, situations[i], situations[j]);
        CHECK(same_block == isomorphic);
      }
    }
  }
}

TEST_CASE("closure: matched descendants stay in common blocks") {
  const auto tree = random_tree(3, {.max_depth = 4, .merge_bias = 0.7,
                                    .max_vertices = 60});
  const auto partition = compute_positions(tree);
  const auto ceg = build_transporter_ceg(tree, partition);
  // Walking any atom through the bijection visits, step by step, the block
  // of the vertex reached; a mismatch would throw inside the mapping.
  for (const auto& atom : enumerate_atoms(tree)) {
    const auto path = tree_atom_to_ceg_path(tree, partition, ceg, atom);
    REQUIRE(path.edges.size() == atom.edges.size());
    VertexId v = tree.root();
    for (std::size_t i = 0; i < atom.edges.size(); ++i) {
      v = tree.edge(atom.edges[i]).target;
      const auto expected = tree.is_leaf(v) ? ceg.sink()
                                            : partition.block_of[v];
      CHECK(ceg.edge(path.edges[i]).target == expected);
    }
  }
}

TEST_CASE("label handling is switchable") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  auto la = t.add_vertex("la");
  auto lb = t.add_vertex("lb");
  t.add_edge(r, a, 0.5, "ra");
  t.add_edge(r, b, 0.5, "rb");
  t.add_edge(a, la, 1.0, "ea", "yes");
  t.add_edge(b, lb, 1.0, "eb", "no");

  const auto strict = compute_positions(t, {.match_labels = true});
  CHECK(strict.block_of[a] != strict.block_of[b]);
  const auto loose = compute_positions(t, {.match_labels = false});
  CHECK(loose.block_of[a] == loose.block_of[b]);
}

TEST_CASE("probability tolerance can coarsen merging") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  auto la = t.add_vertex("la");
  auto ma = t.add_vertex("ma");
  auto lb = t.add_vertex("lb");
  auto mb = t.add_vertex("mb");
  t.add_edge(r, a, 0.5, "ra");
  t.add_edge(r, b, 0.5, "rb");
  t.add_edge(a, la, 0.3, "ea0");
  t.add_edge(a, ma, 0.7, "ea1");
  t.add_edge(b, lb, 0.3 + 1e-12, "eb0");
  t.add_edge(b, mb, 0.7 - 1e-12, "eb1");

  const auto exact = compute_positions(t);
  CHECK(exact.block_of[a] != exact.block_of[b]);
  const auto coarse = compute_positions(t, {.prob_tolerance = 1e-9});
  CHECK(coarse.block_of[a] == coarse.block_of[b]);
}

TEST_CASE("medical CEG structure") {
  const auto tree = examples::medical_tree();
  const auto ceg = build_transporter_ceg(tree);
  CHECK(ceg.position_count() == 8);
  CHECK(ceg.edge_count() == 16);
  CHECK(ceg.position_name(ceg.root()) == "w0");
  CHECK(ceg.position_name(ceg.sink()) == "winf");

  // Edge names carry over from the representatives in order.
  for (int i = 1; i <= 16; ++i) {
    CHECK(ceg.find_edge("e" + std::to_string(i)).has_value());
  }
  CHECK(ceg.pi(*ceg.find_position("w0")) ==
        std::vector<double>{0.5, 0.3, 0.2});
  CHECK(ceg.pi(*ceg.find_position("w4")) ==
        std::vector<double>{0.5, 0.3, 0.2});
  CHECK(ceg.pi(*ceg.find_position("w5")) == std::vector<double>{0.25, 0.75});
}

TEST_CASE("single edge tree builds the two-position CEG") {
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto l = t.add_vertex("l");
  t.add_edge(r, l, 1.0, "e0");
  const auto ceg = build_transporter_ceg(t);
  CHECK(ceg.position_count() == 2);
  CHECK(ceg.edge_count() == 1);
}

TEST_CASE("path bijection preserves the distribution atom by atom") {
  for (std::uint64_t seed : {2u, 9u, 21u}) {
    const auto tree = random_tree(seed, {.max_depth = 5, .merge_bias = 0.5});
    const auto partition = compute_positions(tree);
    const auto ceg = build_transporter_ceg(tree, partition);

    const auto atoms = enumerate_atoms(tree);
    CHECK(atoms.size() == count_paths(ceg));

    std::set<std::vector<EdgeId>> images;
    double total = 0.0;
    for (const auto& atom : atoms) {
      const auto path = tree_atom_to_ceg_path(tree, partition, ceg, atom);
      images.insert(path.edges);
      const double tree_prob = atom_probability(tree, atom);
      const double ceg_prob = path_probability(ceg, path);
      CHECK(std::abs(tree_prob - ceg_prob) <= 1e-12);
      total += ceg_prob;
    }
    CHECK(images.size() == atoms.size());  // injective, hence bijective
    CHECK(std::abs(total - 1.0) <= 1e-9);
  }
}

TEST_CASE("minimize leaves the already-minimal medical CEG unchanged") {
  const auto ceg = examples::medical_ceg();
  const auto minimal = minimize_ceg(ceg);
  CHECK(minimal.position_count() == ceg.position_count());
  CHECK(minimal.edge_count() == ceg.edge_count());
  CHECK(cegs_bisimilar(ceg, minimal));
}

TEST_CASE("minimize restores a hand-split position") {
  const auto original = examples::medical_ceg();

  // Rebuild the medical CEG with w4 duplicated: e6 re-targeted to the copy,
  // which has its own copies of e10, e11, e12.
  TransporterCeg split;
  for (PositionId w = 0; w < original.position_count(); ++w) {
    split.add_position(original.position_name(w));
  }
  const auto w4_copy = split.add_position("w4x");
  split.set_root(original.root());
  split.set_sink(original.sink());
  const auto w4 = *original.find_position("w4");
  for (const auto& e : original.edges()) {
    if (e.name == "e6") {
      split.add_edge(e.source, w4_copy, e.prob, e.name, e.label);
    } else {
      split.add_edge(e.source, e.target, e.prob, e.name, e.label);
    }
  }
  for (EdgeId e : original.out_edges(w4)) {
    const auto& edge = original.edge(e);
    split.add_edge(w4_copy, edge.target, edge.prob, edge.name + "x", edge.label);
  }
  split.validate();
  CHECK(split.position_count() == 9);
  CHECK(split.edge_count() == 19);

  const auto minimal = minimize_ceg(split);
  CHECK(minimal.position_count() == original.position_count());
  CHECK(minimal.edge_count() == original.edge_count());
  CHECK(cegs_bisimilar(minimal, original));
  CHECK(path_probability_multiset(minimal) ==
        path_probability_multiset(original));
}

TEST_CASE("minimize cascades merges upward to a fixpoint") {
  // c and d merge first; that makes a and b equal, which merge next; the
  // root ends up with two parallel edges into the survivor.
  TransporterCeg g;
  auto r = g.add_position("r");
  auto a = g.add_position("a");
  auto b = g.add_position("b");
  auto c = g.add_position("c");
  auto d = g.add_position("d");
  auto s = g.add_position("s");
  g.set_root(r);
  g.set_sink(s);
  g.add_edge(r, a, 0.5, "ra", "x");
  g.add_edge(r, b, 0.5, "rb", "y");
  g.add_edge(a, c, 1.0, "ac");
  g.add_edge(b, d, 1.0, "bd");
  g.add_edge(c, s, 1.0, "cs");
  g.add_edge(d, s, 1.0, "ds");
  g.validate();

  const auto minimal = minimize_ceg(g);
  CHECK(minimal.position_count() == 4);  // r, a, c, s survive
  CHECK(minimal.edge_count() == 4);
  CHECK(minimal.find_position("a").has_value());
  CHECK_FALSE(minimal.find_position("b").has_value());
  CHECK_FALSE(minimal.find_position("d").has_value());
  CHECK(minimal.out_edges(minimal.root()).size() == 2);  // parallel pair
  CHECK(path_probability_multiset(minimal) == path_probability_multiset(g));
}

TEST_CASE("minimize is idempotent and prior-preserving on random graphs") {
  for (std::uint64_t seed : {4u, 17u}) {
    const auto tree = random_tree(seed, {.max_depth = 5, .merge_bias = 0.5});
    const auto ceg = build_transporter_ceg(tree);
    const auto once = minimize_ceg(ceg);
    const auto twice = minimize_ceg(once);
    CHECK(once.position_count() == twice.position_count());
    CHECK(once.edge_count() == twice.edge_count());
    CHECK(cegs_bisimilar(once, twice));
    CHECK(path_probability_multiset(ceg) == path_probability_multiset(once));
    // Quotients by subtree identity are already minimal.
    CHECK(once.position_count() == ceg.position_count());
  }
}

TEST_CASE("indistinguishable sibling edges survive as parallel CEG edges") {
  // Two situations, each with two equal-probability, equally-labelled leaf
  // children: the situations merge and the CEG keeps both parallel edges.
  ProbabilityTree t;
  auto r = t.add_vertex("r");
  auto a = t.add_vertex("a");
  auto b = t.add_vertex("b");
  t.add_edge(r, a, 0.5, "ra");
  t.add_edge(r, b, 0.5, "rb");
  for (char side : {'a', 'b'}) {
    auto parent = side == 'a' ? a : b;
    auto l = t.add_vertex(std::string("l") + side);
    auto m = t.add_vertex(std::string("m") + side);
    t.add_edge(parent, l, 0.5, std::string("e") + side + "0", "same");
    t.add_edge(parent, m, 0.5, std::string("e") + side + "1", "same");
  }
  REQUIRE(validate_tree(t).ok());

  const auto partition = compute_positions(t);
  CHECK(partition.block_of[a] == partition.block_of[b]);
  const auto ceg = build_transporter_ceg(t, partition);
  CHECK(ceg.position_count() == 3);  // root, merged pair, sink
  CHECK(ceg.edge_count() == 4);      // two root edges + two parallel edges

  // The bijection maps the four atoms onto four distinct paths.
  std::set<std::vector<EdgeId>> images;
  for (const auto& atom : enumerate_atoms(t)) {
    images.insert(tree_atom_to_ceg_path(t, partition, ceg, atom).edges);
  }
  CHECK(images.size() == 4);

  // Minimization does not collapse the parallel pair.
  const auto minimal = minimize_ceg(ceg);
  CHECK(minimal.edge_count() == 4);
}

TEST_CASE("canonical form strings expose the sorted structure") {
  const auto tree = examples::medical_tree();
  const auto v4a = *tree.find_vertex("v4a");
  const auto v4b = *tree.find_vertex("v4b");
  const auto v0 = *tree.find_vertex("v0");
  CHECK(canonical_form_string(tree, v4a) == canonical_form_string(tree, v4b));
  CHECK(canonical_form_string(tree, v4a) != canonical_form_string(tree, v0));
  CHECK(canonical_form_string(tree, *tree.find_vertex("l1")) == "*");
}

}  // TEST_SUITE
