#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cegprop/ceg.hpp"
#include "cegprop/tree.hpp"

namespace cegprop {

struct PositionOptions {
  // Absolute tolerance for treating two edge probabilities as equal when
  // merging situations. The default 0 demands bit-identical doubles, so
  // float noise never silently merges distinct models. With a positive
  // tolerance, classes are formed greedily against the first matching
  // representative in creation order (near-equality is not transitive).
  double prob_tolerance = 0.0;
  // When true, edge labels participate in subtree identity: two situations
  // merge only if the matched edges also carry the same labels. Disable to
  // merge on topology and probabilities alone.
  bool match_labels = true;
};

// Per-vertex canonical form ids: forms[v] == forms[u] iff the subtrees
// rooted at v and u are topologically identical with matching edge
// probabilities (and labels, per options) under some child mapping.
// All leaves share form 0. Computed bottom-up; forms are interned, and
// interning compares full structural keys, never hashes alone.
std::vector<std::uint32_t> canonical_forms(const ProbabilityTree& tree,
                                           const PositionOptions& options = {});

// Human-readable rendering of a vertex's canonical form (children sorted,
// probabilities in shortest round-trip decimal). Intended for debugging and
// tests; size is linear in the subtree.
std::string canonical_form_string(const ProbabilityTree& tree, VertexId v,
                                  const PositionOptions& options = {});

struct PositionPartition {
  static constexpr std::uint32_t kLeafBlock =
      std::numeric_limits<std::uint32_t>::max();

  // Disjoint situation sets covering all situations, in canonical order:
  // topological over the quotient graph, ties by smallest member vertex.
  // Block members are sorted by vertex id; the first member is the fixed
  // representative used for edge construction.
  std::vector<std::vector<VertexId>> blocks;

  // Per tree vertex: block index, or kLeafBlock for leaves (the class that
  // maps to the sink).
  std::vector<std::uint32_t> block_of;
};

// The finest partition of situations such that two situations share a block
// iff their rooted subtrees are identical in shape and edge probabilities
// (and labels, per options).
PositionPartition compute_positions(const ProbabilityTree& tree,
                                    const PositionOptions& options = {});

// Quotient multigraph of the partition: one vertex per block plus the sink,
// one edge per out-edge of each block's representative. Edge names, labels
// and probabilities are copied from the representative's tree edges;
// positions are named w0, w1, ... in canonical block order, the sink "winf".
TransporterCeg build_transporter_ceg(const ProbabilityTree& tree,
                                     const PositionPartition& partition);
TransporterCeg build_transporter_ceg(const ProbabilityTree& tree,
                                     const PositionOptions& options = {});

// Repeatedly merges non-sink positions whose outgoing edge multisets
// (target, probability, label) are identical until a fixpoint, preserving
// the root-to-sink path distribution exactly. Idempotent; the surviving
// position of each merge is the one with the smaller id.
TransporterCeg minimize_ceg(const TransporterCeg& ceg);

// Image of a tree atom under the path bijection between root-to-leaf paths
// of the tree and root-to-sink paths of the CEG built from `partition`.
// Edge probabilities are preserved step by step. Requires an exact-equality
// partition (prob_tolerance 0).
Atom tree_atom_to_ceg_path(const ProbabilityTree& tree,
                           const PositionPartition& partition,
                           const TransporterCeg& ceg, const Atom& atom,
                           const PositionOptions& options = {});

}  // namespace cegprop
