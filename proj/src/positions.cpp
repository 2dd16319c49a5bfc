#include "cegprop/positions.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <map>
#include <tuple>
#include <unordered_map>

#include "cegprop/errors.hpp"

namespace cegprop {

namespace {

std::uint64_t prob_bits(double prob) {
  if (prob == 0.0) prob = 0.0;  // collapse -0.0
  return std::bit_cast<std::uint64_t>(prob);
}

// One child of a subtree in its identity key: the child's canonical form,
// the edge probability and (optionally) the edge label.
struct FormEntry {
  std::uint32_t child_form;
  std::uint64_t bits;
  double prob;
  std::string label;

  bool operator<(const FormEntry& o) const {
    return std::tie(child_form, label, bits) <
           std::tie(o.child_form, o.label, o.bits);
  }
  bool operator==(const FormEntry& o) const {
    return child_form == o.child_form && bits == o.bits && label == o.label;
  }
};

using FormKey = std::vector<FormEntry>;

struct FormKeyHash {
  std::size_t operator()(const FormKey& key) const {
    std::uint64_t h = 1469598103934665603ull;
    auto mix = [&h](std::uint64_t v) {
      h ^= v;
      h *= 1099511628211ull;
    };
    for (const auto& entry : key) {
      mix(entry.child_form);
      mix(entry.bits);
      for (char c : entry.label) mix(static_cast<unsigned char>(c));
      mix(0xffu);
    }
    return static_cast<std::size_t>(h);
  }
};

// Children-before-parents order via reverse preorder.
std::vector<VertexId> post_order(const ProbabilityTree& tree) {
  std::vector<VertexId> order;
  order.reserve(tree.vertex_count());
  std::vector<VertexId> stack{tree.root()};
  while (!stack.empty()) {
    VertexId v = stack.back();
    stack.pop_back();
    order.push_back(v);
    for (EdgeId e : tree.out_edges(v)) stack.push_back(tree.edge(e).target);
  }
  std::reverse(order.begin(), order.end());
  return order;
}

FormKey make_key(const ProbabilityTree& tree, VertexId v,
                 const std::vector<std::uint32_t>& forms,
                 const PositionOptions& options) {
  FormKey key;
  key.reserve(tree.out_edges(v).size());
  for (EdgeId e : tree.out_edges(v)) {
    const auto& edge = tree.edge(e);
    key.push_back(FormEntry{forms[edge.target], prob_bits(edge.prob),
                            edge.prob,
                            options.match_labels ? edge.label : std::string()});
  }
  std::sort(key.begin(), key.end());
  return key;
}

bool keys_equal_within(const FormKey& a, const FormKey& b, double tolerance) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].child_form != b[i].child_form || a[i].label != b[i].label) {
      return false;
    }
    if (std::abs(a[i].prob - b[i].prob) > tolerance) return false;
  }
  return true;
}

}  // namespace

std::vector<std::uint32_t> canonical_forms(const ProbabilityTree& tree,
                                           const PositionOptions& options) {
  std::vector<std::uint32_t> forms(tree.vertex_count(), 0);
  const auto order = post_order(tree);

  if (options.prob_tolerance == 0.0) {
    // Interned structural keys; the hash map's key equality is the full
    // structural comparison, so hash collisions cannot merge distinct forms.
    std::unordered_map<FormKey, std::uint32_t, FormKeyHash> intern;
    std::uint32_t next_form = 1;  // 0 is the shared leaf form
    for (VertexId v : order) {
      if (tree.is_leaf(v)) continue;
      auto key = make_key(tree, v, forms, options);
      auto [it, inserted] = intern.emplace(std::move(key), next_form);
      if (inserted) ++next_form;
      forms[v] = it->second;
    }
    return forms;
  }

  // Tolerant mode: near-equality of probabilities is not transitive, so
  // classes are grown greedily against representatives in creation order.
  std::vector<FormKey> representatives;  // index = form id - 1
  for (VertexId v : order) {
    if (tree.is_leaf(v)) continue;
    auto key = make_key(tree, v, forms, options);
    std::uint32_t assigned = 0;
    for (std::uint32_t i = 0; i < representatives.size(); ++i) {
      if (keys_equal_within(representatives[i], key, options.prob_tolerance)) {
        assigned = i + 1;
        break;
      }
    }
    if (assigned == 0) {
      representatives.push_back(std::move(key));
      assigned = static_cast<std::uint32_t>(representatives.size());
    }
    forms[v] = assigned;
  }
  return forms;
}

std::string canonical_form_string(const ProbabilityTree& tree, VertexId v,
                                  const PositionOptions& options) {
  if (tree.is_leaf(v)) return "*";
  std::vector<std::string> parts;
  parts.reserve(tree.out_edges(v).size());
  for (EdgeId e : tree.out_edges(v)) {
    const auto& edge = tree.edge(e);
    std::string part = format_double(edge.prob);
    if (options.match_labels && !edge.label.empty()) {
      part += "'" + edge.label + "'";
    }
    part += canonical_form_string(tree, edge.target, options);
    parts.push_back(std::move(part));
  }
  std::sort(parts.begin(), parts.end());
  std::string result = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) result += " ";
    result += parts[i];
  }
  result += ")";
  return result;
}

PositionPartition compute_positions(const ProbabilityTree& tree,
                                    const PositionOptions& options) {
  const auto forms = canonical_forms(tree, options);

  PositionPartition partition;
  partition.block_of.assign(tree.vertex_count(), PositionPartition::kLeafBlock);

  // Group situations by form, provisional block order by first appearance.
  std::unordered_map<std::uint32_t, std::uint32_t> block_of_form;
  std::vector<std::vector<VertexId>> blocks;
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    if (tree.is_leaf(v)) continue;
    auto [it, inserted] =
        block_of_form.emplace(forms[v], static_cast<std::uint32_t>(blocks.size()));
    if (inserted) blocks.emplace_back();
    blocks[it->second].push_back(v);
  }

  // Canonical order: topological over the quotient graph (levels from the
  // root block), ties by smallest member. Subtree heights strictly decrease
  // along quotient edges, so the quotient is acyclic.
  const std::size_t block_count = blocks.size();
  std::vector<std::uint32_t> provisional(tree.vertex_count(),
                                         PositionPartition::kLeafBlock);
  for (std::uint32_t b = 0; b < block_count; ++b) {
    for (VertexId v : blocks[b]) provisional[v] = b;
  }

  std::vector<std::uint32_t> level(block_count, 0);
  const std::uint32_t root_block = provisional[tree.root()];
  // Longest distance: relax in an order that follows member depth; a simple
  // fixpoint sweep is enough at these sizes.
  bool changed = true;
  while (changed) {
    changed = false;
    for (std::uint32_t b = 0; b < block_count; ++b) {
      VertexId rep = blocks[b].front();
      for (EdgeId e : tree.out_edges(rep)) {
        VertexId child = tree.edge(e).target;
        if (tree.is_leaf(child)) continue;
        std::uint32_t cb = provisional[child];
        if (level[cb] < level[b] + 1) {
          level[cb] = level[b] + 1;
          changed = true;
        }
      }
    }
  }
  (void)root_block;

  std::vector<std::uint32_t> by_order(block_count);
  for (std::uint32_t b = 0; b < block_count; ++b) by_order[b] = b;
  std::sort(by_order.begin(), by_order.end(),
            [&](std::uint32_t a, std::uint32_t b) {
              if (level[a] != level[b]) return level[a] < level[b];
              return blocks[a].front() < blocks[b].front();
            });

  partition.blocks.reserve(block_count);
  for (std::uint32_t rank = 0; rank < block_count; ++rank) {
    auto& members = blocks[by_order[rank]];
    std::sort(members.begin(), members.end());
    for (VertexId v : members) partition.block_of[v] = rank;
    partition.blocks.push_back(std::move(members));
  }
  return partition;
}

TransporterCeg build_transporter_ceg(const ProbabilityTree& tree,
                                     const PositionPartition& partition) {
  TransporterCeg ceg;
  for (std::uint32_t b = 0; b < partition.blocks.size(); ++b) {
    ceg.add_position("w" + std::to_string(b));
  }
  const PositionId sink = ceg.add_position("winf");
  ceg.set_root(partition.block_of[tree.root()]);
  ceg.set_sink(sink);

  for (std::uint32_t b = 0; b < partition.blocks.size(); ++b) {
    const VertexId rep = partition.blocks[b].front();
    for (EdgeId e : tree.out_edges(rep)) {
      const auto& edge = tree.edge(e);
      const PositionId target = tree.is_leaf(edge.target)
                                    ? sink
                                    : partition.block_of[edge.target];
      ceg.add_edge(b, target, edge.prob, edge.name, edge.label);
    }
  }
  ceg.validate();
  return ceg;
}

TransporterCeg build_transporter_ceg(const ProbabilityTree& tree,
                                     const PositionOptions& options) {
  return build_transporter_ceg(tree, compute_positions(tree, options));
}

TransporterCeg minimize_ceg(const TransporterCeg& input) {
  // Out-edge multiset key per non-sink position.
  using Key = std::vector<std::tuple<PositionId, std::uint64_t, std::string>>;

  TransporterCeg current;
  {
    // Working copy so the loop below can rebuild in place.
    for (PositionId w = 0; w < input.position_count(); ++w) {
      current.add_position(input.position_name(w));
    }
    current.set_root(input.root());
    current.set_sink(input.sink());
    for (const auto& e : input.edges()) {
      current.add_edge(e.source, e.target, e.prob, e.name, e.label);
    }
  }

  for (;;) {
    std::map<Key, std::vector<PositionId>> groups;
    for (PositionId w = 0; w < current.position_count(); ++w) {
      if (current.is_sink(w)) continue;
      Key key;
      key.reserve(current.out_edges(w).size());
      for (EdgeId e : current.out_edges(w)) {
        const auto& edge = current.edge(e);
        key.emplace_back(edge.target, prob_bits(edge.prob), edge.label);
      }
      std::sort(key.begin(), key.end());
      groups[std::move(key)].push_back(w);
    }

    std::vector<PositionId> merge_into(current.position_count());
    bool merged_any = false;
    for (PositionId w = 0; w < current.position_count(); ++w) merge_into[w] = w;
    for (auto& [key, members] : groups) {
      if (members.size() < 2) continue;
      merged_any = true;
      const PositionId rep = *std::min_element(members.begin(), members.end());
      for (PositionId w : members) merge_into[w] = rep;
    }
    if (!merged_any) break;

    // Rebuild: keep representatives (and the sink), renumber compactly in
    // the current order, keep only representatives' out-edges, retarget all
    // surviving edges through the merge map.
    std::vector<PositionId> new_id(current.position_count(),
                                   std::numeric_limits<PositionId>::max());
    TransporterCeg next;
    for (PositionId w = 0; w < current.position_count(); ++w) {
      if (merge_into[w] != w) continue;
      new_id[w] = next.add_position(current.position_name(w));
    }
    next.set_root(new_id[merge_into[current.root()]]);
    next.set_sink(new_id[current.sink()]);
    for (const auto& e : current.edges()) {
      if (merge_into[e.source] != e.source) continue;
      next.add_edge(new_id[e.source], new_id[merge_into[e.target]], e.prob,
                    e.name, e.label);
    }
    current = std::move(next);
  }
  current.validate();
  return current;
}

Atom tree_atom_to_ceg_path(const ProbabilityTree& tree,
                           const PositionPartition& partition,
                           const TransporterCeg& ceg, const Atom& atom,
                           const PositionOptions& options) {
  if (options.prob_tolerance != 0.0) {
    throw ParameterError(
        "path bijection requires an exact-equality partition");
  }
  // Walk tree and CEG in lock step. At each step the tree edge is matched
  // to the k-th CEG edge sharing its (target block, probability, label)
  // key, where k is the edge's rank among its equal-key siblings; subtree
  // identity guarantees the key multisets agree.
  auto tree_key = [&](EdgeId e) {
    const auto& edge = tree.edge(e);
    const std::uint32_t target_block = tree.is_leaf(edge.target)
                                           ? PositionPartition::kLeafBlock
                                           : partition.block_of[edge.target];
    return std::make_tuple(target_block, prob_bits(edge.prob),
                           options.match_labels ? edge.label : std::string());
  };
  auto ceg_key = [&](EdgeId e) {
    const auto& edge = ceg.edge(e);
    const std::uint32_t target_block = ceg.is_sink(edge.target)
                                           ? PositionPartition::kLeafBlock
                                           : edge.target;
    return std::make_tuple(target_block, prob_bits(edge.prob),
                           options.match_labels ? edge.label : std::string());
  };

  Atom path;
  path.edges.reserve(atom.edges.size());
  VertexId v = tree.root();
  PositionId w = ceg.root();
  for (EdgeId te : atom.edges) {
    if (te >= tree.edge_count() || tree.edge(te).source != v) {
      throw InvalidPathError("atom is not a path in this tree");
    }
    const auto key = tree_key(te);
    std::size_t rank = 0;
    for (EdgeId sibling : tree.out_edges(v)) {
      if (sibling == te) break;
      if (tree_key(sibling) == key) ++rank;
    }
    EdgeId matched = std::numeric_limits<EdgeId>::max();
    for (EdgeId ce : ceg.out_edges(w)) {
      if (ceg_key(ce) == key) {
        if (rank == 0) {
          matched = ce;
          break;
        }
        --rank;
      }
    }
    if (matched == std::numeric_limits<EdgeId>::max()) {
      throw InvalidPathError("tree atom has no image in the CEG (partition mismatch)");
    }
    path.edges.push_back(matched);
    v = tree.edge(te).target;
    w = ceg.edge(matched).target;
  }
  if (!tree.is_leaf(v)) throw InvalidPathError("atom does not end at a leaf");
  return path;
}

}  // namespace cegprop
