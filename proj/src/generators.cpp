#include "cegprop/generators.hpp"

#include <algorithm>
#include <string>

#include "cegprop/errors.hpp"
#include "cegprop/positions.hpp"

namespace cegprop {

namespace {

struct Subtree {
  VertexId root;
  int height;
  int size;
};

class TreeGrower {
 public:
  TreeGrower(std::uint64_t seed, const RandomTreeParams& params)
      : rng_(seed), params_(params) {}

  ProbabilityTree grow() {
    const VertexId root = new_vertex();
    grow_children(root, 0, params_.max_vertices);
    return std::move(tree_);
  }

 private:
  VertexId new_vertex() {
    return tree_.add_vertex("n" + std::to_string(vertex_counter_++));
  }

  double uniform() {
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng_);
  }

  int uniform_int(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(rng_);
  }

  // Duplicates an earlier subtree with fresh ids; probabilities and labels
  // are copied verbatim so the two roots end up in one position.
  Subtree clone(const Subtree& original) {
    const VertexId copy_root = new_vertex();
    std::vector<std::pair<VertexId, VertexId>> stack{{original.root, copy_root}};
    while (!stack.empty()) {
      auto [src, dst] = stack.back();
      stack.pop_back();
      const std::vector<EdgeId> out = tree_.out_edges(src);  // copy: tree grows
      for (EdgeId e : out) {
        const TreeEdge edge = tree_.edge(e);
        const VertexId child_copy = new_vertex();
        tree_.add_edge(dst, child_copy, edge.prob,
                       "e" + std::to_string(edge_counter_++), edge.label);
        stack.emplace_back(edge.target, child_copy);
      }
    }
    return Subtree{copy_root, original.height, original.size};
  }

  // Grows the subtree under the already-created vertex v; `budget` counts v
  // itself, so the subtree never exceeds it. Returns the realized shape.
  Subtree grow_children(VertexId v, int depth, int budget) {
    const int available = budget - 1;
    if (depth >= params_.max_depth || available < 2 ||
        (depth > 0 && uniform() < 0.3)) {
      return Subtree{v, 0, 1};
    }
    const int arity = uniform_int(2, std::min(params_.max_branch, available));

    std::vector<double> probs(arity);
    double total = 0.0;
    for (double& p : probs) {
      p = uniform() + 1e-3;
      total += p;
    }
    double assigned = 0.0;
    for (int i = 0; i + 1 < arity; ++i) {
      probs[i] /= total;
      assigned += probs[i];
    }
    probs[arity - 1] = 1.0 - assigned;  // exact complement

    const int base_share = available / arity;
    const int extra = available % arity;

    int height = 0;
    int size = 1;
    for (int i = 0; i < arity; ++i) {
      const int child_budget = base_share + (i < extra ? 1 : 0);
      Subtree child{0, 0, 0};
      const Subtree* candidate = nullptr;
      if (params_.merge_bias > 0.0 && uniform() < params_.merge_bias) {
        candidate = pick_cloneable(depth, child_budget);
      }
      if (candidate) {
        child = clone(*candidate);
      } else {
        child = grow_children(new_vertex(), depth + 1, child_budget);
      }
      tree_.add_edge(v, child.root, probs[i],
                     "e" + std::to_string(edge_counter_++));
      height = std::max(height, child.height + 1);
      size += child.size;
      if (child.height > 0) registry_.push_back(child);
    }
    return Subtree{v, height, size};
  }

  const Subtree* pick_cloneable(int depth, int max_size) {
    std::vector<const Subtree*> fits;
    for (const auto& sub : registry_) {
      if (sub.height <= params_.max_depth - depth - 1 && sub.size <= max_size) {
        fits.push_back(&sub);
      }
    }
    if (fits.empty()) return nullptr;
    return fits[static_cast<std::size_t>(
        uniform_int(0, static_cast<int>(fits.size()) - 1))];
  }

  std::mt19937_64 rng_;
  RandomTreeParams params_;
  ProbabilityTree tree_;
  std::vector<Subtree> registry_;
  int vertex_counter_ = 0;
  int edge_counter_ = 0;
};

}  // namespace

ProbabilityTree random_tree(std::uint64_t seed,
                            const RandomTreeParams& params) {
  if (params.max_depth < 1) throw ParameterError("max_depth must be >= 1");
  if (params.max_branch < 2 || params.max_branch > 16) {
    throw ParameterError("max_branch must be in 2..16");
  }
  if (!(params.merge_bias >= 0.0 && params.merge_bias <= 1.0)) {
    throw ParameterError("merge_bias must be in [0,1]");
  }
  if (params.max_vertices < 3) throw ParameterError("max_vertices must be >= 3");
  auto tree = TreeGrower(seed, params).grow();
  require_valid(tree);
  return tree;
}

namespace {

// Positive-probability retained edges only: the event has positive prior
// mass iff the sink stays reachable through them.
bool positive_mass(const TransporterCeg& ceg, const std::vector<char>& member) {
  std::vector<char> seen(ceg.position_count(), 0);
  std::vector<PositionId> stack{ceg.root()};
  seen[ceg.root()] = 1;
  while (!stack.empty()) {
    PositionId w = stack.back();
    stack.pop_back();
    if (ceg.is_sink(w)) return true;
    for (EdgeId e : ceg.out_edges(w)) {
      if (!member[e] || ceg.edge(e).prob <= 0.0) continue;
      PositionId t = ceg.edge(e).target;
      if (!seen[t]) {
        seen[t] = 1;
        stack.push_back(t);
      }
    }
  }
  return false;
}

}  // namespace

CompatibleObservation random_observation(
    const TransporterCeg& ceg, std::mt19937_64& rng,
    const RandomObservationOptions& options) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  for (int attempt = 0; attempt < options.max_attempts; ++attempt) {
    std::vector<char> member(ceg.edge_count(), 0);
    for (PositionId w = 0; w < ceg.position_count(); ++w) {
      if (ceg.is_sink(w)) continue;
      const bool keep_all = unif(rng) < 0.25;
      for (EdgeId e : ceg.out_edges(w)) {
        member[e] = keep_all || unif(rng) < 0.75;
      }
    }
    std::vector<EdgeId> kept;
    for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
      if (member[e]) kept.push_back(e);
    }
    if (options.require_nonvacuous && kept.size() == ceg.edge_count()) {
      const auto victim = std::uniform_int_distribution<std::size_t>(
          0, kept.size() - 1)(rng);
      member[kept[victim]] = 0;
      kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(victim));
    }
    if (options.require_positive && !positive_mass(ceg, member)) continue;
    return CompatibleObservation::from_union(ceg, kept);
  }
  // Fallback rather than looping forever; positive by model validity.
  return CompatibleObservation::vacuous(ceg);
}

TransporterCeg model_selection_ceg(int n) {
  if (n < 3) throw ParameterError("model selection family needs n >= 3");

  const int m = (n - 1) * (n - 2) / 2;
  ProbabilityTree tree;
  const VertexId root = tree.add_vertex("r");
  int vertex_counter = 0;
  int edge_counter = 0;

  auto var_name = [](int var, int value) {
    return "X" + std::to_string(var) + "=" + std::to_string(value);
  };

  // One branch per (a, b) pair: the pair unfolds first (the second member's
  // distribution depends on the first), then the remaining binaries in
  // index order, all independent with index-specific probabilities.
  int state = 0;
  for (int a = 2; a <= n; ++a) {
    for (int b = a + 1; b <= n; ++b) {
      ++state;
      std::vector<int> vars{a, b};
      for (int i = 2; i <= n; ++i) {
        if (i != a && i != b) vars.push_back(i);
      }

      struct Frame {
        VertexId vertex;
        std::size_t next_var;
        int first_value;  // outcome of the pair's first member, -1 until set
      };
      const VertexId branch_root =
          tree.add_vertex("v" + std::to_string(vertex_counter++));
      tree.add_edge(root, branch_root, 1.0 / m,
                    "x1s" + std::to_string(state), var_name(1, state));

      std::vector<Frame> stack{{branch_root, 0, -1}};
      while (!stack.empty()) {
        Frame frame = stack.back();
        stack.pop_back();
        const int var = vars[frame.next_var];
        double p_one;
        if (frame.next_var == 0) {
          p_one = 0.4;
        } else if (frame.next_var == 1) {
          p_one = frame.first_value == 1 ? 0.75 : 0.25;
        } else {
          p_one = static_cast<double>(var) / (n + 1);
        }
        const bool last = frame.next_var + 1 == vars.size();
        for (int value = 0; value <= 1; ++value) {
          const VertexId child =
              tree.add_vertex("v" + std::to_string(vertex_counter++));
          const double prob = value == 1 ? p_one : 1.0 - p_one;
          tree.add_edge(frame.vertex, child, prob,
                        "e" + std::to_string(edge_counter++),
                        var_name(var, value));
          if (!last) {
            const int first =
                frame.next_var == 0 ? value : frame.first_value;
            stack.push_back(Frame{child, frame.next_var + 1, first});
          }
        }
      }
    }
  }
  require_valid(tree);
  return build_transporter_ceg(tree);
}

}  // namespace cegprop
