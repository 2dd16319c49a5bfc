#pragma once

#include <cstdint>
#include <random>

#include "cegprop/ceg.hpp"
#include "cegprop/observation.hpp"
#include "cegprop/tree.hpp"

namespace cegprop {

struct RandomTreeParams {
  int max_depth = 4;       // >= 1
  int max_branch = 3;      // 2..16
  double merge_bias = 0.0;  // [0,1]: chance of cloning an earlier subtree
  int max_vertices = 200;  // >= 3
};

// Deterministic random probability tree. With merge_bias > 0 previously
// generated subtrees are duplicated verbatim, which forces non-singleton
// positions; with merge_bias 0 all probabilities are fresh draws and
// situations virtually never merge. Throws ParameterError on out-of-range
// parameters.
ProbabilityTree random_tree(std::uint64_t seed,
                            const RandomTreeParams& params = {});

struct RandomObservationOptions {
  // Resample until some root-to-sink path survives inside the retained,
  // positive-probability edges (the event has positive prior mass).
  bool require_positive = true;
  // Force at least one edge to be excluded.
  bool require_nonvacuous = false;
  int max_attempts = 64;
};

// Random per-position edge subsets, compatible by construction.
CompatibleObservation random_observation(
    const TransporterCeg& ceg, std::mt19937_64& rng,
    const RandomObservationOptions& options = {});

// CEG of the pair-selection family: a selector variable with
// m = (n-1)(n-2)/2 states picks which pair of the n-1 binary variables is
// dependent; all other binaries are independent. The graph has at most
// m(1+2n) edges and 2+mn positions, and exactly m*2^(n-1) root-to-sink
// paths. Throws ParameterError for n < 3.
TransporterCeg model_selection_ceg(int n);

}  // namespace cegprop
