// cegprop: build transporter CEGs from probability trees, propagate
// observations through them, query probabilities, and run benchmark reports.

#include <cstdio>
#include <cstdlib>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cegprop/bench.hpp"
#include "cegprop/dot.hpp"
#include "cegprop/errors.hpp"
#include "cegprop/examples.hpp"
#include "cegprop/generators.hpp"
#include "cegprop/io.hpp"
#include "cegprop/oracle.hpp"
#include "cegprop/positions.hpp"
#include "cegprop/propagation.hpp"

namespace {

using namespace cegprop;

// Exit codes: 0 success, 2 validation/parse, 3 incompatible observation,
// 4 zero-probability observation, 5 I/O. Failures print one line to stderr
// with a machine-parsable prefix: error[<code>:<kind>] <message>.
constexpr int kValidationExit = 2;
constexpr int kIncompatibleExit = 3;
constexpr int kZeroProbabilityExit = 4;
constexpr int kIoExit = 5;

struct CliSettings {
  std::string model_file;
  std::string observation_file;
  std::string out;
  std::string reduce_out;
  std::string dot_out;
  std::string result_file;
  bool minimize = false;
  bool counts = false;
  bool ignore_labels = false;
  double merge_tolerance = 0.0;
  std::string atom;
  std::string reach;
  std::string conditional_atom;
  std::string family;
  int n = 5;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int max_depth = 4;
  int max_branch = 3;
  double merge_bias = 0.5;
  int max_vertices = 200;
  std::string json_out;
};

PositionOptions position_options(const CliSettings& s) {
  return {.prob_tolerance = s.merge_tolerance, .match_labels = !s.ignore_labels};
}

// Loads a model and returns its CEG: trees are quotiented on the fly, CEG
// sections are re-minimized (a no-op for engine-emitted files).
TransporterCeg to_ceg(const LoadedModel& model, const CliSettings& s) {
  if (model.tree) {
    return build_transporter_ceg(*model.tree, position_options(s));
  }
  return minimize_ceg(*model.ceg);
}

std::vector<EdgeId> parse_edge_list(const TransporterCeg& ceg,
                                    const std::string& csv) {
  std::vector<EdgeId> edges;
  std::size_t begin = 0;
  while (begin <= csv.size()) {
    const auto comma = csv.find(',', begin);
    const auto token = csv.substr(
        begin, comma == std::string::npos ? std::string::npos : comma - begin);
    if (token.empty()) throw ParameterError("empty edge id in '" + csv + "'");
    const auto e = ceg.find_edge(token);
    if (!e) throw ValidationError("unknown edge id '" + token + "'");
    edges.push_back(*e);
    if (comma == std::string::npos) break;
    begin = comma + 1;
  }
  return edges;
}

int run_build(const CliSettings& s) {
  const auto model = load_model(s.model_file);
  const auto ceg = to_ceg(model, s);
  const auto out_name = model.name.empty() ? "model" : model.name;
  const auto serialized = serialize_ceg_model(ceg, out_name, model.description);
  if (!s.out.empty()) write_file(s.out, serialized);
  if (!s.dot_out.empty()) write_file(s.dot_out, export_dot(ceg));
  std::printf("positions: %zu (incl. sink), edges: %zu, atoms: %llu\n",
              ceg.position_count(), ceg.edge_count(),
              static_cast<unsigned long long>(count_paths(ceg)));
  if (s.out.empty() && s.dot_out.empty()) std::fputs(serialized.c_str(), stdout);
  return 0;
}

int run_propagate(const CliSettings& s) {
  const auto model = load_model(s.model_file);
  const auto ceg = to_ceg(model, s);
  const auto obs =
      parse_observation(read_file(s.observation_file), ceg, model.name);

  const auto result = propagate(ceg, obs);
  const auto serialized = serialize_result(ceg, result, model.name);
  if (s.out.empty()) {
    std::fputs(serialized.c_str(), stdout);
  } else {
    write_file(s.out, serialized);
  }

  if (!s.reduce_out.empty()) {
    auto reduced = reduce(ceg, result).graph;
    if (s.minimize) reduced = minimize_ceg(reduced);
    const auto suffix = s.minimize ? ".reduced.min" : ".reduced";
    write_file(s.reduce_out,
               serialize_ceg_model(reduced, model.name + suffix));
  }
  if (!s.dot_out.empty()) {
    write_file(s.dot_out, export_dot(ceg, &result));
  }
  if (s.counts) {
    std::printf("backward edge ops: %llu\n",
                static_cast<unsigned long long>(result.counters.backward_edge_ops));
    std::printf("backward vertex ops: %llu\n",
                static_cast<unsigned long long>(result.counters.backward_vertex_ops));
    std::printf("forward edge ops: %llu\n",
                static_cast<unsigned long long>(result.counters.forward_edge_ops));
  }
  return 0;
}

int run_query(const CliSettings& s) {
  const auto model = load_model(s.model_file);
  const auto ceg = to_ceg(model, s);
  std::optional<PropagationResult> result;
  if (!s.result_file.empty()) {
    result = parse_result(read_file(s.result_file), ceg);
  }

  double value = 0.0;
  if (!s.atom.empty()) {
    value = path_probability(ceg, Atom{parse_edge_list(ceg, s.atom)});
  } else if (!s.reach.empty()) {
    const auto w = ceg.find_position(s.reach);
    if (!w) throw ValidationError("unknown position id '" + s.reach + "'");
    value = result ? conditional_reach_probability(ceg, *result, *w)
                   : reach_probability(ceg, *w);
  } else if (!s.conditional_atom.empty()) {
    if (!result) {
      throw ParameterError("--conditional-atom needs --result <file>");
    }
    value = conditional_atom_probability(
        ceg, *result, Atom{parse_edge_list(ceg, s.conditional_atom)});
  } else {
    throw ParameterError("choose one of --atom, --reach, --conditional-atom");
  }
  std::printf("%.12g\n", value);
  return 0;
}

int run_bench(const CliSettings& s) {
  TransporterCeg ceg;
  CompatibleObservation obs;
  std::string model_name;

  std::uint64_t seed = s.seed;
  if (!s.seed_given) {
    if (const char* env = std::getenv("CEG_SEED")) {
      seed = std::strtoull(env, nullptr, 10);
    }
  }

  if (s.family == "example1") {
    ceg = examples::medical_ceg();
    obs = s.observation_file.empty()
              ? examples::alive_observation(ceg)
              : parse_observation(read_file(s.observation_file), ceg, "");
    model_name = "example1";
  } else if (s.family == "model-selection") {
    ceg = model_selection_ceg(s.n);
    obs = s.observation_file.empty()
              ? CompatibleObservation::vacuous(ceg)
              : parse_observation(read_file(s.observation_file), ceg, "");
    model_name = "model-selection-" + std::to_string(s.n);
  } else if (s.family == "random") {
    const auto tree = random_tree(
        seed, {.max_depth = s.max_depth, .max_branch = s.max_branch,
               .merge_bias = s.merge_bias, .max_vertices = s.max_vertices});
    ceg = build_transporter_ceg(tree);
    std::mt19937_64 rng(seed ^ 0x9E3779B97F4A7C15ull);
    obs = s.observation_file.empty()
              ? random_observation(ceg, rng)
              : parse_observation(read_file(s.observation_file), ceg, "");
    model_name = "random-" + std::to_string(seed);
  } else {
    throw ParameterError("unknown family '" + s.family +
                         "' (example1 | model-selection | random)");
  }

  const auto report = bench_report(ceg, obs, s.family == "example1");
  std::printf("family: %s\n", s.family.c_str());
  std::fputs(bench_text(report).c_str(), stdout);
  if (s.family == "model-selection") {
    const auto n = static_cast<std::uint64_t>(s.n);
    const std::uint64_t m = (n - 1) * (n - 2) / 2;
    const auto edge_bound = m * (1 + 2 * n);
    const auto position_bound = 2 + m * n;
    const bool pass = ceg.edge_count() <= edge_bound &&
                      ceg.position_count() <= position_bound;
    std::printf("bounds: edges %zu <= %llu, positions %zu <= %llu: %s\n",
                ceg.edge_count(), static_cast<unsigned long long>(edge_bound),
                ceg.position_count(),
                static_cast<unsigned long long>(position_bound),
                pass ? "PASS" : "FAIL");
    if (!pass) return 1;
  }
  if (!s.json_out.empty()) {
    write_file(s.json_out, bench_json(report, s.family, model_name));
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact inference on transporter chain event graphs"};
  app.require_subcommand(1);
  CliSettings s;

  auto* build = app.add_subcommand(
      "build", "quotient a probability tree into its transporter CEG");
  build->add_option("model", s.model_file, "model file (tree or ceg)")
      ->required();
  build->add_option("-o,--out", s.out, "write the CEG model here");
  build->add_option("--dot", s.dot_out, "write a DOT rendering here");
  build->add_flag("--ignore-labels", s.ignore_labels,
                  "merge on topology and probabilities only");
  build->add_option("--merge-tolerance", s.merge_tolerance,
                    "absolute probability tolerance when merging (default 0)");

  auto* propagate_cmd = app.add_subcommand(
      "propagate", "condition a CEG on a compatible observation");
  propagate_cmd->add_option("model", s.model_file, "model file (tree or ceg)")
      ->required();
  propagate_cmd->add_option("observation", s.observation_file,
                            "observation file")
      ->required();
  propagate_cmd->add_option("-o,--out", s.out,
                            "write the result tables here (default stdout)");
  propagate_cmd->add_option("--reduce", s.reduce_out,
                            "write the reduced CEG here");
  propagate_cmd->add_flag("--minimize", s.minimize,
                          "re-merge equal positions in the reduced CEG");
  propagate_cmd->add_option("--dot", s.dot_out,
                            "write an annotated DOT rendering here");
  propagate_cmd->add_flag("--counts", s.counts, "print operation counters");

  auto* query = app.add_subcommand("query", "evaluate one probability");
  query->add_option("model", s.model_file, "model file (tree or ceg)")
      ->required();
  query->add_option("--result", s.result_file,
                    "propagation result tables for conditional queries");
  query->add_option("--atom", s.atom,
                    "comma-separated edge ids of a root-to-sink path");
  query->add_option("--reach", s.reach, "position id");
  query->add_option("--conditional-atom", s.conditional_atom,
                    "comma-separated edge ids, conditioned per --result");

  auto* bench = app.add_subcommand("bench", "storage/operation report");
  bench->add_option("--family", s.family,
                    "example1 | model-selection | random")
      ->required();
  bench->add_option("--n", s.n, "variable count for model-selection");
  bench->add_option("--seed", s.seed, "seed for the random family")
      ->trigger_on_parse()
      ->each([&s](const std::string&) { s.seed_given = true; });
  bench->add_option("--max-depth", s.max_depth, "random family: tree depth");
  bench->add_option("--max-branch", s.max_branch, "random family: branching");
  bench->add_option("--merge-bias", s.merge_bias,
                    "random family: subtree duplication bias");
  bench->add_option("--max-vertices", s.max_vertices,
                    "random family: vertex budget");
  bench->add_option("--obs", s.observation_file,
                    "observation file (defaults per family)");
  bench->add_option("--json", s.json_out, "write the JSON report here");

  CLI11_PARSE(app, argc, argv);

  try {
    if (build->parsed()) return run_build(s);
    if (propagate_cmd->parsed()) return run_propagate(s);
    if (query->parsed()) return run_query(s);
    return run_bench(s);
  } catch (const ZeroProbabilityError& e) {
    std::fprintf(stderr, "error[%d:zero-probability] %s\n",
                 kZeroProbabilityExit, e.what());
    return kZeroProbabilityExit;
  } catch (const IncompatibleObservationError& e) {
    std::fprintf(stderr, "error[%d:incompatible] %s\n", kIncompatibleExit,
                 e.what());
    return kIncompatibleExit;
  } catch (const IoError& e) {
    std::fprintf(stderr, "error[%d:io] %s\n", kIoExit, e.what());
    return kIoExit;
  } catch (const Error& e) {
    // Validation, parse, parameter, path and size errors.
    std::fprintf(stderr, "error[%d:validation] %s\n", kValidationExit,
                 e.what());
    return kValidationExit;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error[1:internal] %s\n", e.what());
    return 1;
  }
}
