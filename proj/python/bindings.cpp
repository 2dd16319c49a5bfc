#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <random>
#include <string>
#include <vector>

#include "cegprop/bench.hpp"
#include "cegprop/dot.hpp"
#include "cegprop/errors.hpp"
#include "cegprop/examples.hpp"
#include "cegprop/generators.hpp"
#include "cegprop/io.hpp"
#include "cegprop/oracle.hpp"
#include "cegprop/positions.hpp"
#include "cegprop/propagation.hpp"

namespace py = pybind11;
using namespace cegprop;

namespace {

// The python surface works with the stable string ids; integer ids stay
// internal to the C++ core.

std::vector<EdgeId> edges_by_name(const TransporterCeg& ceg,
                                  const std::vector<std::string>& names) {
  std::vector<EdgeId> edges;
  edges.reserve(names.size());
  for (const auto& name : names) {
    const auto e = ceg.find_edge(name);
    if (!e) throw ValidationError("unknown edge id '" + name + "'");
    edges.push_back(*e);
  }
  return edges;
}

PositionId position_by_name(const TransporterCeg& ceg,
                            const std::string& name) {
  const auto w = ceg.find_position(name);
  if (!w) throw ValidationError("unknown position id '" + name + "'");
  return *w;
}

std::vector<std::string> path_names(const TransporterCeg& ceg,
                                    const Atom& path) {
  std::vector<std::string> names;
  names.reserve(path.edges.size());
  for (EdgeId e : path.edges) names.push_back(ceg.edge(e).name);
  return names;
}

Atom path_from_names(const TransporterCeg& ceg,
                     const std::vector<std::string>& names) {
  return Atom{edges_by_name(ceg, names)};
}

PositionOptions options_from(double tolerance, bool match_labels) {
  return {.prob_tolerance = tolerance, .match_labels = match_labels};
}

py::dict counters_dict(const OperationCounters& counters) {
  py::dict d;
  d["backward_edge_ops"] = counters.backward_edge_ops;
  d["backward_vertex_ops"] = counters.backward_vertex_ops;
  d["forward_edge_ops"] = counters.forward_edge_ops;
  return d;
}

py::dict result_dict(const TransporterCeg& ceg,
                     const PropagationResult& result) {
  py::dict phi, tau, pi_hat;
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    phi[py::str(ceg.position_name(w))] = result.phi[w];
  }
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    tau[py::str(ceg.edge(e).name)] = result.tau[e];
    pi_hat[py::str(ceg.edge(e).name)] = result.pi_hat[e];
  }
  py::dict d;
  d["phi"] = phi;
  d["tau"] = tau;
  d["pi_hat"] = pi_hat;
  d["event_probability"] = result.phi[ceg.root()];
  d["counters"] = counters_dict(result.counters);
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "exact inference on transporter chain event graphs";

  py::register_exception<ValidationError>(m, "ValidationError",
                                          PyExc_ValueError);
  py::register_exception<InvalidPathError>(m, "InvalidPathError",
                                           PyExc_ValueError);
  py::register_exception<ZeroProbabilityError>(m, "ZeroProbabilityError",
                                               PyExc_ValueError);
  py::register_exception<InstanceTooLargeError>(m, "InstanceTooLargeError",
                                                PyExc_ValueError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  py::register_exception<IoError>(m, "IoError", PyExc_OSError);

  py::class_<ProbabilityTree>(m, "ProbabilityTree")
      .def(py::init<>())
      .def("add_vertex", &ProbabilityTree::add_vertex, py::arg("name"))
      .def("add_edge",
           [](ProbabilityTree& tree, const std::string& source,
              const std::string& target, double prob, const std::string& name,
              const std::string& label) {
             const auto s = tree.find_vertex(source);
             const auto t = tree.find_vertex(target);
             if (!s || !t) throw ValidationError("unknown vertex name");
             return tree.add_edge(*s, *t, prob, name, label);
           },
           py::arg("source"), py::arg("target"), py::arg("prob"),
           py::arg("name"), py::arg("label") = std::string())
      .def_property_readonly("vertex_count", &ProbabilityTree::vertex_count)
      .def_property_readonly("edge_count", &ProbabilityTree::edge_count)
      .def("validate",
           [](const ProbabilityTree& tree) {
             std::vector<std::pair<std::string, std::string>> issues;
             for (const auto& v : validate_tree(tree).violations) {
               issues.emplace_back(v.code, v.message);
             }
             return issues;
           })
      .def("atoms",
           [](const ProbabilityTree& tree) {
             std::vector<std::vector<std::string>> result;
             for (const auto& atom : enumerate_atoms(tree)) {
               std::vector<std::string> names;
               for (EdgeId e : atom.edges) names.push_back(tree.edge(e).name);
               result.push_back(std::move(names));
             }
             return result;
           })
      .def("atom_probability",
           [](const ProbabilityTree& tree,
              const std::vector<std::string>& edges) {
             std::vector<EdgeId> ids;
             for (const auto& name : edges) {
               const auto e = tree.find_edge(name);
               if (!e) throw ValidationError("unknown edge id '" + name + "'");
               ids.push_back(*e);
             }
             return atom_probability(tree, Atom{ids});
           },
           py::arg("edges"))
      .def("transition_matrix", &to_transition_matrix);

  py::class_<TransporterCeg>(m, "TransporterCeg")
      .def_property_readonly("position_count", &TransporterCeg::position_count)
      .def_property_readonly("edge_count", &TransporterCeg::edge_count)
      .def_property_readonly("root",
                             [](const TransporterCeg& ceg) {
                               return ceg.position_name(ceg.root());
                             })
      .def_property_readonly("sink",
                             [](const TransporterCeg& ceg) {
                               return ceg.position_name(ceg.sink());
                             })
      .def_property_readonly("positions",
                             [](const TransporterCeg& ceg) {
                               std::vector<std::string> names;
                               for (PositionId w = 0; w < ceg.position_count();
                                    ++w) {
                                 names.push_back(ceg.position_name(w));
                               }
                               return names;
                             })
      .def("edges",
           [](const TransporterCeg& ceg) {
             std::vector<py::dict> edges;
             for (const auto& e : ceg.edges()) {
               py::dict d;
               d["id"] = e.name;
               d["source"] = ceg.position_name(e.source);
               d["target"] = ceg.position_name(e.target);
               d["prob"] = e.prob;
               d["label"] = e.label;
               edges.push_back(std::move(d));
             }
             return edges;
           })
      .def("pi",
           [](const TransporterCeg& ceg, const std::string& name) {
             return ceg.pi(position_by_name(ceg, name));
           },
           py::arg("position"))
      .def("paths",
           [](const TransporterCeg& ceg) {
             std::vector<std::vector<std::string>> result;
             for (const auto& path : enumerate_paths(ceg)) {
               result.push_back(path_names(ceg, path));
             }
             return result;
           })
      .def("path_count", &count_paths)
      .def("path_probability",
           [](const TransporterCeg& ceg,
              const std::vector<std::string>& edges) {
             return path_probability(ceg, path_from_names(ceg, edges));
           },
           py::arg("edges"))
      .def("reach_probability",
           [](const TransporterCeg& ceg, const std::string& position) {
             return reach_probability(ceg, position_by_name(ceg, position));
           },
           py::arg("position"));

  py::class_<CompatibleObservation>(m, "Observation")
      .def_static("from_edges",
                  [](const TransporterCeg& ceg,
                     const std::vector<std::string>& edges) {
                    return CompatibleObservation::from_union(
                        ceg, edges_by_name(ceg, edges));
                  },
                  py::arg("ceg"), py::arg("edges"))
      .def_static(
          "from_position_sets",
          [](const TransporterCeg& ceg,
             const std::map<std::string, std::vector<std::string>>& sets) {
            std::map<PositionId, std::vector<EdgeId>> resolved;
            for (const auto& [name, subset] : sets) {
              resolved[position_by_name(ceg, name)] =
                  edges_by_name(ceg, subset);
            }
            return CompatibleObservation::from_edge_sets(ceg, resolved);
          },
          py::arg("ceg"), py::arg("sets"))
      .def_static("vacuous", &CompatibleObservation::vacuous, py::arg("ceg"))
      .def_property_readonly("is_vacuous", &CompatibleObservation::is_vacuous);

  m.def("compute_positions",
        [](const ProbabilityTree& tree, double tolerance, bool match_labels) {
          const auto partition =
              compute_positions(tree, options_from(tolerance, match_labels));
          std::vector<std::vector<std::string>> blocks;
          for (const auto& block : partition.blocks) {
            std::vector<std::string> names;
            for (VertexId v : block) names.push_back(tree.vertex_name(v));
            blocks.push_back(std::move(names));
          }
          return blocks;
        },
        py::arg("tree"), py::arg("prob_tolerance") = 0.0,
        py::arg("match_labels") = true);

  m.def("build_ceg",
        [](const ProbabilityTree& tree, double tolerance, bool match_labels) {
          return build_transporter_ceg(tree,
                                       options_from(tolerance, match_labels));
        },
        py::arg("tree"), py::arg("prob_tolerance") = 0.0,
        py::arg("match_labels") = true);

  m.def("minimize", &minimize_ceg, py::arg("ceg"));

  m.def("observation_paths",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs) {
          std::vector<std::vector<std::string>> result;
          for (const auto& path : paths_of(ceg, obs)) {
            result.push_back(path_names(ceg, path));
          }
          return result;
        },
        py::arg("ceg"), py::arg("obs"));

  m.def("check_compatibility",
        [](const TransporterCeg& ceg,
           const std::vector<std::vector<std::string>>& paths) {
          std::vector<Atom> atoms;
          for (const auto& names : paths) {
            atoms.push_back(path_from_names(ceg, names));
          }
          const auto check = check_compatibility(ceg, atoms);
          py::dict d;
          d["compatible"] = check.compatible();
          if (check.compatible()) {
            std::vector<std::string> names;
            for (EdgeId e : check.observation->union_edges()) {
              names.push_back(ceg.edge(e).name);
            }
            d["edges"] = names;
          } else {
            d["witness"] = path_names(ceg, *check.witness);
          }
          return d;
        },
        py::arg("ceg"), py::arg("paths"));

  m.def("propagate",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs) {
          return result_dict(ceg, propagate(ceg, obs));
        },
        py::arg("ceg"), py::arg("obs"));

  m.def("reduce",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs) {
          const auto reduced = reduce(ceg, propagate(ceg, obs));
          return reduced.graph;
        },
        py::arg("ceg"), py::arg("obs"));

  m.def("conditional_atom_probability",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs,
           const std::vector<std::string>& edges) {
          const auto result = propagate(ceg, obs);
          return conditional_atom_probability(ceg, result,
                                              path_from_names(ceg, edges));
        },
        py::arg("ceg"), py::arg("obs"), py::arg("edges"));

  m.def("conditional_reach_probability",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs,
           const std::string& position) {
          const auto result = propagate(ceg, obs);
          return conditional_reach_probability(ceg, result,
                                               position_by_name(ceg, position));
        },
        py::arg("ceg"), py::arg("obs"), py::arg("position"));

  m.def("brute_force_condition",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs,
           std::uint64_t path_cap) {
          const auto oracle = brute_force_condition(ceg, obs, path_cap);
          py::dict edge_probs;
          for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
            edge_probs[py::str(ceg.edge(e).name)] =
                oracle.conditional_edge_prob[e];
          }
          py::dict d;
          d["event_probability"] = oracle.event_probability;
          d["zero_event"] = oracle.zero_event;
          d["conditional_edge_prob"] = edge_probs;
          return d;
        },
        py::arg("ceg"), py::arg("obs"),
        py::arg("path_cap") = std::uint64_t{1'000'000});

  m.def("random_tree",
        [](std::uint64_t seed, int max_depth, int max_branch,
           double merge_bias, int max_vertices) {
          return random_tree(seed, {.max_depth = max_depth,
                                    .max_branch = max_branch,
                                    .merge_bias = merge_bias,
                                    .max_vertices = max_vertices});
        },
        py::arg("seed"), py::arg("max_depth") = 4, py::arg("max_branch") = 3,
        py::arg("merge_bias") = 0.0, py::arg("max_vertices") = 200);

  m.def("random_observation",
        [](const TransporterCeg& ceg, std::uint64_t seed,
           bool require_positive, bool require_nonvacuous) {
          std::mt19937_64 rng(seed);
          return random_observation(ceg, rng,
                                    {.require_positive = require_positive,
                                     .require_nonvacuous = require_nonvacuous});
        },
        py::arg("ceg"), py::arg("seed"), py::arg("require_positive") = true,
        py::arg("require_nonvacuous") = false);

  m.def("model_selection_ceg", &model_selection_ceg, py::arg("n"));

  m.def("bench",
        [](const TransporterCeg& ceg, const CompatibleObservation& obs,
           bool include_bn_reference) {
          const auto report = bench_report(ceg, obs, include_bn_reference);
          py::dict d;
          d["position_cells"] = report.position_cells;
          d["edge_cells"] = report.edge_cells;
          d["total_cells"] = report.total_cells;
          d["paths"] = report.path_count;
          d["event_probability"] = report.event_probability;
          d["counters"] = counters_dict(report.counters);
          if (include_bn_reference) {
            d["reference_bn_operations"] = BenchReport::kReportedBnOperations;
            d["reference_bn_cells"] = BenchReport::kReportedBnCells;
          }
          return d;
        },
        py::arg("ceg"), py::arg("obs"), py::arg("include_bn_reference") = false);

  m.def("export_dot",
        [](const TransporterCeg& ceg) { return export_dot(ceg); },
        py::arg("ceg"));

  m.def("parse_model", [](const std::string& text) {
    const auto model = parse_model(text);
    py::dict d;
    d["name"] = model.name;
    d["description"] = model.description;
    if (model.tree) d["tree"] = *model.tree;
    if (model.ceg) d["ceg"] = *model.ceg;
    return d;
  });
  m.def("serialize_tree_model", &serialize_tree_model, py::arg("tree"),
        py::arg("name") = std::string(), py::arg("description") = std::string());
  m.def("serialize_ceg_model", &serialize_ceg_model, py::arg("ceg"),
        py::arg("name") = std::string(), py::arg("description") = std::string());
  m.def("parse_observation",
        [](const std::string& text, const TransporterCeg& ceg) {
          return parse_observation(text, ceg);
        },
        py::arg("text"), py::arg("ceg"));

  m.def("example_tree", &examples::medical_tree);
  m.def("example_ceg", &examples::medical_ceg);
  m.def("example_observation_edges", &examples::alive_observation_edge_names);

  m.attr("__version__") = "0.1.0";
}
