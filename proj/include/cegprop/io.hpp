#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "cegprop/ceg.hpp"
#include "cegprop/observation.hpp"
#include "cegprop/propagation.hpp"
#include "cegprop/tree.hpp"

namespace cegprop {

// JSON file formats. Probabilities travel as decimal strings and are parsed
// with correctly-rounded string-to-double conversion; the serializer always
// emits the shortest decimal that parses back to the identical double, so
// serialize -> parse -> serialize is byte-identical.
//
//   model:       {"format":"cegprop-model/1", "name", "description",
//                 "tree":{"vertices":[...], "edges":[{id,from,to,prob,label?}]}}
//             or "ceg":{"root","sink","positions":[...],
//                       "edges":[...], "pi":{w:[...]}}
//   observation: {"format":"cegprop-observation/1", "model",
//                 "edges":[names]}  or  "positions":{w:[names]}
//   result:      {"format":"cegprop-result/1", "model", "event_probability",
//                 "phi":{w:p}, "tau":{e:p}, "pi_hat":{e:p}, "counters":{...}}
//
// Edge and position ids in files are the stable user-facing names; internal
// integer ids are never serialized. Vertex and edge listing order is
// meaningful: it fixes internal ids, representatives and pi ordering.

inline constexpr const char* kModelFormat = "cegprop-model/1";
inline constexpr const char* kObservationFormat = "cegprop-observation/1";
inline constexpr const char* kResultFormat = "cegprop-result/1";
inline constexpr const char* kBenchFormat = "cegprop-bench/1";

struct LoadedModel {
  std::string name;
  std::string description;
  std::optional<ProbabilityTree> tree;
  std::optional<TransporterCeg> ceg;
};

// Throws ParseError on malformed documents and ValidationError when the
// payload violates a structural invariant.
LoadedModel parse_model(const std::string& json_text);
std::string serialize_tree_model(const ProbabilityTree& tree,
                                 const std::string& name = {},
                                 const std::string& description = {});
std::string serialize_ceg_model(const TransporterCeg& ceg,
                                const std::string& name = {},
                                const std::string& description = {});

// `model_name` is checked against the file's "model" field when both are
// non-empty.
CompatibleObservation parse_observation(const std::string& json_text,
                                        const TransporterCeg& ceg,
                                        const std::string& model_name = {});
std::string serialize_observation(const TransporterCeg& ceg,
                                  const CompatibleObservation& obs,
                                  const std::string& model_name = {});

std::string serialize_result(const TransporterCeg& ceg,
                             const PropagationResult& result,
                             const std::string& model_name = {});
PropagationResult parse_result(const std::string& json_text,
                               const TransporterCeg& ceg);

// File wrappers; unreadable/unwritable paths raise IoError.
std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);
LoadedModel load_model(const std::filesystem::path& path);

}  // namespace cegprop
