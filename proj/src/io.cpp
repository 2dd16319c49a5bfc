#include "cegprop/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cegprop/errors.hpp"

namespace cegprop {

namespace {

using json = nlohmann::ordered_json;

json parse_document(const std::string& text) {
  json doc = json::parse(text, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) {
    throw ParseError("malformed JSON document");
  }
  return doc;
}

std::string require_string(const json& doc, const char* key) {
  if (!doc.contains(key) || !doc[key].is_string()) {
    throw ParseError(std::string("missing or non-string field '") + key + "'");
  }
  return doc[key].get<std::string>();
}

std::string optional_string(const json& doc, const char* key) {
  if (!doc.contains(key)) return {};
  if (!doc[key].is_string()) {
    throw ParseError(std::string("field '") + key + "' must be a string");
  }
  return doc[key].get<std::string>();
}

double probability_field(const json& value, const std::string& where) {
  if (value.is_string()) return parse_double(value.get<std::string>());
  if (value.is_number()) return value.get<double>();
  throw ParseError("probability of " + where +
                   " must be a decimal string or number");
}

void check_format(const json& doc, const char* expected) {
  const auto format = require_string(doc, "format");
  if (format != expected) {
    throw ParseError("unsupported format '" + format + "', expected '" +
                     std::string(expected) + "'");
  }
}

ProbabilityTree parse_tree_section(const json& section) {
  if (!section.contains("vertices") || !section["vertices"].is_array() ||
      !section.contains("edges") || !section["edges"].is_array()) {
    throw ParseError("tree section needs 'vertices' and 'edges' arrays");
  }
  ProbabilityTree tree;
  for (const auto& v : section["vertices"]) {
    if (!v.is_string()) throw ParseError("vertex ids must be strings");
    tree.add_vertex(v.get<std::string>());
  }
  for (const auto& e : section["edges"]) {
    if (!e.is_object()) throw ParseError("edges must be objects");
    const auto id = require_string(e, "id");
    const auto from = require_string(e, "from");
    const auto to = require_string(e, "to");
    const auto source = tree.find_vertex(from);
    const auto target = tree.find_vertex(to);
    if (!source) throw ParseError("edge " + id + ": unknown vertex '" + from + "'");
    if (!target) throw ParseError("edge " + id + ": unknown vertex '" + to + "'");
    if (!e.contains("prob")) throw ParseError("edge " + id + " has no 'prob'");
    tree.add_edge(*source, *target, probability_field(e["prob"], "edge " + id),
                  id, optional_string(e, "label"));
  }
  auto report = validate_tree(tree);
  if (!report.ok()) {
    throw ValidationError("invalid tree: " + report.violations.front().message);
  }
  return tree;
}

TransporterCeg parse_ceg_section(const json& section) {
  if (!section.contains("positions") || !section["positions"].is_array() ||
      !section.contains("edges") || !section["edges"].is_array()) {
    throw ParseError("ceg section needs 'positions' and 'edges' arrays");
  }
  TransporterCeg ceg;
  for (const auto& w : section["positions"]) {
    if (!w.is_string()) throw ParseError("position ids must be strings");
    ceg.add_position(w.get<std::string>());
  }
  const auto root = ceg.find_position(require_string(section, "root"));
  const auto sink = ceg.find_position(require_string(section, "sink"));
  if (!root || !sink) throw ParseError("root/sink name not in 'positions'");
  ceg.set_root(*root);
  ceg.set_sink(*sink);
  for (const auto& e : section["edges"]) {
    if (!e.is_object()) throw ParseError("edges must be objects");
    const auto id = require_string(e, "id");
    const auto source = ceg.find_position(require_string(e, "from"));
    const auto target = ceg.find_position(require_string(e, "to"));
    if (!source || !target) {
      throw ParseError("edge " + id + " references an unknown position");
    }
    if (!e.contains("prob")) throw ParseError("edge " + id + " has no 'prob'");
    ceg.add_edge(*source, *target, probability_field(e["prob"], "edge " + id),
                 id, optional_string(e, "label"));
  }
  ceg.validate();

  // Redundant pi section, if present, must agree with the edge listing.
  if (section.contains("pi")) {
    if (!section["pi"].is_object()) throw ParseError("'pi' must be an object");
    for (const auto& [name, values] : section["pi"].items()) {
      const auto w = ceg.find_position(name);
      if (!w) throw ParseError("pi entry for unknown position '" + name + "'");
      if (!values.is_array()) throw ParseError("pi vectors must be arrays");
      const auto expected = ceg.pi(*w);
      if (values.size() != expected.size()) {
        throw ValidationError("pi vector of " + name +
                              " does not match its edge count");
      }
      for (std::size_t i = 0; i < expected.size(); ++i) {
        if (probability_field(values[i], "pi of " + name) != expected[i]) {
          throw ValidationError("pi vector of " + name +
                                " disagrees with its edge probabilities");
        }
      }
    }
  }
  return ceg;
}

}  // namespace

LoadedModel parse_model(const std::string& json_text) {
  const json doc = parse_document(json_text);
  check_format(doc, kModelFormat);
  LoadedModel model;
  model.name = optional_string(doc, "name");
  model.description = optional_string(doc, "description");
  const bool has_tree = doc.contains("tree");
  const bool has_ceg = doc.contains("ceg");
  if (has_tree == has_ceg) {
    throw ParseError("model must contain exactly one of 'tree' or 'ceg'");
  }
  if (has_tree) {
    model.tree = parse_tree_section(doc["tree"]);
  } else {
    model.ceg = parse_ceg_section(doc["ceg"]);
  }
  return model;
}

std::string serialize_tree_model(const ProbabilityTree& tree,
                                 const std::string& name,
                                 const std::string& description) {
  json doc;
  doc["format"] = kModelFormat;
  if (!name.empty()) doc["name"] = name;
  if (!description.empty()) doc["description"] = description;
  json vertices = json::array();
  for (VertexId v = 0; v < tree.vertex_count(); ++v) {
    vertices.push_back(tree.vertex_name(v));
  }
  json edges = json::array();
  for (const auto& e : tree.edges()) {
    json edge;
    edge["id"] = e.name;
    edge["from"] = tree.vertex_name(e.source);
    edge["to"] = tree.vertex_name(e.target);
    edge["prob"] = format_double(e.prob);
    if (!e.label.empty()) edge["label"] = e.label;
    edges.push_back(std::move(edge));
  }
  doc["tree"] = {{"vertices", std::move(vertices)}, {"edges", std::move(edges)}};
  return doc.dump(2) + "\n";
}

std::string serialize_ceg_model(const TransporterCeg& ceg,
                                const std::string& name,
                                const std::string& description) {
  json doc;
  doc["format"] = kModelFormat;
  if (!name.empty()) doc["name"] = name;
  if (!description.empty()) doc["description"] = description;
  json positions = json::array();
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    positions.push_back(ceg.position_name(w));
  }
  json edges = json::array();
  for (const auto& e : ceg.edges()) {
    json edge;
    edge["id"] = e.name;
    edge["from"] = ceg.position_name(e.source);
    edge["to"] = ceg.position_name(e.target);
    edge["prob"] = format_double(e.prob);
    if (!e.label.empty()) edge["label"] = e.label;
    edges.push_back(std::move(edge));
  }
  json pi = json::object();
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    if (ceg.is_sink(w)) continue;
    json vec = json::array();
    for (double p : ceg.pi(w)) vec.push_back(format_double(p));
    pi[ceg.position_name(w)] = std::move(vec);
  }
  doc["ceg"] = {{"root", ceg.position_name(ceg.root())},
                {"sink", ceg.position_name(ceg.sink())},
                {"positions", std::move(positions)},
                {"edges", std::move(edges)},
                {"pi", std::move(pi)}};
  return doc.dump(2) + "\n";
}

CompatibleObservation parse_observation(const std::string& json_text,
                                        const TransporterCeg& ceg,
                                        const std::string& model_name) {
  const json doc = parse_document(json_text);
  check_format(doc, kObservationFormat);
  const auto referenced = optional_string(doc, "model");
  if (!referenced.empty() && !model_name.empty() && referenced != model_name) {
    throw ValidationError("observation references model '" + referenced +
                          "' but was applied to '" + model_name + "'");
  }
  const bool has_edges = doc.contains("edges");
  const bool has_positions = doc.contains("positions");
  if (has_edges == has_positions) {
    throw ParseError(
        "observation must contain exactly one of 'edges' or 'positions'");
  }

  auto resolve_edge = [&](const json& value) {
    if (!value.is_string()) throw ParseError("edge ids must be strings");
    const auto e = ceg.find_edge(value.get<std::string>());
    if (!e) {
      throw ValidationError("observation references unknown edge '" +
                            value.get<std::string>() + "'");
    }
    return *e;
  };

  if (has_edges) {
    if (!doc["edges"].is_array()) throw ParseError("'edges' must be an array");
    std::vector<EdgeId> edges;
    for (const auto& value : doc["edges"]) edges.push_back(resolve_edge(value));
    return CompatibleObservation::from_union(ceg, edges);
  }

  if (!doc["positions"].is_object()) {
    throw ParseError("'positions' must be an object");
  }
  std::map<PositionId, std::vector<EdgeId>> sets;
  for (const auto& [name, subset] : doc["positions"].items()) {
    const auto w = ceg.find_position(name);
    if (!w) {
      throw ValidationError("observation references unknown position '" +
                            name + "'");
    }
    if (!subset.is_array()) throw ParseError("position subsets must be arrays");
    auto& list = sets[*w];
    for (const auto& value : subset) list.push_back(resolve_edge(value));
  }
  return CompatibleObservation::from_edge_sets(ceg, sets);
}

std::string serialize_observation(const TransporterCeg& ceg,
                                  const CompatibleObservation& obs,
                                  const std::string& model_name) {
  json doc;
  doc["format"] = kObservationFormat;
  if (!model_name.empty()) doc["model"] = model_name;
  json edges = json::array();
  for (EdgeId e : obs.union_edges()) edges.push_back(ceg.edge(e).name);
  doc["edges"] = std::move(edges);
  return doc.dump(2) + "\n";
}

std::string serialize_result(const TransporterCeg& ceg,
                             const PropagationResult& result,
                             const std::string& model_name) {
  json doc;
  doc["format"] = kResultFormat;
  if (!model_name.empty()) doc["model"] = model_name;
  doc["event_probability"] = format_double(result.phi[ceg.root()]);
  json phi = json::object();
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    phi[ceg.position_name(w)] = format_double(result.phi[w]);
  }
  json tau = json::object();
  json pi_hat = json::object();
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    tau[ceg.edge(e).name] = format_double(result.tau[e]);
    pi_hat[ceg.edge(e).name] = format_double(result.pi_hat[e]);
  }
  doc["phi"] = std::move(phi);
  doc["tau"] = std::move(tau);
  doc["pi_hat"] = std::move(pi_hat);
  doc["counters"] = {
      {"backward_edge_ops", result.counters.backward_edge_ops},
      {"backward_vertex_ops", result.counters.backward_vertex_ops},
      {"forward_edge_ops", result.counters.forward_edge_ops}};
  return doc.dump(2) + "\n";
}

PropagationResult parse_result(const std::string& json_text,
                               const TransporterCeg& ceg) {
  const json doc = parse_document(json_text);
  check_format(doc, kResultFormat);
  PropagationResult result;
  result.phi.assign(ceg.position_count(), 0.0);
  result.tau.assign(ceg.edge_count(), 0.0);
  result.pi_hat.assign(ceg.edge_count(), 0.0);

  auto fill_positions = [&](const char* key, std::vector<double>& into) {
    if (!doc.contains(key) || !doc[key].is_object()) {
      throw ParseError(std::string("missing table '") + key + "'");
    }
    for (const auto& [name, value] : doc[key].items()) {
      const auto w = ceg.find_position(name);
      if (!w) throw ValidationError("result references unknown position '" + name + "'");
      into[*w] = probability_field(value, name);
    }
  };
  auto fill_edges = [&](const char* key, std::vector<double>& into) {
    if (!doc.contains(key) || !doc[key].is_object()) {
      throw ParseError(std::string("missing table '") + key + "'");
    }
    for (const auto& [name, value] : doc[key].items()) {
      const auto e = ceg.find_edge(name);
      if (!e) throw ValidationError("result references unknown edge '" + name + "'");
      into[*e] = probability_field(value, name);
    }
  };
  fill_positions("phi", result.phi);
  fill_edges("tau", result.tau);
  fill_edges("pi_hat", result.pi_hat);
  if (doc.contains("counters") && doc["counters"].is_object()) {
    const auto& counters = doc["counters"];
    auto count = [&](const char* key) -> std::uint64_t {
      if (!counters.contains(key) || !counters[key].is_number_unsigned()) return 0;
      return counters[key].get<std::uint64_t>();
    };
    result.counters.backward_edge_ops = count("backward_edge_ops");
    result.counters.backward_vertex_ops = count("backward_vertex_ops");
    result.counters.forward_edge_ops = count("forward_edge_ops");
  }
  return result;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  if (in.bad()) throw IoError("read failure on '" + path.string() + "'");
  return buffer.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write '" + path.string() + "'");
  out << text;
  out.flush();
  if (!out) throw IoError("write failure on '" + path.string() + "'");
}

LoadedModel load_model(const std::filesystem::path& path) {
  return parse_model(read_file(path));
}

}  // namespace cegprop
