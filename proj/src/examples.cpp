#include "cegprop/examples.hpp"

#include "cegprop/positions.hpp"

namespace cegprop::examples {

ProbabilityTree medical_tree() {
  ProbabilityTree t;
  const auto v0 = t.add_vertex("v0");
  const auto v1 = t.add_vertex("v1");
  const auto v2 = t.add_vertex("v2");
  const auto v3 = t.add_vertex("v3");
  const auto v4a = t.add_vertex("v4a");
  const auto v4b = t.add_vertex("v4b");
  const auto v4c = t.add_vertex("v4c");
  const auto v5a = t.add_vertex("v5a");
  const auto v5b = t.add_vertex("v5b");
  const auto v6a = t.add_vertex("v6a");
  const auto v6b = t.add_vertex("v6b");
  VertexId leaves[16];
  for (int i = 0; i < 16; ++i) {
    leaves[i] = t.add_vertex("l" + std::to_string(i + 1));
  }

  const std::string initial_i = "not critical; treatment I";
  const std::string initial_ii = "liver failure; treatment II";
  const std::string initial_both = "liver and kidney failure; treatment II";
  const std::string recover_i = "responds to I; full recovery";
  const std::string surgery_iii_after_i = "no response to I; surgery III";
  const std::string surgery_iii = "responds to II; surgery III";
  const std::string surgery_iv = "no response to II; surgery IV";
  const std::string monitoring = "recovery; lifetime monitoring";
  const std::string medication = "recovery; lifetime medication";
  const std::string death_in_surgery = "death in surgery";
  const std::string treatment_v = "survives surgery IV; treatment V";
  const std::string recover_v = "recovery; lifetime treatment V";
  const std::string dies_v = "no response to V; dies";

  t.add_edge(v0, v1, 0.5, "e1", initial_i);
  t.add_edge(v0, v2, 0.3, "e2", initial_ii);
  t.add_edge(v0, v3, 0.2, "e3", initial_both);

  t.add_edge(v1, leaves[0], 0.6, "e4", recover_i);
  t.add_edge(v1, v4a, 0.4, "e5", surgery_iii_after_i);

  t.add_edge(v2, v4b, 0.7, "e6", surgery_iii);
  t.add_edge(v2, v5a, 0.3, "e7", surgery_iv);

  t.add_edge(v3, v4c, 0.5, "e8", surgery_iii);
  t.add_edge(v3, v5b, 0.5, "e9", surgery_iv);

  t.add_edge(v4a, leaves[1], 0.5, "e10", monitoring);
  t.add_edge(v4a, leaves[2], 0.3, "e11", medication);
  t.add_edge(v4a, leaves[3], 0.2, "e12", death_in_surgery);

  t.add_edge(v4b, leaves[4], 0.5, "e10b", monitoring);
  t.add_edge(v4b, leaves[5], 0.3, "e11b", medication);
  t.add_edge(v4b, leaves[6], 0.2, "e12b", death_in_surgery);

  t.add_edge(v5a, leaves[7], 0.25, "e13", death_in_surgery);
  t.add_edge(v5a, v6a, 0.75, "e14", treatment_v);

  t.add_edge(v6a, leaves[8], 0.8, "e15", recover_v);
  t.add_edge(v6a, leaves[9], 0.2, "e16", dies_v);

  t.add_edge(v4c, leaves[10], 0.5, "e10c", monitoring);
  t.add_edge(v4c, leaves[11], 0.3, "e11c", medication);
  t.add_edge(v4c, leaves[12], 0.2, "e12c", death_in_surgery);

  t.add_edge(v5b, leaves[13], 0.25, "e13b", death_in_surgery);
  t.add_edge(v5b, v6b, 0.75, "e14b", treatment_v);

  t.add_edge(v6b, leaves[14], 0.8, "e15b", recover_v);
  t.add_edge(v6b, leaves[15], 0.2, "e16b", dies_v);
  return t;
}

TransporterCeg medical_ceg() { return build_transporter_ceg(medical_tree()); }

std::vector<std::string> alive_observation_edge_names() {
  return {"e1", "e2", "e4", "e5", "e6", "e7", "e10", "e11", "e14", "e15"};
}

CompatibleObservation alive_observation(const TransporterCeg& ceg) {
  std::vector<EdgeId> edges;
  for (const auto& name : alive_observation_edge_names()) {
    edges.push_back(*ceg.find_edge(name));
  }
  return CompatibleObservation::from_union(ceg, edges);
}

}  // namespace cegprop::examples
