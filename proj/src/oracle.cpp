#include "cegprop/oracle.hpp"

#include <string>

#include "cegprop/errors.hpp"

namespace cegprop {

OracleResult brute_force_condition(const TransporterCeg& ceg,
                                   const CompatibleObservation& obs,
                                   std::uint64_t path_cap) {
  const std::uint64_t total = count_paths(ceg);
  if (total > path_cap) {
    throw InstanceTooLargeError("path count " + std::to_string(total) +
                                " exceeds the enumeration cap " +
                                std::to_string(path_cap));
  }

  OracleResult oracle;
  oracle.paths = enumerate_paths(ceg);
  oracle.path_probability.reserve(oracle.paths.size());
  oracle.in_event.reserve(oracle.paths.size());

  for (const auto& path : oracle.paths) {
    double prob = 1.0;
    bool inside = true;
    for (EdgeId e : path.edges) {
      prob *= ceg.edge(e).prob;
      if (!obs.contains(e)) inside = false;
    }
    oracle.path_probability.push_back(prob);
    oracle.in_event.push_back(inside ? 1 : 0);
    if (inside) oracle.event_probability += prob;
  }
  oracle.zero_event = oracle.event_probability == 0.0;

  oracle.conditional_path_prob.assign(oracle.paths.size(), 0.0);
  if (!oracle.zero_event) {
    for (std::size_t i = 0; i < oracle.paths.size(); ++i) {
      if (oracle.in_event[i]) {
        oracle.conditional_path_prob[i] =
            oracle.path_probability[i] / oracle.event_probability;
      }
    }
  }

  // Edge and position event masses by direct accumulation over event paths.
  std::vector<double> edge_mass(ceg.edge_count(), 0.0);
  oracle.position_event_mass.assign(ceg.position_count(), 0.0);
  for (std::size_t i = 0; i < oracle.paths.size(); ++i) {
    if (!oracle.in_event[i]) continue;
    const double prob = oracle.path_probability[i];
    for (EdgeId e : oracle.paths[i].edges) {
      edge_mass[e] += prob;
      oracle.position_event_mass[ceg.edge(e).source] += prob;
    }
    oracle.position_event_mass[ceg.sink()] += prob;
  }
  oracle.conditional_edge_prob.assign(ceg.edge_count(), 0.0);
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    const double denom = oracle.position_event_mass[ceg.edge(e).source];
    if (denom > 0.0) {
      oracle.conditional_edge_prob[e] = edge_mass[e] / denom;
    }
  }
  return oracle;
}

TreeOracleResult brute_force_condition_tree(const ProbabilityTree& tree,
                                            const PositionPartition& partition,
                                            const TransporterCeg& ceg,
                                            const CompatibleObservation& obs) {
  TreeOracleResult oracle;
  oracle.atoms = enumerate_atoms(tree);
  oracle.mapped_paths.reserve(oracle.atoms.size());

  std::vector<double> atom_prob;
  std::vector<char> inside;
  atom_prob.reserve(oracle.atoms.size());
  inside.reserve(oracle.atoms.size());
  for (const auto& atom : oracle.atoms) {
    const Atom image = tree_atom_to_ceg_path(tree, partition, ceg, atom);
    bool in = true;
    for (EdgeId e : image.edges) {
      if (!obs.contains(e)) in = false;
    }
    oracle.mapped_paths.push_back(image);
    atom_prob.push_back(atom_probability(tree, atom));
    inside.push_back(in ? 1 : 0);
    if (in) oracle.event_probability += atom_prob.back();
  }
  oracle.zero_event = oracle.event_probability == 0.0;
  oracle.conditional_atom_prob.assign(oracle.atoms.size(), 0.0);
  if (!oracle.zero_event) {
    for (std::size_t i = 0; i < oracle.atoms.size(); ++i) {
      if (inside[i]) {
        oracle.conditional_atom_prob[i] =
            atom_prob[i] / oracle.event_probability;
      }
    }
  }
  return oracle;
}

}  // namespace cegprop
