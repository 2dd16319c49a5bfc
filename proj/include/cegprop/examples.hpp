#pragma once

#include <vector>

#include "cegprop/ceg.hpp"
#include "cegprop/observation.hpp"
#include "cegprop/tree.hpp"

namespace cegprop::examples {

// The four-stage medical treatment model: 27 vertices, 26 edges, 16 atoms.
// Three copies of the surgery-outcome subtree and two copies each of the
// surgery-IV and final-treatment subtrees merge into positions w4, w5, w6,
// giving a transporter CEG with 8 positions and 16 edges e1..e16.
ProbabilityTree medical_tree();

// CEG built from medical_tree() with default options.
TransporterCeg medical_ceg();

// Edge names of the running observation on the medical CEG: the patient was
// not diagnosed with both liver and kidney failure and is still alive.
std::vector<std::string> alive_observation_edge_names();

CompatibleObservation alive_observation(const TransporterCeg& ceg);

}  // namespace cegprop::examples
