#pragma once

#include <string>

#include "cegprop/ceg.hpp"
#include "cegprop/propagation.hpp"

namespace cegprop {

// Graphviz DOT rendering. Edges show their name and probability; with a
// propagation result attached, edges also show tau and pi_hat and nodes
// their emphasis. Output is byte-identical for identical inputs.
std::string export_dot(const TransporterCeg& ceg,
                       const PropagationResult* annotations = nullptr);

}  // namespace cegprop
