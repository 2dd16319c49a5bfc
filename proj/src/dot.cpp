#include "cegprop/dot.hpp"

#include <sstream>

namespace cegprop {

namespace {

std::string escape(const std::string& text) {
  std::string out;
  out.reserve(text.size());
  for (char c : text) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string export_dot(const TransporterCeg& ceg,
                       const PropagationResult* annotations) {
  std::ostringstream os;
  os << "digraph ceg {\n";
  os << "  rankdir=LR;\n";
  os << "  node [shape=circle];\n";
  for (PositionId w = 0; w < ceg.position_count(); ++w) {
    os << "  n" << w << " [label=\"" << escape(ceg.position_name(w));
    if (annotations) {
      os << "\\nphi=" << format_double(annotations->phi[w]);
    }
    os << "\"";
    if (ceg.is_sink(w)) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (EdgeId e = 0; e < ceg.edge_count(); ++e) {
    const auto& edge = ceg.edge(e);
    os << "  n" << edge.source << " -> n" << edge.target << " [label=\""
       << escape(edge.name) << " " << format_double(edge.prob);
    if (annotations) {
      os << "\\ntau=" << format_double(annotations->tau[e])
         << " pihat=" << format_double(annotations->pi_hat[e]);
    }
    os << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace cegprop
