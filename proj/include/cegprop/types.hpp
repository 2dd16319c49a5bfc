#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cegprop {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
using PositionId = std::uint32_t;

// Absolute tolerance for out-probability sums. Model files carry decimal
// strings, so a distribution like (0.1, 0.2, 0.7) may not sum to 1 exactly.
inline constexpr double kSumTolerance = 1e-9;

// Ordered edge sequence. Used for tree atoms (root-to-leaf paths), CEG
// root-to-sink paths, and root-to-w subpaths; the edge ids are interpreted
// relative to the graph the atom was produced from.
struct Atom {
  std::vector<EdgeId> edges;
  bool operator==(const Atom&) const = default;
};

// Shortest decimal rendering that parses back to the identical double.
std::string format_double(double value);

// Strict decimal-string parse; the whole string must be consumed.
// Throws ParseError on malformed input, NaN or infinity.
double parse_double(const std::string& text);

}  // namespace cegprop
