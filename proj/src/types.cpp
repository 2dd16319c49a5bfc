#include "cegprop/types.hpp"

#include <charconv>
#include <cmath>
#include <system_error>

#include "cegprop/errors.hpp"

namespace cegprop {

std::string format_double(double value) {
  char buf[32];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, ptr);
}

double parse_double(const std::string& text) {
  double value = 0.0;
  const char* first = text.data();
  const char* last = first + text.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last) {
    throw ParseError("not a decimal number: '" + text + "'");
  }
  if (!std::isfinite(value)) {
    throw ParseError("non-finite number: '" + text + "'");
  }
  return value;
}

}  // namespace cegprop
