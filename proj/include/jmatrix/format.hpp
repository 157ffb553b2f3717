#pragma once

#include <charconv>
#include <cmath>
#include <string>

namespace jmatrix {

/// Shortest decimal that reads back to the same double (at most 17
/// significant digits). Non-finite values become "nan", "inf" or "-inf".
inline std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

}  // namespace jmatrix
