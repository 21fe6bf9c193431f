#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace lossqfi {

/// Fixed 12-significant-digit decimal form used for every emitted number.
inline std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  if (x == 0.0) x = 0.0;  // drop the sign of negative zero
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

}  // namespace lossqfi
