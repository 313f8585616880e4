#pragma once

#include <cstdio>
#include <string>

namespace afne::detail {

// 17 significant digits round-trip every double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace afne::detail
