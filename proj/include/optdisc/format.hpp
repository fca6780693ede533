#pragma once

#include <cstdio>
#include <string>

namespace optdisc {

/// 17 significant digits, enough to round-trip any double exactly.
inline std::string format_g17(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return std::string(buf);
}

}  // namespace optdisc
