#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace topoconc {

// Fixed formatting for report output; keeps reruns byte-identical.
inline std::string format_double(double v) {
  if (std::isnan(v)) return "NA";
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

}  // namespace topoconc
