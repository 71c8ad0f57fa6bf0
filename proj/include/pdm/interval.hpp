#pragma once

#include <cmath>

namespace pdm {

/// Open interval; either end may be infinite.
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double width() const { return hi - lo; }
  double mid() const { return 0.5 * (lo + hi); }
  bool finite() const { return std::isfinite(lo) && std::isfinite(hi); }
  bool contains(double x) const { return x > lo && x < hi; }
  bool contains_closed(double x) const { return x >= lo && x <= hi; }
};

}  // namespace pdm
