#pragma once

#include <algorithm>
#include <cmath>

namespace thermoset {

/// Closed interval [lo, hi].
struct Interval {
  double lo = 0.0;
  double hi = 0.0;

  double length() const noexcept { return hi - lo; }
  double midpoint() const noexcept { return lo + (hi - lo) / 2; }
  bool contains(double x, double tol = 0.0) const noexcept {
    return x >= lo - tol && x <= hi + tol;
  }
  bool contains(const Interval& o, double tol = 0.0) const noexcept {
    return o.lo >= lo - tol && o.hi <= hi + tol;
  }
  bool intersects(const Interval& o) const noexcept { return o.lo <= hi && o.hi >= lo; }

  static Interval hull(double a, double b) { return {std::min(a, b), std::max(a, b)}; }

  friend bool operator==(const Interval&, const Interval&) = default;
};

}  // namespace thermoset
