#pragma once

#include <cmath>
#include <vector>

#include "thermoset/error.hpp"

namespace thermoset {

/// One accepted iterate of `bracketed_root`, with the bracket it was
/// accepted against.
template <class T>
struct RootStep {
  T lo, hi, x;
  bool newton;
};

template <class T>
struct RootResult {
  T x;
  T residual;
  int iterations = 0;
};

/// Safeguarded Newton iteration for a continuous function with a sign change
/// on [lo, hi]. A Newton step is accepted only when it lands strictly inside
/// the current bracket, otherwise the bracket is bisected. Stops when
/// |value| <= ftol or the bracket is narrower than xtol.
template <class T, class Value, class Slope>
RootResult<T> bracketed_root(Value&& value, Slope&& slope, T lo, T hi, T xtol, T ftol,
                             std::vector<RootStep<T>>* trace = nullptr, int max_iter = 400) {
  T flo = value(lo);
  T fhi = value(hi);
  if (flo == 0) return {lo, T(0), 0};
  if (fhi == 0) return {hi, T(0), 0};
  if ((flo > 0) == (fhi > 0)) throw OutOfRange("no sign change on the bracket");

  T x = (lo + hi) / 2;
  T fx = value(x);
  bool newton = false;
  for (int it = 1; it <= max_iter; ++it) {
    if (trace) trace->push_back({lo, hi, x, newton});
    if (fx == 0 || std::abs(fx) <= ftol) return {x, fx, it};
    if ((fx > 0) == (flo > 0)) {
      lo = x;
      flo = fx;
    } else {
      hi = x;
    }
    if (hi - lo <= xtol) {
      T mid = (lo + hi) / 2;
      return {mid, value(mid), it};
    }
    T d = slope(x);
    T candidate = (d != 0 && std::isfinite(d)) ? x - fx / d : lo;
    if (candidate > lo && candidate < hi && std::isfinite(candidate)) {
      x = candidate;
      newton = true;
    } else {
      x = lo + (hi - lo) / 2;
      newton = false;
      if (!(x > lo && x < hi)) {
        // Bracket is down to adjacent floating point numbers.
        T vlo = value(lo), vhi = value(hi);
        return std::abs(vlo) <= std::abs(vhi) ? RootResult<T>{lo, vlo, it}
                                               : RootResult<T>{hi, vhi, it};
      }
    }
    fx = value(x);
  }
  throw NoConvergence("bracketed root finder exceeded its iteration budget");
}

}  // namespace thermoset
