#include "thermoset/gaps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "thermoset/cylinders.hpp"
#include "thermoset/error.hpp"
#include "thermoset/roots.hpp"

namespace thermoset {

std::string to_string(Side s) { return s == Side::Plus ? "+" : "-"; }

Side parse_side(const std::string& s) {
  if (s == "+" || s == "plus") return Side::Plus;
  if (s == "-" || s == "minus") return Side::Minus;
  throw PreconditionViolation("side must be '+' or '-', got '" + s + "'");
}

std::string to_string(SeriesVerdict v) {
  switch (v) {
    case SeriesVerdict::Convergent:
      return "Convergent";
    case SeriesVerdict::Divergent:
      return "Divergent";
    case SeriesVerdict::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

std::string to_string(TailModel m) {
  switch (m) {
    case TailModel::None:
      return "none";
    case TailModel::PowerLaw:
      return "power-law";
    case TailModel::LogCorrected:
      return "log-corrected";
  }
  return "none";
}

// ---------------------------------------------------------------------------
// Cascade

namespace {

// Solves f(z) = y for z between x and y, where f fixes x.
long double local_preimage(const Branch& b, long double x, long double y) {
  if (b.kind() != BranchKind::InverseOfForward) return b.g(y);
  const SmoothFunction& fn = *b.function();
  auto value = [&](long double z) { return fn.value(z) - y; };
  auto slope = [&](long double z) -> long double {
    try {
      return fn.derivative(z);
    } catch (const DomainError&) {
      return 0.0L;
    }
  };
  const long double lo = std::min(x, y), hi = std::max(x, y);
  return bracketed_root<long double>(value, slope, lo, hi, 0.0L, 0.0L).x;
}

}  // namespace

GapCascade gap_cascade(const MarkovSystem& system, const PeriodicPoint& pt, Side side,
                       std::size_t K, std::size_t start_depth) {
  if (pt.period() != 1) {
    throw PreconditionViolation("gap cascades need a fixed point; pass the iterate f^m instead");
  }
  if (classify_point(pt) != PointClass::Parabolic) {
    throw PreconditionViolation("gap cascades need a parabolic point");
  }
  if (start_depth == 0 || K <= start_depth) {
    throw PreconditionViolation("cascade needs 1 <= start_depth < K");
  }
  const int i = pt.word.front();
  const Branch& b = system.branch(i);

  const Word w(start_depth, i);
  const CylinderTable table(system, start_depth);
  const auto idx = table.find(w);
  if (!idx) throw PreconditionViolation("cylinder " + to_string(w) + " is not admissible");
  const Cylinder& cyl = table.level(start_depth)[*idx];
  const long double x = pt.x;
  long double y = side == Side::Plus ? cyl.right : cyl.left;
  if ((side == Side::Plus && !(y > x)) || (side == Side::Minus && !(y < x))) {
    throw PreconditionViolation("no cylinders on the " + to_string(side) + " side of x");
  }

  GapCascade c;
  c.x = pt.x;
  c.side = side;
  c.symbol = i;
  c.first = start_depth;
  c.points.reserve(K - start_depth + 1);
  c.lengths.reserve(K - start_depth);
  c.points.push_back(y);
  for (std::size_t k = start_depth; k < K; ++k) {
    const long double next = local_preimage(b, x, y);
    const long double dist = std::abs(next - x);
    const bool progressed = side == Side::Plus ? (next < y && next > x) : (next > y && next < x);
    if (!progressed || !(dist > 1e-300L)) {
      throw InversionStall("cascade stalled at k = " + std::to_string(k + 1));
    }
    c.lengths.push_back(static_cast<double>(std::abs(b.f_increment(next))));
    c.points.push_back(next);
    y = next;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Fits

namespace {

struct LineFit {
  double slope = 0.0, intercept = 0.0, r2 = 0.0, rms = 0.0;
};

LineFit least_squares(const std::vector<double>& xs, const std::vector<double>& ys) {
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  LineFit f;
  f.slope = sxx > 0.0 ? sxy / sxx : 0.0;
  f.intercept = my - f.slope * mx;
  double sse = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double r = ys[i] - (f.intercept + f.slope * xs[i]);
    sse += r * r;
  }
  f.r2 = syy > 0.0 ? 1.0 - sse / syy : 1.0;
  f.rms = std::sqrt(sse / n);
  return f;
}

// About 200 log-spaced indices per decade in [lo, hi].
std::vector<std::size_t> log_grid(std::size_t lo, std::size_t hi) {
  std::vector<std::size_t> ks;
  const double a = std::log(static_cast<double>(lo)), b = std::log(static_cast<double>(hi));
  const std::size_t m = std::max<std::size_t>(
      2, static_cast<std::size_t>(200.0 * (b - a) / std::log(10.0)) + 1);
  for (std::size_t j = 0; j < m; ++j) {
    const double v = std::exp(a + (b - a) * static_cast<double>(j) / static_cast<double>(m - 1));
    const std::size_t k = std::clamp(static_cast<std::size_t>(std::llround(v)), lo, hi);
    if (ks.empty() || ks.back() != k) ks.push_back(k);
  }
  return ks;
}

std::pair<std::size_t, std::size_t> window(const GapCascade& c, std::size_t k_min,
                                           std::size_t k_max, std::size_t decades) {
  const std::size_t last = c.last() - 1;  // largest k with a length
  std::size_t hi = k_max == 0 ? last : std::min(k_max, last);
  std::size_t span = 1;
  for (std::size_t d = 0; d < decades; ++d) span *= 10;
  std::size_t lo = k_min == 0 ? std::max<std::size_t>(hi / span, 1) : k_min;
  lo = std::max(lo, std::max<std::size_t>(c.first, 2));
  if (lo >= hi) throw PreconditionViolation("fit window is empty");
  return {lo, hi};
}

LineFit power_fit(const GapCascade& c, std::size_t lo, std::size_t hi) {
  std::vector<double> xs, ys;
  for (std::size_t k : log_grid(lo, hi)) {
    xs.push_back(std::log(static_cast<double>(k)));
    ys.push_back(std::log(c.length(k)));
  }
  return least_squares(xs, ys);
}

}  // namespace

PowerLawFit fit_power_law(const GapCascade& c, std::size_t k_min, std::size_t k_max) {
  if (c.lengths.size() < 100) throw PreconditionViolation("power-law fit needs K >= 100");
  const auto [lo, hi] = window(c, k_min, k_max, 2);
  PowerLawFit out;
  out.k_min = lo;
  out.k_max = hi;
  const LineFit all = power_fit(c, lo, hi);
  out.beta = -all.slope;
  out.r2 = all.r2;
  const std::size_t first_hi = std::min(hi, std::max(lo * 10, lo + 2));
  const std::size_t last_lo = std::max(lo, hi / 10);
  out.slope_first = -power_fit(c, lo, first_hi).slope;
  out.slope_last = -power_fit(c, last_lo == hi ? lo : last_lo, hi).slope;
  out.drifting = std::abs(out.slope_last - out.slope_first) > 0.02;
  return out;
}

LogCorrectedFit fit_log_corrected(const GapCascade& c, std::size_t k_min, std::size_t k_max) {
  const auto [lo, hi] = window(c, k_min, k_max, 1);
  LogCorrectedFit out;
  out.k_min = lo;
  out.k_max = hi;
  out.min_ratio = std::numeric_limits<double>::infinity();
  out.max_ratio = 0.0;
  double first_len = c.length(lo);
  bool constant = true;
  auto rho = [&](std::size_t k) {
    const double kd = static_cast<double>(k), lk = std::log(kd);
    return c.length(k) * kd * lk * lk;
  };
  for (std::size_t k = lo; k <= hi; ++k) {
    const double r = rho(k);
    out.min_ratio = std::min(out.min_ratio, r);
    out.max_ratio = std::max(out.max_ratio, r);
    if (c.length(k) != first_len) constant = false;
  }
  out.band = out.max_ratio / out.min_ratio;
  out.drift = rho(hi) / rho(lo);
  out.degenerate = constant;
  return out;
}

// ---------------------------------------------------------------------------
// Tail series

namespace {

constexpr double kModelRms = 0.05;

struct ShiftedLogFit {
  double shift = 0.0;
  double rms = std::numeric_limits<double>::infinity();
};

// log|D_k| = a - log k - 2 log(log k + c); a in closed form, c by golden
// section on the RMS residual.
ShiftedLogFit log_corrected_fit(const GapCascade& c, std::size_t lo, std::size_t hi) {
  const auto ks = log_grid(lo, hi);
  std::vector<double> lk, base;
  for (std::size_t k : ks) {
    const double l = std::log(static_cast<double>(k));
    lk.push_back(l);
    base.push_back(std::log(c.length(k)) + l);
  }
  auto rms_at = [&](double shift) {
    std::vector<double> r(ks.size());
    double mean = 0.0;
    for (std::size_t j = 0; j < ks.size(); ++j) {
      r[j] = base[j] + 2.0 * std::log(lk[j] + shift);
      mean += r[j];
    }
    mean /= static_cast<double>(ks.size());
    double sse = 0.0;
    for (double v : r) sse += (v - mean) * (v - mean);
    return std::sqrt(sse / static_cast<double>(ks.size()));
  };
  double a = -lk.front() + 1e-3, b = 50.0;
  const double phi = 0.5 * (std::sqrt(5.0) - 1.0);
  double x1 = b - phi * (b - a), x2 = a + phi * (b - a);
  double f1 = rms_at(x1), f2 = rms_at(x2);
  for (int it = 0; it < 200 && b - a > 1e-10; ++it) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - phi * (b - a);
      f1 = rms_at(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + phi * (b - a);
      f2 = rms_at(x2);
    }
  }
  ShiftedLogFit out;
  out.shift = 0.5 * (a + b);
  out.rms = rms_at(out.shift);
  return out;
}

// Margin around the critical exponent inside which no verdict is given.
constexpr double kCriticalBand = 0.02;

}  // namespace

TailSeries tail_series(const GapCascade& c, double t) {
  if (c.lengths.size() < 10000) throw PreconditionViolation("tail series needs K >= 10^4");
  TailSeries out;
  out.t = t;

  // Partial sums with decade marks.
  std::vector<double> decade_increments;
  double sum = 0.0, at_mark = 0.0;
  std::size_t next_mark = 10;
  while (next_mark <= c.first) next_mark *= 10;
  for (std::size_t k = c.first; k < c.last(); ++k) {
    sum += std::pow(c.length(k), t);
    if (k + 1 == next_mark) {
      out.partial_sums.emplace_back(k, sum);
      decade_increments.push_back(sum - at_mark);
      at_mark = sum;
      next_mark *= 10;
    }
  }
  const std::size_t k_end = c.last() - 1;
  if (out.partial_sums.empty() || out.partial_sums.back().first != k_end) {
    out.partial_sums.emplace_back(k_end, sum);
  }
  out.total = sum;
  // Increment over the last full decade of indices.
  {
    const std::size_t lo = std::max(c.first, (k_end + 1) / 10);
    double inc = 0.0;
    for (std::size_t k = lo; k <= k_end; ++k) inc += std::pow(c.length(k), t);
    out.last_decade_increment = inc;
  }
  if (out.last_decade_increment < 1e-3 * out.total) {
    out.rule_verdict = SeriesVerdict::Convergent;
  } else if (decade_increments.size() >= 2 &&
             std::is_sorted(decade_increments.begin() + 1, decade_increments.end())) {
    out.rule_verdict = SeriesVerdict::Divergent;
  }

  // Model comparison on the last two decades.
  const auto [lo, hi] = window(c, 0, 0, 2);
  const LineFit pw = power_fit(c, lo, hi);
  const ShiftedLogFit lc = log_corrected_fit(c, lo, hi);
  if (std::min(pw.rms, lc.rms) <= kModelRms) {
    if (lc.rms < pw.rms) {
      // sum k^{-t} (log k)^{-2t}: converges iff t > 1, or t = 1 with 2t > 1.
      out.model = TailModel::LogCorrected;
      out.model_rms = lc.rms;
      out.model_shift = lc.shift;
      out.model_verdict = t >= 1.0 ? SeriesVerdict::Convergent : SeriesVerdict::Divergent;
    } else {
      out.model = TailModel::PowerLaw;
      out.model_rms = pw.rms;
      out.model_beta = -pw.slope;
      const double e = out.model_beta * t;
      out.model_verdict = e > 1.0 + kCriticalBand   ? SeriesVerdict::Convergent
                          : e < 1.0 - kCriticalBand ? SeriesVerdict::Divergent
                                                    : SeriesVerdict::Inconclusive;
    }
    out.verdict = out.model_verdict;
  } else {
    out.verdict = out.rule_verdict;
  }
  return out;
}

double cover_measure(const MarkovSystem& system, std::size_t n) {
  return CylinderTable(system, n).total_length(n);
}

LocalExponent estimate_local_exponent(const MarkovSystem& system, const PeriodicPoint& pt,
                                      Side side, double h_min, double h_max) {
  if (!(h_min > 0.0 && h_max > h_min)) throw PreconditionViolation("need 0 < h_min < h_max");
  const Branch& b = system.branch(pt.word.front());
  const double len = system.ambient().length();
  const double sgn = side == Side::Plus ? 1.0 : -1.0;
  std::vector<double> xs, ys;
  constexpr int kSamples = 64;
  for (int j = 0; j < kSamples; ++j) {
    const double h = len * h_min * std::pow(h_max / h_min, j / double(kSamples - 1));
    const long double y = static_cast<long double>(pt.x) + sgn * h;
    const double inc = static_cast<double>(std::abs(b.f_increment(y)));
    if (!(inc > 0.0) || !std::isfinite(inc)) continue;
    xs.push_back(std::log(h));
    ys.push_back(std::log(inc));
  }
  if (xs.size() < 2) throw PreconditionViolation("no measurable displacement near the point");
  const LineFit f = least_squares(xs, ys);
  return {f.slope, f.r2};
}

}  // namespace thermoset
