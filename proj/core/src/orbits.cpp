#include "thermoset/orbits.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thermoset/error.hpp"
#include "thermoset/parallel.hpp"
#include "thermoset/roots.hpp"

namespace thermoset {

double OrbitAnalysis::lyapunov_estimate() const noexcept {
  const std::size_t n = steps();
  return n == 0 ? 0.0 : log_partial.back() / static_cast<double>(n);
}

OrbitAnalysis orbit_analyze(const MarkovSystem& system, double x, std::size_t steps) {
  OrbitAnalysis out;
  out.start = x;
  out.positions.reserve(steps + 1);
  out.log_partial.reserve(steps + 1);
  out.positions.push_back(x);
  out.log_partial.push_back(0.0);
  double sum = 0.0;
  for (std::size_t k = 0; k < steps; ++k) {
    const auto s = system.locate(x);
    if (!s) {
      out.escaped = true;
      break;
    }
    const Branch& b = system.branch(*s);
    sum += std::log(std::abs(b.df(x)));
    x = b.f(x);
    out.branches.push_back(*s);
    out.positions.push_back(x);
    out.log_partial.push_back(sum);
  }
  // The final point must still lie in a piece for the record to be complete.
  if (!out.escaped && !system.locate(out.positions.back())) out.escaped = true;
  return out;
}

std::vector<std::size_t> hyperbolic_times(const OrbitAnalysis& orbit, double alpha) {
  // n is hyperbolic iff T_n >= T_j for all j < n, with T_j = S_j - j alpha.
  std::vector<std::size_t> times;
  const std::size_t n_max = orbit.steps();
  double running_max = orbit.log_partial.empty() ? 0.0 : orbit.log_partial[0];
  for (std::size_t n = 1; n <= n_max; ++n) {
    const double tn = orbit.log_partial[n] - static_cast<double>(n) * alpha;
    const double slack = 1e-10 * static_cast<double>(n) * std::max(1.0, std::abs(alpha));
    if (tn >= running_max - slack) times.push_back(n);
    running_max = std::max(running_max, tn);
  }
  return times;
}

std::vector<InstantDiagnostic> instant_constants(const MarkovSystem& system,
                                                 const OrbitAnalysis& orbit,
                                                 const std::vector<std::size_t>& times,
                                                 double image_scale) {
  std::vector<InstantDiagnostic> out;
  for (std::size_t n : times) {
    if (n == 0 || n > orbit.steps()) continue;
    const double deriv = std::exp(orbit.log_partial[n]);
    const double r = image_scale * system.ambient().length() / deriv;
    if (!(r > 0.0) || !std::isfinite(r)) continue;
    try {
      double lo = orbit.start - r, hi = orbit.start + r;
      double log_lo = 0.0, log_hi = 0.0;
      for (std::size_t k = 0; k < n; ++k) {
        const Branch& b = system.branch(orbit.branches[k]);
        log_lo += std::log(std::abs(b.df(lo)));
        log_hi += std::log(std::abs(b.df(hi)));
        lo = b.f(lo);
        hi = b.f(hi);
        if (!std::isfinite(lo) || !std::isfinite(hi)) throw DomainError("orbit overflow");
      }
      InstantDiagnostic d;
      d.time = n;
      d.radius = r;
      d.image_diameter = std::abs(hi - lo);
      const double c = orbit.log_partial[n];
      d.distortion = std::exp(std::max(std::abs(log_lo - c), std::abs(log_hi - c)));
      out.push_back(d);
    } catch (const Error&) {
      // The ball left a branch domain; no diagnostic at this time.
    }
  }
  return out;
}

std::string to_string(PointClass c) {
  return c == PointClass::Parabolic ? "Parabolic" : "Expanding";
}

std::string to_string(Membership m) {
  switch (m) {
    case Membership::InH:
      return "InH";
    case Membership::LikelyNotInH:
      return "LikelyNotInH";
    case Membership::Inconclusive:
      return "Inconclusive";
  }
  return "Inconclusive";
}

PointClass classify_point(double multiplier, double tol) {
  if (std::abs(multiplier - 1.0) <= tol) return PointClass::Parabolic;
  if (multiplier < 1.0 - tol) {
    std::ostringstream os;
    os.precision(17);
    os << "periodic multiplier " << multiplier << " < 1";
    throw ContractionDetected(os.str());
  }
  return PointClass::Expanding;
}

PointClass classify_point(const PeriodicPoint& pt, double tol) {
  return classify_point(pt.multiplier, tol);
}

namespace {

// Shortest u with w = u^k.
Word primitive_root(const Word& w) {
  const std::size_t n = w.size();
  for (std::size_t d = 1; d < n; ++d) {
    if (n % d != 0) continue;
    bool ok = true;
    for (std::size_t i = d; i < n && ok; ++i) ok = w[i] == w[i - d];
    if (ok) return Word(w.begin(), w.begin() + static_cast<std::ptrdiff_t>(d));
  }
  return w;
}

struct Chain {
  double value;
  double log_deriv;  // log |g_w'(x)|
};

// g_w(x) = g_{w_1}(... g_{w_n}(x)) together with its log-derivative.
Chain compose(const MarkovSystem& system, const Word& w, double x) {
  double y = x, log_d = 0.0;
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    const Branch& b = system.branch(*it);
    log_d += std::log(std::abs(b.dg(y)));
    y = b.g(y);
  }
  return {y, log_d};
}

PeriodicSolution solve_fixed(const MarkovSystem& system, const Word& w, const Cylinder& cyl) {
  // g_w maps Delta_w into itself, so h = g_w - id is >= 0 at the left end
  // and <= 0 at the right end.
  auto h = [&](double x) { return compose(system, w, x).value - x; };
  auto dh = [&](double x) { return std::exp(compose(system, w, x).log_deriv) - 1.0; };
  const double hl = h(cyl.left), hr = h(cyl.right);
  double x;
  if (hl <= 0.0) {
    x = cyl.left;
  } else if (hr >= 0.0) {
    x = cyl.right;
  } else {
    const double xtol = 1e-13 * system.ambient().length();
    x = bracketed_root<double>(h, dh, cyl.left, cyl.right, xtol, 0.0).x;
  }
  return {w, x, -compose(system, w, x).log_deriv};
}

std::vector<PeriodicSolution> solutions_for(const MarkovSystem& system,
                                            const CylinderTable& table, std::size_t n,
                                            bool primitive_words) {
  std::vector<const Cylinder*> cands;
  for (const auto& c : table.level(n)) {
    if (is_admissible_periodic(system.subshift(), c.word)) cands.push_back(&c);
  }
  std::vector<PeriodicSolution> out(cands.size());
  parallel_for(cands.size(), [&](std::size_t k) {
    const Word& w = cands[k]->word;
    if (!primitive_words) {
      out[k] = solve_fixed(system, w, *cands[k]);
      return;
    }
    Word u = primitive_root(w);
    const Cylinder& cu = table.level(u.size())[*table.find(u)];
    out[k] = solve_fixed(system, u, cu);
  });
  return out;
}

double forward_residual(const MarkovSystem& system, const Word& w, double x) {
  double y = x;
  for (int s : w) y = system.branch(s).f(y);
  return std::abs(y - x);
}

std::vector<PeriodicPoint> periodic_points(const MarkovSystem& system, const CylinderTable& table,
                                           std::size_t n, double tol) {
  const auto sols = solutions_for(system, table, n, true);
  std::vector<PeriodicPoint> out;
  out.reserve(sols.size());
  for (const auto& s : sols) {
    PeriodicPoint p;
    p.word = s.word;
    p.x = s.x;
    p.multiplier = std::exp(s.log_multiplier);
    p.residual = forward_residual(system, s.word, s.x);
    p.cls = classify_point(p.multiplier, tol);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace

std::vector<PeriodicSolution> periodic_solutions(const MarkovSystem& system,
                                                 const CylinderTable& table, std::size_t n) {
  if (n == 0 || n > table.max_depth()) throw PreconditionViolation("period not refined");
  return solutions_for(system, table, n, false);
}

std::vector<PeriodicPoint> enumerate_periodic(const MarkovSystem& system, std::size_t n,
                                              double tol) {
  if (n == 0) throw PreconditionViolation("period must be >= 1");
  return periodic_points(system, CylinderTable(system, n), n, tol);
}

HyperbolicityReport uniform_hyperbolicity_report(const MarkovSystem& system, std::size_t n_max) {
  if (n_max == 0) throw PreconditionViolation("n_max must be >= 1");
  HyperbolicityReport rep;
  rep.max_period = n_max;
  rep.min_rate = std::numeric_limits<double>::infinity();
  const CylinderTable table(system, n_max);
  for (std::size_t m = 1; m <= n_max; ++m) {
    for (auto& p : periodic_points(system, table, m, kParabolicTolerance)) {
      if (p.period() != m) continue;  // counted at its primitive period
      ++rep.points_checked;
      rep.min_rate = std::min(rep.min_rate, std::pow(p.multiplier, 1.0 / static_cast<double>(m)));
      if (p.cls == PointClass::Parabolic) rep.parabolic.push_back(std::move(p));
    }
  }
  std::ostringstream os;
  if (rep.parabolic.empty()) {
    os << "no parabolic orbit found up to period " << n_max << " (finite-depth evidence)";
  } else {
    os << rep.parabolic.size() << " parabolic periodic point(s) up to period " << n_max << ":";
    for (const auto& p : rep.parabolic) os << " [" << to_string(p.word) << "]";
  }
  rep.verdict = os.str();
  return rep;
}

std::optional<CycleLanding> snap_to_cycle(const MarkovSystem& system, OrbitAnalysis& orbit,
                                          std::size_t max_period) {
  if (max_period == 0 || orbit.positions.empty()) return std::nullopt;
  const CylinderTable table(system, max_period);
  std::vector<PeriodicPoint> points;
  for (std::size_t m = 1; m <= max_period; ++m) {
    for (auto& p : periodic_points(system, table, m, kParabolicTolerance)) {
      if (p.period() == m) points.push_back(std::move(p));
    }
  }
  constexpr double kLanding = 1e-10;
  // Orbit points reached after escaping are not meaningful.
  const std::size_t last = orbit.steps();
  for (std::size_t k = 0; k <= last; ++k) {
    for (const auto& p : points) {
      if (std::abs(orbit.positions[k] - p.x) > kLanding) continue;
      CycleLanding landing;
      landing.step = k;
      Word w = p.word;
      for (std::size_t j = 0; j < p.period(); ++j) {
        auto it = std::find_if(points.begin(), points.end(),
                               [&](const PeriodicPoint& q) { return q.word == w; });
        if (it == points.end()) return std::nullopt;
        landing.cycle.push_back(*it);
        std::rotate(w.begin(), w.begin() + 1, w.end());
      }
      const std::size_t n = std::max(last, orbit.branches.size());
      orbit.positions.resize(k + 1);
      orbit.branches.resize(k);
      orbit.log_partial.resize(k + 1);
      orbit.escaped = false;
      double sum = orbit.log_partial[k];
      for (std::size_t j = k; j < n; ++j) {
        const PeriodicPoint& c = landing.cycle[(j - k) % landing.cycle.size()];
        const int s = c.word.front();
        sum += std::log(std::abs(system.branch(s).df(c.x)));
        orbit.branches.push_back(s);
        orbit.positions.push_back(landing.cycle[(j - k + 1) % landing.cycle.size()].x);
        orbit.log_partial.push_back(sum);
      }
      orbit.positions[k] = p.x;
      return landing;
    }
  }
  return std::nullopt;
}

MembershipVerdict h_membership(const MarkovSystem& system, double x, std::size_t steps,
                               const std::vector<double>& alpha_grid,
                               std::size_t parabolic_search_period) {
  MembershipVerdict v;
  OrbitAnalysis orbit = orbit_analyze(system, x, steps);
  const std::size_t wanted = steps;
  // An escaped orbit is only extended when it had landed on a cycle before
  // leaving the pieces.
  const auto landing = snap_to_cycle(system, orbit, parabolic_search_period);
  if (landing) {
    if (orbit.steps() < wanted) {
      // Extend the snapped orbit over the full window.
      double sum = orbit.log_partial.back();
      const auto& cyc = landing->cycle;
      for (std::size_t j = orbit.steps(); j < wanted; ++j) {
        const PeriodicPoint& c = cyc[(j - landing->step) % cyc.size()];
        sum += std::log(std::abs(system.branch(c.word.front()).df(c.x)));
        orbit.branches.push_back(c.word.front());
        orbit.positions.push_back(cyc[(j - landing->step + 1) % cyc.size()].x);
        orbit.log_partial.push_back(sum);
      }
    }
    const PeriodicPoint& p = landing->cycle.front();
    if (p.cls == PointClass::Parabolic) {
      v.verdict = Membership::LikelyNotInH;
      v.parabolic_x = p.x;
      v.note = "orbit lands on a parabolic periodic orbit";
      return v;
    }
  }

  std::vector<double> grid = alpha_grid;
  std::sort(grid.begin(), grid.end(), std::greater<>());
  const std::size_t n = orbit.steps();
  for (double alpha : grid) {
    if (!(alpha > 0.0)) continue;
    const auto times = hyperbolic_times(orbit, alpha);
    if (times.empty()) continue;
    std::size_t gap = times.front();
    for (std::size_t k = 1; k < times.size(); ++k) gap = std::max(gap, times[k] - times[k - 1]);
    gap = std::max(gap, n - times.back());
    if (n > 0 && gap * 4 <= n) {
      v.verdict = Membership::InH;
      v.alpha = alpha;
      v.max_spacing = gap;
      v.note = landing ? "orbit lands on an expanding periodic orbit; hyperbolic times recur"
                       : "hyperbolic times recur throughout the observed window";
      return v;
    }
  }
  v.note = orbit.escaped ? "orbit escaped the pieces before the window ended"
                         : "no recurrent hyperbolic times and no parabolic landing observed";
  return v;
}

}  // namespace thermoset
