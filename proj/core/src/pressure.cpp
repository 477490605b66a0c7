#include "thermoset/pressure.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <tuple>

#include "thermoset/error.hpp"
#include "thermoset/orbits.hpp"
#include "thermoset/parallel.hpp"

namespace thermoset {

std::string to_string(PressureMethod m) {
  switch (m) {
    case PressureMethod::Cylinder:
      return "cylinder";
    case PressureMethod::Periodic:
      return "periodic";
    case PressureMethod::Operator:
      return "operator";
  }
  return "operator";
}

PressureMethod parse_pressure_method(const std::string& s) {
  if (s == "cylinder") return PressureMethod::Cylinder;
  if (s == "periodic") return PressureMethod::Periodic;
  if (s == "operator") return PressureMethod::Operator;
  throw PreconditionViolation("unknown pressure method '" + s + "'");
}

bool is_transitive(const FollowerGraph& graph) {
  const std::size_t n = graph.size();
  if (n == 0) return false;
  std::vector<std::vector<std::size_t>> rev(n);
  for (std::size_t u = 0; u < n; ++u) {
    for (const auto& e : graph.out[u]) rev[e.target].push_back(u);
  }
  auto reaches_all = [&](auto next) {
    std::vector<char> seen(n, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
      const std::size_t u = stack.back();
      stack.pop_back();
      next(u, [&](std::size_t v) {
        if (!seen[v]) {
          seen[v] = 1;
          ++count;
          stack.push_back(v);
        }
      });
    }
    return count == n;
  };
  return reaches_all([&](std::size_t u, auto visit) {
           for (const auto& e : graph.out[u]) visit(e.target);
         }) &&
         reaches_all([&](std::size_t u, auto visit) {
           for (std::size_t v : rev[u]) visit(v);
         });
}

// ---------------------------------------------------------------------------
// Transfer matrix

TransferMatrix::TransferMatrix(const MarkovSystem& system, const CylinderTable& table,
                               std::size_t n)
    : depth_(n) {
  const auto& spec = system.subshift();
  if (n == 0 || n > table.max_depth()) throw PreconditionViolation("depth not refined");
  if (n + 1 < spec.max_forbidden_length()) {
    throw PreconditionViolation("transfer matrix depth must be at least l(Q) - 1");
  }
  const auto& level = table.level(n);
  words_.reserve(level.size());
  for (const auto& c : level) words_.push_back(c.word);
  rows_.resize(level.size());

  const int p = spec.alphabet_size();
  parallel_for(level.size(), [&](std::size_t k) {
    const Word& u = level[k].word;
    Word us = u;
    us.push_back(0);
    Word v(u.begin() + 1, u.end());
    v.push_back(0);
    const Branch& g = system.branch(u.front());
    for (int s = 1; s <= p; ++s) {
      us.back() = s;
      v.back() = s;
      if (!spec.suffix_avoids(us)) continue;
      const auto j = table.find(v);
      if (!j) continue;
      rows_[k].push_back({*j, std::log(std::abs(g.dg(level[*j].point)))});
    }
  });
}

void TransferMatrix::apply(double t, const std::vector<double>& in,
                           std::vector<double>& out) const {
  out.assign(size(), 0.0);
  parallel_for(size(), [&](std::size_t u) {
    double acc = 0.0;
    for (const auto& e : rows_[u]) acc += std::exp(t * e.log_weight) * in[e.target];
    out[u] = acc;
  });
}

LeadingEigen leading_eigen(const TransferMatrix& m, double t, std::size_t iters, double tol,
                           const std::vector<double>* start) {
  const std::size_t n = m.size();
  if (n == 0) throw EmptySubshift("transfer matrix has no states");
  LeadingEigen res;
  std::vector<double> v = start && start->size() == n
                              ? *start
                              : std::vector<double>(n, 1.0 / static_cast<double>(n));
  std::vector<double> w;
  double prev_lambda = std::numeric_limits<double>::quiet_NaN();
  for (std::size_t it = 1; it <= iters; ++it) {
    m.apply(t, v, w);
    double mass = 0.0;
    for (double x : w) mass += x;
    if (!(mass > 0.0) || !std::isfinite(mass)) {
      throw NoConvergence("power iteration lost all mass");
    }
    double change = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      w[i] /= mass;
      change += std::abs(w[i] - v[i]);
    }
    change *= 0.5;
    v.swap(w);
    res.iterations = it;
    res.last_change = change;
    const bool steady = std::abs(mass - prev_lambda) <= tol * mass;
    prev_lambda = mass;
    if (change <= tol && steady) {
      res.vector = std::move(v);
      res.eigenvalue = mass;
      return res;
    }
  }
  throw NoConvergence("power iteration did not converge in " + std::to_string(iters) +
                      " iterations");
}

// ---------------------------------------------------------------------------
// Estimators

namespace {

struct LogSum {
  double log_total;
  double share;  // largest term / total
};

// log sum_i exp(s * x_i), summed in index order for reproducibility.
LogSum log_sum_exp(const std::vector<double>& xs, double s) {
  double mx = -std::numeric_limits<double>::infinity();
  for (double x : xs) mx = std::max(mx, s * x);
  double acc = 0.0;
  for (double x : xs) acc += std::exp(s * x - mx);
  return {mx + std::log(acc), 1.0 / acc};
}

}  // namespace

PressureEvaluator::PressureEvaluator(const MarkovSystem& system, std::size_t n,
                                     PressureMethod method, std::size_t iters, double tol)
    : n_(n), method_(method), iters_(iters), tol_(tol) {
  if (n == 0) throw PreconditionViolation("pressure depth must be >= 1");
  const CylinderTable table(system, n);
  pad_ = distortion_pad(system, table, n);
  switch (method) {
    case PressureMethod::Cylinder:
      for (const auto& c : table.level(n)) terms_.push_back(c.log_deriv);
      break;
    case PressureMethod::Periodic: {
      if (!is_transitive(system.graph())) {
        throw NoTransitivity("periodic pressure needs a transitive subshift");
      }
      for (const auto& s : periodic_solutions(system, table, n)) {
        terms_.push_back(-s.log_multiplier);
      }
      if (terms_.empty()) throw EmptySubshift("no periodic words of length " + std::to_string(n));
      break;
    }
    case PressureMethod::Operator:
      matrix_ = std::make_shared<TransferMatrix>(system, table, n);
      break;
  }
}

PressureEstimate PressureEvaluator::operator()(double t) const {
  PressureEstimate est;
  est.t = t;
  est.n = n_;
  est.method = method_;
  const double nd = static_cast<double>(n_);
  if (method_ == PressureMethod::Operator) {
    const auto eig = leading_eigen(*matrix_, t, iters_, tol_);
    est.lower = est.upper = std::log(eig.eigenvalue);
    est.iterations = eig.iterations;
    return est;
  }
  // Each term is exp(t * log|(g_w)'|) = |(f^n)'(x_w)|^{-t}.
  const LogSum ls = log_sum_exp(terms_, t);
  const double centre = ls.log_total / nd;
  est.dominant_share = ls.share;
  if (method_ == PressureMethod::Cylinder) {
    // pad^{+-t} inside the sum moves the log by +-t log(pad) / n = +-t rho_n.
    est.lower = centre - t * pad_.rho;
    est.upper = centre + t * pad_.rho;
  } else {
    est.lower = est.upper = centre;
  }
  return est;
}

PressureEstimate pressure_cylinder(const MarkovSystem& system, double t, std::size_t n) {
  return PressureEvaluator(system, n, PressureMethod::Cylinder)(t);
}

PressureEstimate pressure_periodic(const MarkovSystem& system, double t, std::size_t n) {
  return PressureEvaluator(system, n, PressureMethod::Periodic)(t);
}

PressureEstimate pressure_operator(const MarkovSystem& system, double t, std::size_t n,
                                   std::size_t iters, double tol) {
  return PressureEvaluator(system, n, PressureMethod::Operator, iters, tol)(t);
}

// ---------------------------------------------------------------------------
// Bowen root

namespace {

constexpr double kTMax = 4.0;

// Largest bracket [a, b] of width <= tol with value(a) > 0 >= value(b), given
// value(lo) > 0 >= value(hi) and value non-increasing.
std::pair<double, double> bisect_sign(const std::function<double(double)>& value, double lo,
                                      double hi, double tol) {
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    if (!(mid > lo && mid < hi)) break;
    if (value(mid) > 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return {lo, hi};
}

}  // namespace

BowenResult bowen_root(const PressureEvaluator& eval, double tol) {
  if (!(tol > 0.0)) throw PreconditionViolation("bowen_root tolerance must be positive");
  BowenResult res;
  res.n = eval.depth();
  res.method = eval.method();

  const PressureEstimate at0 = eval(0.0);
  if (at0.upper <= 0.0) return res;  // t0 = 0

  double t_max = 1.0;
  while (eval(t_max).upper > 0.0) {
    if (t_max >= kTMax) {
      throw NoSignChange(
          "pressure estimate stays positive up to t = 4; parabolic systems may keep a "
          "non-negative finite-depth pressure for every t");
    }
    t_max *= 2.0;
  }

  const auto upper = [&](double t) { return eval(t).upper; };
  const auto [ua, ub] = bisect_sign(upper, 0.0, t_max, tol);
  if (eval.method() != PressureMethod::Cylinder) {
    res.t_lo = ua;
    res.t_hi = ub;
    res.t0 = 0.5 * (ua + ub);
    return res;
  }
  // The lower estimate crosses zero no later than the upper one.
  const auto lower = [&](double t) { return eval(t).lower; };
  double la = 0.0, lb = ub;
  if (at0.lower > 0.0) std::tie(la, lb) = bisect_sign(lower, 0.0, ub, tol);
  res.t_lo = la;
  res.t_hi = ub;
  res.t0 = 0.25 * (la + lb + ua + ub);
  return res;
}

BowenResult bowen_root(const MarkovSystem& system, std::size_t n, double tol,
                       PressureMethod method) {
  return bowen_root(PressureEvaluator(system, n, method), tol);
}

}  // namespace thermoset
