#include "thermoset/maps.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "thermoset/cylinders.hpp"
#include "thermoset/error.hpp"
#include "thermoset/roots.hpp"

namespace thermoset {

// ---------------------------------------------------------------------------
// SmoothFunction

SmoothFunction::SmoothFunction(Expr e, std::vector<LimitValue> limits)
    : f_(e), df_(differentiate(e)), d2f_(differentiate(df_)), limits_(std::move(limits)) {}

SmoothFunction SmoothFunction::parse(std::string_view src, std::vector<LimitValue> limits) {
  return SmoothFunction(parse_expr(src), std::move(limits));
}

template <class T, class Pick>
T SmoothFunction::with_limits(const Expr& e, T x, Pick pick) const {
  for (const auto& lim : limits_) {
    if (x == static_cast<T>(lim.at)) {
      if (auto v = pick(lim)) return static_cast<T>(*v);
    }
  }
  auto fallback = [&]() -> std::optional<T> {
    for (const auto& lim : limits_) {
      const T near = static_cast<T>(1e-8 * (1.0 + std::abs(lim.at)));
      if (std::abs(x - static_cast<T>(lim.at)) <= near) {
        if (auto v = pick(lim)) return static_cast<T>(*v);
      }
    }
    return std::nullopt;
  };
  try {
    T v = e.eval(x);
    if (std::isfinite(v)) return v;
    if (auto lim = fallback()) return *lim;
    throw DomainError("non-finite value of " + e.str());
  } catch (const DomainError&) {
    if (auto lim = fallback()) return *lim;
    throw;
  }
}

template <class T>
T SmoothFunction::value(T x) const {
  return with_limits(f_, x, [](const LimitValue& l) { return std::optional<double>(l.value); });
}

template <class T>
T SmoothFunction::derivative(T x) const {
  return with_limits(df_, x, [](const LimitValue& l) { return l.derivative; });
}

template <class T>
T SmoothFunction::second_derivative(T x) const {
  return with_limits(d2f_, x, [](const LimitValue& l) { return l.second_derivative; });
}

template double SmoothFunction::value<double>(double) const;
template long double SmoothFunction::value<long double>(long double) const;
template double SmoothFunction::derivative<double>(double) const;
template long double SmoothFunction::derivative<long double>(long double) const;
template double SmoothFunction::second_derivative<double>(double) const;

// ---------------------------------------------------------------------------
// Inversion

namespace {

template <class T>
T solve_inverse(const SmoothFunction& fn, const Interval& domain, T y, T slack) {
  const T a = static_cast<T>(domain.lo), b = static_cast<T>(domain.hi);
  const T fa = fn.value(a), fb = fn.value(b);
  if (fa == fb) throw NotMonotone("forward map takes equal values at both ends of its domain");
  const int orientation = fb > fa ? 1 : -1;
  const T lo_val = std::min(fa, fb), hi_val = std::max(fa, fb);
  if (y < lo_val - slack || y > hi_val + slack) {
    std::ostringstream os;
    os << "value " << static_cast<double>(y) << " outside image [" << static_cast<double>(lo_val)
       << ", " << static_cast<double>(hi_val) << "]";
    throw OutOfRange(os.str());
  }
  y = std::clamp(y, lo_val, hi_val);
  if (y == fa) return a;
  if (y == fb) return b;
  auto value = [&](T x) { return fn.value(x) - y; };
  auto slope = [&](T x) -> T {
    try {
      return fn.derivative(x);
    } catch (const DomainError&) {
      return T(0);
    }
  };
  auto root = bracketed_root<T>(value, slope, a, b, T(0), T(0));
  T d = slope(root.x);
  if (d * orientation < 0) throw NotMonotone("forward map is not monotone on its domain");
  return root.x;
}

}  // namespace

double invert_branch(const SmoothFunction& forward, const Interval& domain, double y, double tol) {
  return solve_inverse<double>(forward, domain, y, tol * std::max(1.0, std::abs(y)));
}

double invert_branch(const Expr& forward, const Interval& domain, double y, double tol) {
  return invert_branch(SmoothFunction(forward), domain, y, tol);
}

long double invert_branch(const SmoothFunction& forward, const Interval& domain, long double y) {
  return solve_inverse<long double>(forward, domain, y,
                                    1e-12L * std::max(1.0L, std::abs(y)));
}

// ---------------------------------------------------------------------------
// Branch

namespace {
constexpr double kRangeSlack = 1e-12;
}

Branch Branch::affine(double slope, double offset) {
  Branch b;
  b.kind_ = BranchKind::Affine;
  b.slope_ = slope;
  b.offset_ = offset;
  b.domain_ = {-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
  return b;
}

Branch Branch::contraction(SmoothFunction g, Interval domain) {
  Branch b;
  b.kind_ = BranchKind::Contraction;
  b.fn_ = std::move(g);
  b.domain_ = domain;
  return b;
}

Branch Branch::inverse_of_forward(SmoothFunction f, Interval forward_domain) {
  Branch b;
  b.kind_ = BranchKind::InverseOfForward;
  b.increment_ = increment_over_identity(f.expr());
  b.fn_ = std::move(f);
  b.domain_ = forward_domain;
  return b;
}

double Branch::g(double y) const {
  switch (kind_) {
    case BranchKind::Affine:
      return slope_ * y + offset_;
    case BranchKind::Contraction:
      return fn_->value(y);
    case BranchKind::InverseOfForward:
      return solve_inverse<double>(*fn_, domain_, y, kRangeSlack * std::max(1.0, std::abs(y)));
  }
  return 0.0;
}

double Branch::dg(double y) const {
  switch (kind_) {
    case BranchKind::Affine:
      return slope_;
    case BranchKind::Contraction:
      return fn_->derivative(y);
    case BranchKind::InverseOfForward:
      return 1.0 / fn_->derivative(g(y));
  }
  return 0.0;
}

double Branch::f(double x) const {
  switch (kind_) {
    case BranchKind::Affine:
      return (x - offset_) / slope_;
    case BranchKind::Contraction:
      return solve_inverse<double>(*fn_, domain_, x, kRangeSlack * std::max(1.0, std::abs(x)));
    case BranchKind::InverseOfForward:
      return fn_->value(x);
  }
  return 0.0;
}

double Branch::df(double x) const {
  switch (kind_) {
    case BranchKind::Affine:
      return 1.0 / slope_;
    case BranchKind::Contraction:
      return 1.0 / fn_->derivative(f(x));
    case BranchKind::InverseOfForward:
      return fn_->derivative(x);
  }
  return 0.0;
}

long double Branch::g(long double y) const {
  switch (kind_) {
    case BranchKind::Affine:
      return static_cast<long double>(slope_) * y + static_cast<long double>(offset_);
    case BranchKind::Contraction:
      return fn_->value(y);
    case BranchKind::InverseOfForward:
      return invert_branch(*fn_, domain_, y);
  }
  return 0.0L;
}

long double Branch::f(long double x) const {
  switch (kind_) {
    case BranchKind::Affine:
      return (x - static_cast<long double>(offset_)) / static_cast<long double>(slope_);
    case BranchKind::Contraction:
      return invert_branch(*fn_, domain_, x);
    case BranchKind::InverseOfForward:
      return fn_->value(x);
  }
  return 0.0L;
}

long double Branch::f_increment(long double x) const {
  if (increment_) {
    // Limits declared for f also hold for E = f - x at the same point.
    for (const auto& lim : fn_->limits()) {
      if (x == static_cast<long double>(lim.at)) return static_cast<long double>(lim.value - lim.at);
    }
    try {
      long double v = increment_->eval(x);
      if (std::isfinite(v)) return v;
    } catch (const DomainError&) {
    }
  }
  return f(x) - x;
}

std::pair<double, double> Branch::log_derivative_bounds(const Interval& domain,
                                                        std::size_t samples) const {
  if (kind_ == BranchKind::Affine || samples == 0) return {0.0, 0.0};
  double sup_g = 0.0, sup_f = 0.0;
  if (kind_ == BranchKind::Contraction) {
    const double h = domain.length() / static_cast<double>(samples);
    for (std::size_t k = 0; k < samples; ++k) {
      const double y = domain.lo + (static_cast<double>(k) + 0.5) * h;
      try {
        const double d1 = fn_->derivative(y), d2 = fn_->second_derivative(y);
        const double a = std::abs(d2 / d1), b = std::abs(d2) / (d1 * d1);
        if (std::isfinite(a)) sup_g = std::max(sup_g, a);
        if (std::isfinite(b)) sup_f = std::max(sup_f, b);
      } catch (const DomainError&) {
      }
    }
    return {sup_g, sup_f};
  }
  const Interval image = Interval::hull(g(domain.lo), g(domain.hi));
  const double h = image.length() / static_cast<double>(samples);
  for (std::size_t k = 0; k < samples; ++k) {
    const double x = image.lo + (static_cast<double>(k) + 0.5) * h;
    try {
      const double d1 = fn_->derivative(x), d2 = fn_->second_derivative(x);
      const double a = std::abs(d2) / (d1 * d1), b = std::abs(d2 / d1);
      if (std::isfinite(a)) sup_g = std::max(sup_g, a);
      if (std::isfinite(b)) sup_f = std::max(sup_f, b);
    } catch (const DomainError&) {
    }
  }
  return {sup_g, sup_f};
}

std::string Branch::describe() const {
  std::ostringstream os;
  os.precision(17);
  switch (kind_) {
    case BranchKind::Affine:
      os << "affine g(x) = " << slope_ << "*x + " << offset_;
      break;
    case BranchKind::Contraction:
      os << "contraction g(x) = " << fn_->expr().str();
      break;
    case BranchKind::InverseOfForward:
      os << "inverse of f(x) = " << fn_->expr().str() << " on [" << domain_.lo << ", "
         << domain_.hi << "]";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------
// System assembly

std::optional<int> MarkovSystem::locate(double x) const {
  const double tol = tolerance();
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    if (pieces_[i].contains(x, tol)) return static_cast<int>(i + 1);
  }
  return std::nullopt;
}

namespace {

std::string piece_name(std::size_t i) { return "I_" + std::to_string(i + 1); }

// Sign of g' sampled over the ambient interval; 0 when not strictly monotone.
int sampled_orientation(const Branch& b, const Interval& ambient, std::size_t samples) {
  int sign = 0;
  for (std::size_t k = 0; k <= samples; ++k) {
    const double y = ambient.lo + ambient.length() * static_cast<double>(k) / samples;
    const double d = b.dg(y);
    const int s = d > 0 ? 1 : (d < 0 ? -1 : 0);
    if (s == 0 || !std::isfinite(d)) return 0;
    if (sign == 0) sign = s;
    if (s != sign) return 0;
  }
  return sign;
}

}  // namespace

MarkovSystem make_system(const SystemDefinition& def) {
  std::vector<std::string> problems;
  MarkovSystem sys;
  sys.name_ = def.name;
  sys.ambient_ = def.ambient;
  const Interval& amb = def.ambient;
  if (!(amb.length() > 0)) problems.push_back("ambient interval must have positive length");
  if (def.branches.empty()) problems.push_back("at least one branch is required");
  if (!problems.empty()) throw ValidationError(problems);

  const double tol = 1e-12 * amb.length();
  const std::size_t p = def.branches.size();

  for (std::size_t i = 0; i < p; ++i) {
    const auto& bd = def.branches[i];
    sys.branches_.push_back(bd.branch);
    Interval piece{};
    try {
      piece = bd.interval ? *bd.interval
                          : Interval::hull(bd.branch.g(amb.lo), bd.branch.g(amb.hi));
    } catch (const Error& e) {
      problems.push_back("branch " + std::to_string(i + 1) +
                         " cannot be evaluated on the ambient interval: " + e.what());
    }
    sys.pieces_.push_back(piece);
    if (!(piece.length() > 0)) {
      problems.push_back(piece_name(i) + " is degenerate");
    } else if (!amb.contains(piece, tol)) {
      problems.push_back(piece_name(i) + " is not contained in the ambient interval");
    }
    try {
      if (sampled_orientation(bd.branch, amb, 200) == 0) {
        problems.push_back("branch " + std::to_string(i + 1) + " is not strictly monotone");
      }
    } catch (const Error& e) {
      problems.push_back("branch " + std::to_string(i + 1) + " derivative failed: " + e.what());
    }
  }
  if (!problems.empty()) throw ValidationError(problems);

  std::vector<std::size_t> order(p);
  for (std::size_t i = 0; i < p; ++i) order[i] = i;
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return sys.pieces_[a].lo < sys.pieces_[b].lo; });
  for (std::size_t k = 1; k < p; ++k) {
    const auto& a = sys.pieces_[order[k - 1]];
    const auto& b = sys.pieces_[order[k]];
    if (!(a.hi < b.lo - tol)) {
      problems.push_back(piece_name(order[k - 1]) + " and " + piece_name(order[k]) + " overlap");
    }
  }

  for (std::size_t i = 0; i < p; ++i) {
    const auto& piece = sys.pieces_[i];
    for (std::size_t j = 0; j < p; ++j) {
      const auto& src = sys.pieces_[j];
      Interval img{};
      try {
        img = Interval::hull(sys.branches_[i].g(src.lo), sys.branches_[i].g(src.hi));
      } catch (const Error& e) {
        problems.push_back("branch " + std::to_string(i + 1) + " undefined on " + piece_name(j) +
                           ": " + e.what());
        continue;
      }
      if (!piece.contains(img, tol)) {
        problems.push_back("range of branch " + std::to_string(i + 1) + " on " + piece_name(j) +
                           " escapes " + piece_name(i));
      }
    }
  }
  if (!problems.empty()) throw ValidationError(problems);

  try {
    auto spec = SubshiftSpec::create(static_cast<int>(p), def.forbidden);
    spec = repair_complete_invariance(spec);
    auto comps = transitive_components(build_follower_graph(spec));
    if (comps.empty()) throw EmptySubshift("subshift has no transitive component");
    if (def.component >= comps.size()) {
      problems.push_back("component " + std::to_string(def.component) + " requested but only " +
                         std::to_string(comps.size()) + " exist");
    } else {
      if (comps.size() > 1) {
        sys.warnings_.push_back("subshift splits into " + std::to_string(comps.size()) +
                                " transitive components; using component " +
                                std::to_string(def.component));
      }
      sys.subshift_ = comps[def.component];
      sys.graph_ = build_follower_graph(sys.subshift_);
    }
  } catch (const Error& e) {
    problems.push_back(std::string("subshift: ") + e.what());
  }
  if (!problems.empty()) throw ValidationError(problems);

  double theta_g = 0.0, theta_f = 0.0, theta_g2 = 0.0, theta_f2 = 0.0;
  for (const auto& b : sys.branches_) {
    auto [g1, f1] = b.log_derivative_bounds(amb, def.theta_samples);
    auto [g2, f2] = b.log_derivative_bounds(amb, 2 * def.theta_samples);
    theta_g = std::max(theta_g, g1);
    theta_f = std::max(theta_f, f1);
    theta_g2 = std::max(theta_g2, g2);
    theta_f2 = std::max(theta_f2, f2);
  }
  auto unstable = [](double coarse, double fine) {
    return std::abs(fine - coarse) > 0.05 * std::max(std::abs(coarse), 1e-12);
  };
  if (unstable(theta_g, theta_g2) || unstable(theta_f, theta_f2)) {
    sys.theta_unstable_ = true;
    sys.warnings_.push_back(
        "sampled Lipschitz constant of log|g'| changes by more than 5% when the grid is "
        "doubled; log|g'| may not be Lipschitz");
  }
  sys.theta_ = kThetaSafety * std::max(theta_g, theta_g2);
  sys.theta_forward_ = kThetaSafety * std::max(theta_f, theta_f2);
  sys.lambda_ = std::exp(4.0 * sys.theta_ * amb.length());

  try {
    CylinderTable table(sys, std::max<std::size_t>(def.probe_depth, 2));
    for (std::size_t n = 2; n <= table.max_depth(); ++n) {
      if (!(table.max_diameter(n) < table.max_diameter(n - 1))) {
        problems.push_back("cylinder diameters d_n do not decrease at depth " +
                           std::to_string(n));
        break;
      }
    }
    if (table.touching()) {
      sys.warnings_.push_back("cylinders of equal depth touch within 1e-12 |I|");
    }
  } catch (const Error& e) {
    problems.push_back(std::string("cylinder refinement failed: ") + e.what());
  }
  if (!problems.empty()) throw ValidationError(problems);
  return sys;
}

}  // namespace thermoset
