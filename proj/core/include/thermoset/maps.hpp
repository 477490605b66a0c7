#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thermoset/expr.hpp"
#include "thermoset/interval.hpp"
#include "thermoset/symbolic.hpp"

namespace thermoset {

/// Declared value (and optionally derivatives) of a function at a removable
/// singularity such as x = 0 for x^2 exp(-1/x).
struct LimitValue {
  double at = 0.0;
  double value = 0.0;
  std::optional<double> derivative;
  std::optional<double> second_derivative;
};

/// An expression together with its first two symbolic derivatives and any
/// declared limit values.
class SmoothFunction {
 public:
  explicit SmoothFunction(Expr e, std::vector<LimitValue> limits = {});
  static SmoothFunction parse(std::string_view src, std::vector<LimitValue> limits = {});

  template <class T>
  T value(T x) const;
  template <class T>
  T derivative(T x) const;
  template <class T>
  T second_derivative(T x) const;

  const Expr& expr() const noexcept { return f_; }
  const Expr& first() const noexcept { return df_; }
  const Expr& second() const noexcept { return d2f_; }
  const std::vector<LimitValue>& limits() const noexcept { return limits_; }

 private:
  template <class T, class Pick>
  T with_limits(const Expr& e, T x, Pick pick) const;

  Expr f_, df_, d2f_;
  std::vector<LimitValue> limits_;
};

/// Solves forward(x) = y for x in `domain`, where forward is strictly
/// monotone there. Throws NotMonotone or OutOfRange.
double invert_branch(const Expr& forward, const Interval& domain, double y, double tol);
double invert_branch(const SmoothFunction& forward, const Interval& domain, double y, double tol);
long double invert_branch(const SmoothFunction& forward, const Interval& domain, long double y);

enum class BranchKind { Affine, Contraction, InverseOfForward };

/// One branch g_i of the iterated function system together with its inverse
/// f = g_i^{-1}. The contracting direction is `g`, the expanding one `f`.
class Branch {
 public:
  /// g(y) = slope * y + offset.
  static Branch affine(double slope, double offset);
  /// g given directly, defined on `domain`.
  static Branch contraction(SmoothFunction g, Interval domain);
  /// g obtained by inverting an expanding map f that is monotone on
  /// `forward_domain`.
  static Branch inverse_of_forward(SmoothFunction f, Interval forward_domain);

  BranchKind kind() const noexcept { return kind_; }

  double g(double y) const;
  double dg(double y) const;
  double f(double x) const;
  double df(double x) const;

  long double g(long double y) const;
  long double f(long double x) const;
  /// f(x) - x, evaluated without cancellation when f has the form x + E(x).
  long double f_increment(long double x) const;

  /// Sampled suprema over the image of `domain` under g of |g''/g'| (first)
  /// and |f''/f'| (second), using `samples` cell midpoints.
  std::pair<double, double> log_derivative_bounds(const Interval& domain,
                                                  std::size_t samples) const;

  std::string describe() const;
  const std::optional<SmoothFunction>& function() const noexcept { return fn_; }
  const Interval& native_domain() const noexcept { return domain_; }

 private:
  Branch() = default;
  BranchKind kind_ = BranchKind::Affine;
  double slope_ = 1.0, offset_ = 0.0;
  std::optional<SmoothFunction> fn_;
  std::optional<Expr> increment_;
  Interval domain_;
};

/// Everything needed to assemble a Markov system.
struct SystemDefinition {
  struct BranchDef {
    Branch branch;
    /// I_i; when empty the image g_i(I) of the ambient interval is used.
    std::optional<Interval> interval;
  };

  std::string name;
  Interval ambient{0.0, 1.0};
  std::vector<BranchDef> branches;
  std::vector<Word> forbidden;
  std::size_t component = 0;
  std::size_t theta_samples = 10000;
  std::size_t probe_depth = 6;
};

/// Validated Markov system: pieces I_i, branches g_i, a completely invariant
/// transitive subshift and the distortion constants theta and lambda.
class MarkovSystem {
 public:
  const std::string& name() const noexcept { return name_; }
  const Interval& ambient() const noexcept { return ambient_; }
  std::size_t size() const noexcept { return branches_.size(); }
  /// Branch and piece for a 1-based symbol.
  const Branch& branch(int symbol) const { return branches_.at(static_cast<std::size_t>(symbol - 1)); }
  const Interval& piece(int symbol) const { return pieces_.at(static_cast<std::size_t>(symbol - 1)); }
  const std::vector<Interval>& pieces() const noexcept { return pieces_; }

  const SubshiftSpec& subshift() const noexcept { return subshift_; }
  const FollowerGraph& graph() const noexcept { return graph_; }

  /// Lipschitz constant of log|g_i'| (max over branches, with safety factor).
  double theta() const noexcept { return theta_; }
  /// Lipschitz constant of log|f'| on the union of the pieces.
  double theta_forward() const noexcept { return theta_forward_; }
  double lambda() const noexcept { return lambda_; }
  bool theta_unstable() const noexcept { return theta_unstable_; }

  const std::vector<std::string>& warnings() const noexcept { return warnings_; }

  /// 1-based symbol of the piece containing x, if any.
  std::optional<int> locate(double x) const;
  /// Absolute tolerance used for geometric comparisons, 1e-12 |I|.
  double tolerance() const noexcept { return 1e-12 * ambient_.length(); }

 private:
  friend MarkovSystem make_system(const SystemDefinition&);
  MarkovSystem() = default;

  std::string name_;
  Interval ambient_;
  std::vector<Branch> branches_;
  std::vector<Interval> pieces_;
  SubshiftSpec subshift_ = SubshiftSpec::create(1, {});
  FollowerGraph graph_;
  double theta_ = 0.0, theta_forward_ = 0.0, lambda_ = 1.0;
  bool theta_unstable_ = false;
  std::vector<std::string> warnings_;
};

/// Safety factor applied to sampled Lipschitz constants.
inline constexpr double kThetaSafety = 1.1;

/// Validates the definition and builds the system. Throws ValidationError
/// listing every violated invariant.
MarkovSystem make_system(const SystemDefinition& def);

}  // namespace thermoset
