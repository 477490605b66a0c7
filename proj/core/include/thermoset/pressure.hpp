#pragma once

#include <cstddef>
#include <memory>
#include <string>
#include <vector>

#include "thermoset/cylinders.hpp"
#include "thermoset/maps.hpp"

namespace thermoset {

enum class PressureMethod { Cylinder, Periodic, Operator };

std::string to_string(PressureMethod m);
/// Accepts "cylinder", "periodic", "operator". Throws PreconditionViolation.
PressureMethod parse_pressure_method(const std::string& s);

/// Finite-depth estimate of P(-t log|f'|) with a certified sandwich for the
/// cylinder method (lower == upper for the other two).
struct PressureEstimate {
  double t = 0.0;
  std::size_t n = 0;
  double lower = 0.0;
  double upper = 0.0;
  PressureMethod method = PressureMethod::Cylinder;
  /// Largest single term of the underlying sum as a fraction of the total;
  /// 0 for the operator method.
  double dominant_share = 0.0;
  std::size_t iterations = 0;

  double mid() const noexcept { return 0.5 * (lower + upper); }
};

/// Cylinder transition matrix on depth-n words. Row u holds one entry per
/// symbol s with u.s admissible, pointing at v = (u_2 ... u_n s) with
/// log-weight log|g_{u_1}'(x_v)|; the matrix at exponent t has entries
/// exp(t * log-weight).
class TransferMatrix {
 public:
  struct Entry {
    std::size_t target;
    double log_weight;
  };

  TransferMatrix(const MarkovSystem& system, const CylinderTable& table, std::size_t n);

  std::size_t depth() const noexcept { return depth_; }
  std::size_t size() const noexcept { return words_.size(); }
  const std::vector<Word>& words() const noexcept { return words_; }
  const std::vector<std::vector<Entry>>& rows() const noexcept { return rows_; }

  /// out[u] = sum_v A_t[u][v] in[v].
  void apply(double t, const std::vector<double>& in, std::vector<double>& out) const;

 private:
  std::size_t depth_;
  std::vector<Word> words_;
  std::vector<std::vector<Entry>> rows_;
};

/// Result of power iteration: the L1-normalized leading eigenvector and its
/// eigenvalue.
struct LeadingEigen {
  std::vector<double> vector;
  double eigenvalue = 0.0;
  std::size_t iterations = 0;
  double last_change = 0.0;  // total variation between the last two iterates
};

/// Power iteration from the uniform vector. Converged when successive
/// iterates differ by <= tol in total variation and successive eigenvalue
/// estimates by <= tol * eigenvalue. Throws NoConvergence.
LeadingEigen leading_eigen(const TransferMatrix& m, double t, std::size_t iters, double tol,
                           const std::vector<double>* start = nullptr);

inline constexpr std::size_t kDefaultIterations = 20000;
inline constexpr double kDefaultEigenTolerance = 1e-13;

/// Holds the depth-n data of one method so that many exponents can be
/// evaluated without re-refining.
class PressureEvaluator {
 public:
  PressureEvaluator(const MarkovSystem& system, std::size_t n, PressureMethod method,
                    std::size_t iters = kDefaultIterations, double tol = kDefaultEigenTolerance);

  PressureEstimate operator()(double t) const;

  std::size_t depth() const noexcept { return n_; }
  PressureMethod method() const noexcept { return method_; }
  const DistortionBound& distortion() const noexcept { return pad_; }

 private:
  std::size_t n_;
  PressureMethod method_;
  std::size_t iters_;
  double tol_;
  DistortionBound pad_;
  std::vector<double> terms_;  // log-derivative data for cylinder / periodic sums
  std::shared_ptr<const TransferMatrix> matrix_;
};

PressureEstimate pressure_cylinder(const MarkovSystem& system, double t, std::size_t n);
PressureEstimate pressure_periodic(const MarkovSystem& system, double t, std::size_t n);
PressureEstimate pressure_operator(const MarkovSystem& system, double t, std::size_t n,
                                   std::size_t iters = kDefaultIterations,
                                   double tol = kDefaultEigenTolerance);

struct BowenResult {
  double t0 = 0.0;
  std::size_t n = 0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  PressureMethod method = PressureMethod::Operator;
};

/// Zero of t -> P(phi_t) by bisection on the lower and the upper estimate.
/// Throws NoSignChange when the upper estimate stays positive up to t = 4.
BowenResult bowen_root(const MarkovSystem& system, std::size_t n, double tol,
                       PressureMethod method);
BowenResult bowen_root(const PressureEvaluator& evaluator, double tol);

/// True when the follower graph is strongly connected.
bool is_transitive(const FollowerGraph& graph);

}  // namespace thermoset
