#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thermoset/cylinders.hpp"
#include "thermoset/maps.hpp"

namespace thermoset {

/// Forward orbit x, f(x), ..., f^N(x) with branch bookkeeping.
struct OrbitAnalysis {
  double start = 0.0;
  std::vector<double> positions;   // x_0 .. x_steps
  std::vector<int> branches;       // symbol of the piece holding x_k, k < steps
  std::vector<double> log_partial; // S_k = sum_{j<k} log|f'(x_j)|, k = 0..steps
  bool escaped = false;            // orbit left the pieces before N steps

  std::size_t steps() const noexcept { return log_partial.empty() ? 0 : log_partial.size() - 1; }
  /// (1/N) log|(f^N)'(x)|, the finite-window Lyapunov exponent.
  double lyapunov_estimate() const noexcept;
};

OrbitAnalysis orbit_analyze(const MarkovSystem& system, double x, std::size_t steps);

/// Times n <= N with |(f^k)'(f^{n-k}(x))| >= e^{k alpha} for every 1 <= k <= n.
std::vector<std::size_t> hyperbolic_times(const OrbitAnalysis& orbit, double alpha);

/// Empirical hyperbolic-instant constants at a detected time: the image
/// diameter of a small ball pushed forward n steps, and the derivative
/// distortion across that ball.
struct InstantDiagnostic {
  std::size_t time = 0;
  double radius = 0.0;
  double image_diameter = 0.0;
  double distortion = 0.0;
};

/// Diagnostics for each time in `times`; entries whose ball leaves the
/// pieces are skipped.
std::vector<InstantDiagnostic> instant_constants(const MarkovSystem& system,
                                                 const OrbitAnalysis& orbit,
                                                 const std::vector<std::size_t>& times,
                                                 double image_scale = 1e-3);

enum class PointClass { Expanding, Parabolic };

std::string to_string(PointClass c);

struct PeriodicPoint {
  Word word;               // primitive word; period m = word.size()
  double x = 0.0;
  double multiplier = 0.0; // |(f^m)'(x)|
  PointClass cls = PointClass::Expanding;
  double residual = 0.0;   // |f^m(x) - x| on re-evaluation

  std::size_t period() const noexcept { return word.size(); }
};

/// Fixed point of g_w for every admissible periodic word w of length n,
/// indexed by word. `log_multiplier` is log|(f^n)'(x)|.
struct PeriodicSolution {
  Word word;
  double x = 0.0;
  double log_multiplier = 0.0;
};

std::vector<PeriodicSolution> periodic_solutions(const MarkovSystem& system,
                                                 const CylinderTable& table, std::size_t n);

/// Every x with f^n(x) = x, reported once with its primitive word.
std::vector<PeriodicPoint> enumerate_periodic(const MarkovSystem& system, std::size_t n,
                                              double tol = 1e-8);

inline constexpr double kParabolicTolerance = 1e-8;

/// Parabolic when |multiplier - 1| <= tol. Throws ContractionDetected when
/// the multiplier is below 1 - tol.
PointClass classify_point(double multiplier, double tol = kParabolicTolerance);
PointClass classify_point(const PeriodicPoint& pt, double tol = kParabolicTolerance);

struct HyperbolicityReport {
  std::size_t max_period = 0;
  double min_rate = 0.0;  // min over points of multiplier^(1/period)
  std::size_t points_checked = 0;
  std::vector<PeriodicPoint> parabolic;
  std::string verdict;
};

/// Finite-depth evidence only: scans periodic points up to n_max.
HyperbolicityReport uniform_hyperbolicity_report(const MarkovSystem& system, std::size_t n_max);

/// Periodic orbit an analysed orbit was found to land on.
struct CycleLanding {
  std::size_t step = 0;              // first k with |x_k - p| <= 1e-10
  std::vector<PeriodicPoint> cycle;  // p, f(p), ..., in orbit order
};

/// Forward iteration of an expanding map amplifies rounding error, so an
/// orbit that reaches a periodic cycle numerically drifts off it again.
/// Finds the first orbit point within 1e-10 of a periodic point of period
/// <= max_period and replaces the rest of the orbit by the exact cycle.
std::optional<CycleLanding> snap_to_cycle(const MarkovSystem& system, OrbitAnalysis& orbit,
                                          std::size_t max_period);

enum class Membership { InH, LikelyNotInH, Inconclusive };

std::string to_string(Membership m);

struct MembershipVerdict {
  Membership verdict = Membership::Inconclusive;
  std::optional<double> alpha;        // largest grid exponent with recurrent times
  std::optional<double> parabolic_x;  // parabolic orbit point the orbit lands on
  std::size_t max_spacing = 0;
  std::string note;
};

/// Finite-window heuristic for membership in the set of points with
/// infinitely many hyperbolic instants.
MembershipVerdict h_membership(const MarkovSystem& system, double x, std::size_t steps,
                               const std::vector<double>& alpha_grid,
                               std::size_t parabolic_search_period = 2);

}  // namespace thermoset
