#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "thermoset/maps.hpp"
#include "thermoset/orbits.hpp"

namespace thermoset {

enum class Side { Plus, Minus };

std::string to_string(Side s);
/// Accepts "+", "plus", "-", "minus".
Side parse_side(const std::string& s);

/// Boundary points y_k of the cylinders Delta_k(x) = Delta_{i...i} around a
/// parabolic fixed point x of branch i, on one side, and the lengths
/// |D_k| = |y_k - y_{k+1}| of the intervals between them. f(y_{k+1}) = y_k.
struct GapCascade {
  double x = 0.0;
  Side side = Side::Plus;
  int symbol = 1;
  std::size_t first = 1;             // index of points.front()
  std::vector<long double> points;   // y_first .. y_K
  std::vector<double> lengths;       // |D_first| .. |D_{K-1}|

  std::size_t last() const noexcept { return first + lengths.size(); }
  long double point(std::size_t k) const { return points.at(k - first); }
  double length(std::size_t k) const { return lengths.at(k - first); }
};

/// Cascade from the edge of the depth-`start_depth` cylinder containing x out
/// to index K. Each y_{k+1} = g_i(y_k) is computed by inverting f on
/// [x, y_k] in extended precision; |D_k| is evaluated as f(y_{k+1}) -
/// y_{k+1} to avoid cancellation. Throws PreconditionViolation unless pt is
/// a parabolic fixed point, InversionStall when the cascade stops moving.
GapCascade gap_cascade(const MarkovSystem& system, const PeriodicPoint& pt, Side side,
                       std::size_t K, std::size_t start_depth = 1);

struct PowerLawFit {
  double beta = 0.0;      // |D_k| ~ C k^{-beta}
  double r2 = 0.0;
  std::size_t k_min = 0, k_max = 0;
  double slope_first = 0.0;  // beta fitted on the first decade of the window
  double slope_last = 0.0;   // and on the last decade
  bool drifting = false;     // |slope_last - slope_first| > 0.02
};

/// Least squares of log|D_k| against log k on [k_min, k_max]; by default
/// the last two decades of the cascade. Throws PreconditionViolation when the
/// cascade is shorter than 100.
PowerLawFit fit_power_law(const GapCascade& c, std::size_t k_min = 0, std::size_t k_max = 0);

struct LogCorrectedFit {
  double min_ratio = 0.0;  // of rho_k = |D_k| k (log k)^2
  double max_ratio = 0.0;
  double band = 0.0;       // max / min
  double drift = 0.0;      // rho(k_max) / rho(k_min)
  std::size_t k_min = 0, k_max = 0;
  bool degenerate = false; // lengths constant over the window
};

/// Ratio statistics on [k_min, k_max]; by default the last decade.
LogCorrectedFit fit_log_corrected(const GapCascade& c, std::size_t k_min = 0,
                                  std::size_t k_max = 0);

enum class SeriesVerdict { Convergent, Divergent, Inconclusive };

std::string to_string(SeriesVerdict v);

enum class TailModel { None, PowerLaw, LogCorrected };

std::string to_string(TailModel m);

struct TailSeries {
  double t = 0.0;
  /// (k, sum_{j <= k} |D_j|^t) at every power of ten and at the end.
  std::vector<std::pair<std::size_t, double>> partial_sums;
  double total = 0.0;
  double last_decade_increment = 0.0;
  /// Verdict from the partial sums alone: last-decade increment below 1e-3
  /// of the total means Convergent; decade increments that never decrease
  /// mean Divergent.
  SeriesVerdict rule_verdict = SeriesVerdict::Inconclusive;
  /// Model fitted to the last two decades of lengths: either C k^{-beta}
  /// or C / (k (log k + c)^2), whichever has the smaller RMS log residual.
  TailModel model = TailModel::None;
  double model_rms = 0.0;
  double model_beta = 0.0;   // power law exponent
  double model_shift = 0.0;  // c of the log-corrected model
  SeriesVerdict model_verdict = SeriesVerdict::Inconclusive;
  /// model_verdict when a model fits, otherwise rule_verdict.
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
};

/// Requires at least 10^4 lengths.
TailSeries tail_series(const GapCascade& c, double t);

/// Outer Lebesgue estimate of the limit set: total length of the depth-n
/// cylinders.
double cover_measure(const MarkovSystem& system, std::size_t n);

struct LocalExponent {
  double b = 0.0;
  double r2 = 0.0;
};

/// Slope of log|f(y) - y| against log|y - x| for y approaching x from the
/// given side, over |y - x| in [h_min, h_max] (relative to |I|).
LocalExponent estimate_local_exponent(const MarkovSystem& system, const PeriodicPoint& pt,
                                      Side side, double h_min = 1e-4, double h_max = 1e-2);

}  // namespace thermoset
