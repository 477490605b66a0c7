#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "thermoset/maps.hpp"
#include "thermoset/pressure.hpp"

namespace thermoset {

/// Cylinder-weight approximation of a t-conformal measure at depth n:
/// weights[k] is the mass of the cylinder words[k]; the weights sum to 1.
/// At t away from the Bowen root the measure is conformal for the
/// potential shifted by the pressure, and `eigenvalue` = e^{P(phi_t)}.
struct CylinderMeasure {
  double t = 0.0;
  std::size_t n = 0;
  std::vector<Word> words;
  std::vector<double> weights;
  double eigenvalue = 0.0;
  double residual = 0.0;
  std::size_t iterations = 0;
};

CylinderMeasure conformal_measure(const MarkovSystem& system, double t, std::size_t n,
                                  std::size_t iters = kDefaultIterations,
                                  double tol = kDefaultEigenTolerance);

/// max over depth-n words u = i w of |nu(Delta_w) - |f'(x_u)|^t nu(Delta_u)|,
/// with nu(Delta_w) aggregated from the depth-n weights.
double conformality_residual(const MarkovSystem& system, const CylinderMeasure& measure);

/// Masses of the depth-(n-1) cylinders obtained by summing depth-n weights
/// over the last symbol, in lexicographic word order.
std::vector<std::pair<Word, double>> aggregate_weights(const CylinderMeasure& measure);

struct DimensionSample {
  double r = 0.0;
  double mass = 0.0;
  /// log nu(B(x, r)) / log r; +infinity when the ball carries no mass.
  double ratio = 0.0;
};

struct DimensionProbe {
  std::vector<DimensionSample> samples;
  /// Mass of the depth-n cylinder(s) containing x; 0 when x lies in a gap.
  double containing_mass = 0.0;
};

DimensionProbe pointwise_dimension_probe(const MarkovSystem& system,
                                         const CylinderMeasure& measure, double x,
                                         const std::vector<double>& radii);

struct TcEntry {
  double t = 0.0;
  double eigenvalue = 0.0;
  bool converged = false;
  std::size_t iterations = 0;
};

struct TcScan {
  std::size_t n = 0;
  double grid_tolerance = 0.0;
  std::vector<TcEntry> entries;
  /// Smallest grid t with |eigenvalue - 1| <= grid_tolerance.
  std::optional<double> proxy;
  /// Grid t whose eigenvalue is closest to 1 among converged entries.
  std::optional<double> nearest;
};

inline constexpr double kTcGridTolerance = 1e-3;

TcScan t_c_scan(const MarkovSystem& system, const std::vector<double>& t_grid, std::size_t n,
                double grid_tolerance = kTcGridTolerance);

}  // namespace thermoset
