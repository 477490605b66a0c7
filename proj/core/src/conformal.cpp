#include "thermoset/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "thermoset/cylinders.hpp"
#include "thermoset/error.hpp"

namespace thermoset {

CylinderMeasure conformal_measure(const MarkovSystem& system, double t, std::size_t n,
                                  std::size_t iters, double tol) {
  if (n == 0) throw PreconditionViolation("measure depth must be >= 1");
  const CylinderTable table(system, n);
  const TransferMatrix m(system, table, n);
  const LeadingEigen eig = leading_eigen(m, t, iters, tol);

  CylinderMeasure out;
  out.t = t;
  out.n = n;
  out.words = m.words();
  out.weights = eig.vector;
  out.eigenvalue = eig.eigenvalue;
  out.iterations = eig.iterations;
  out.residual = conformality_residual(system, out);
  return out;
}

std::vector<std::pair<Word, double>> aggregate_weights(const CylinderMeasure& measure) {
  std::vector<std::pair<Word, double>> out;
  for (std::size_t k = 0; k < measure.words.size(); ++k) {
    const Word& w = measure.words[k];
    Word prefix(w.begin(), w.end() - 1);
    if (out.empty() || out.back().first != prefix) {
      out.emplace_back(std::move(prefix), 0.0);
    }
    out.back().second += measure.weights[k];
  }
  return out;
}

double conformality_residual(const MarkovSystem& system, const CylinderMeasure& measure) {
  const std::size_t n = measure.n;
  if (n == 0 || measure.words.size() != measure.weights.size()) {
    throw PreconditionViolation("malformed cylinder measure");
  }
  const CylinderTable table(system, n);
  const auto coarse = aggregate_weights(measure);
  auto coarse_mass = [&](const Word& w) {
    if (w.empty()) return 1.0;
    auto it = std::lower_bound(coarse.begin(), coarse.end(), w,
                               [](const auto& a, const Word& x) { return a.first < x; });
    return it != coarse.end() && it->first == w ? it->second : 0.0;
  };

  double worst = 0.0;
  for (std::size_t k = 0; k < measure.words.size(); ++k) {
    const Word& u = measure.words[k];
    const Word tail(u.begin() + 1, u.end());
    const auto idx = table.find(u);
    if (!idx) throw PreconditionViolation("measure word " + to_string(u) + " is not admissible");
    const Cylinder& cu = table.level(n)[*idx];
    // |f'(x_u)| = 1 / |g_{u_1}'(x_tail)|
    double log_fprime = -cu.log_deriv;
    if (!tail.empty()) log_fprime += table.level(n - 1)[*table.find(tail)].log_deriv;
    const double image = coarse_mass(tail);
    const double pulled = std::exp(measure.t * log_fprime) * measure.weights[k];
    worst = std::max(worst, std::abs(image - pulled));
  }
  return worst;
}

DimensionProbe pointwise_dimension_probe(const MarkovSystem& system,
                                         const CylinderMeasure& measure, double x,
                                         const std::vector<double>& radii) {
  const CylinderTable table(system, measure.n);
  const auto& level = table.level(measure.n);
  std::vector<double> mass_of(level.size(), 0.0);
  for (std::size_t k = 0; k < measure.words.size(); ++k) {
    if (const auto idx = table.find(measure.words[k])) mass_of[*idx] = measure.weights[k];
  }

  DimensionProbe probe;
  const double tol = system.tolerance();
  for (std::size_t k = 0; k < level.size(); ++k) {
    if (level[k].interval().contains(x, tol)) probe.containing_mass += mass_of[k];
  }
  for (double r : radii) {
    DimensionSample s;
    s.r = r;
    for (std::size_t k = 0; k < level.size(); ++k) {
      if (level[k].left < x + r && level[k].right > x - r) s.mass += mass_of[k];
    }
    s.ratio = s.mass > 0.0 ? std::log(s.mass) / std::log(r)
                           : std::numeric_limits<double>::infinity();
    probe.samples.push_back(s);
  }
  return probe;
}

TcScan t_c_scan(const MarkovSystem& system, const std::vector<double>& t_grid, std::size_t n,
                double grid_tolerance) {
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw PreconditionViolation("t grid must be sorted");
  }
  TcScan scan;
  scan.n = n;
  scan.grid_tolerance = grid_tolerance;
  const CylinderTable table(system, n);
  const TransferMatrix m(system, table, n);
  double best = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    TcEntry e;
    e.t = t;
    try {
      const auto eig = leading_eigen(m, t, kDefaultIterations, kDefaultEigenTolerance);
      e.eigenvalue = eig.eigenvalue;
      e.iterations = eig.iterations;
      e.converged = true;
    } catch (const NoConvergence&) {
      e.eigenvalue = std::numeric_limits<double>::quiet_NaN();
    }
    if (e.converged) {
      const double dist = std::abs(e.eigenvalue - 1.0);
      if (!scan.proxy && dist <= grid_tolerance) scan.proxy = t;
      if (dist < best) {
        best = dist;
        scan.nearest = t;
      }
    }
    scan.entries.push_back(e);
  }
  return scan;
}

}  // namespace thermoset
