#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermoset/error.hpp"
#include "thermoset/gaps.hpp"

using namespace thermoset;

namespace {

PeriodicPoint fixed_point(const MarkovSystem& sys, std::size_t index) {
  return enumerate_periodic(sys, 1).at(index);
}

// A cascade with prescribed lengths, for checking the series diagnostics
// against p-series whose convergence is known.
GapCascade synthetic(std::size_t K, double (*len)(double)) {
  GapCascade c;
  c.first = 1;
  for (std::size_t k = 1; k < K; ++k) c.lengths.push_back(len(static_cast<double>(k)));
  c.points.resize(K);
  return c;
}

}  // namespace

TEST(Cascade, MatchesClosedFormInverse) {
  // f(x) = x + x^2 has g(y) = (sqrt(1 + 4y) - 1) / 2 = 2y / (1 + sqrt(1 + 4y)).
  const auto sys = oracle::builtin("parabolic-b2");
  const auto c = gap_cascade(sys, fixed_point(sys, 0), Side::Plus, 2000);
  long double y = c.point(1);
  for (std::size_t k = 1; k < 2000; ++k) {
    const long double next = 2 * y / (1 + std::sqrt(1 + 4 * y));
    EXPECT_NEAR(static_cast<double>((c.point(k + 1) - next) / next), 0.0, 1e-15) << k;
    EXPECT_NEAR(c.length(k) / static_cast<double>(y - next), 1.0, 1e-9) << k;
    y = next;
  }
}

TEST(Cascade, PointsDecreaseToFixedPoint) {
  const auto sys = oracle::builtin("paper-example");
  const auto c = gap_cascade(sys, fixed_point(sys, 0), Side::Plus, 5000);
  for (std::size_t k = c.first; k < c.last(); ++k) {
    EXPECT_LT(c.point(k + 1), c.point(k));
    EXPECT_GT(c.length(k), 0.0);
  }
}

TEST(Cascade, Preconditions) {
  const auto sys = oracle::builtin("paper-example");
  EXPECT_THROW(gap_cascade(sys, fixed_point(sys, 1), Side::Plus, 10), PreconditionViolation);
  const auto period_two = enumerate_periodic(oracle::builtin("cantor-thirds"), 2);
  EXPECT_THROW(gap_cascade(oracle::builtin("cantor-thirds"), period_two.back(), Side::Plus, 10),
               PreconditionViolation);
}

TEST(PowerLaw, RecoversBetaForXPlusXb) {
  for (auto [name, beta] : {std::pair{"parabolic-b2", 2.0}, std::pair{"parabolic-b3", 1.5},
                            std::pair{"parabolic-b4", 4.0 / 3}}) {
    const auto sys = oracle::builtin(name);
    const auto c = gap_cascade(sys, fixed_point(sys, 0), Side::Plus, 20000);
    const auto fit = fit_power_law(c, 1000, 19999);
    EXPECT_NEAR(fit.beta, beta, 0.01) << name;
    EXPECT_GT(fit.r2, 0.999);
  }
}

TEST(PowerLaw, ExactOnSyntheticData) {
  const auto c = synthetic(2000, [](double k) { return 3.0 / (k * k * std::sqrt(k)); });
  const auto fit = fit_power_law(c);
  EXPECT_NEAR(fit.beta, 2.5, 1e-9);
  EXPECT_FALSE(fit.drifting);
  EXPECT_THROW(fit_power_law(synthetic(50, [](double k) { return 1 / k; })), PreconditionViolation);
}

TEST(LogCorrected, FlatBandOnExactModel) {
  const auto c = synthetic(20000, [](double k) { return 1 / (k * std::log(k) * std::log(k)); });
  const auto fit = fit_log_corrected(c, 100, 19999);
  EXPECT_NEAR(fit.band, 1.0, 1e-9);
  EXPECT_NEAR(fit.min_ratio, 1.0, 1e-9);
}

TEST(TailSeries, PSeriesVerdicts) {
  const auto square = synthetic(100000, [](double k) { return 1 / (k * k); });
  EXPECT_EQ(tail_series(square, 1.0).verdict, SeriesVerdict::Convergent);
  EXPECT_EQ(tail_series(square, 0.4).verdict, SeriesVerdict::Divergent);
  const auto slow = synthetic(100000, [](double k) { return std::pow(k, -0.9); });
  EXPECT_EQ(tail_series(slow, 1.0).verdict, SeriesVerdict::Divergent);
  // 1/k sits on the critical exponent; a pure power law cannot decide it.
  const auto harmonic = synthetic(100000, [](double k) { return 1 / k; });
  EXPECT_EQ(tail_series(harmonic, 1.0).verdict, SeriesVerdict::Inconclusive);
  const auto logsq = synthetic(100000, [](double k) { return 1 / (k * std::pow(std::log(k + 1), 2)); });
  EXPECT_EQ(tail_series(logsq, 1.0).verdict, SeriesVerdict::Convergent);
  EXPECT_EQ(tail_series(logsq, 0.9).verdict, SeriesVerdict::Divergent);
}

TEST(TailSeries, PartialSumsAreMonotone) {
  const auto c = synthetic(20000, [](double k) { return 1 / (k * k); });
  const auto ts = tail_series(c, 1.0);
  for (std::size_t i = 1; i < ts.partial_sums.size(); ++i) {
    EXPECT_GT(ts.partial_sums[i].first, ts.partial_sums[i - 1].first);
    EXPECT_GE(ts.partial_sums[i].second, ts.partial_sums[i - 1].second);
  }
  EXPECT_NEAR(ts.total, M_PI * M_PI / 6 - 1.0 / 20000, 1e-6);
}

TEST(LocalExponent, MatchesPower) {
  for (auto [name, b] : {std::pair{"parabolic-b2", 2.0}, std::pair{"parabolic-b3", 3.0}}) {
    const auto sys = oracle::builtin(name);
    const auto e = estimate_local_exponent(sys, fixed_point(sys, 0), Side::Plus);
    EXPECT_NEAR(e.b, b, 1e-3) << name;
  }
}

TEST(Sides, ParseAndPrint) {
  EXPECT_EQ(parse_side("+"), Side::Plus);
  EXPECT_EQ(parse_side("minus"), Side::Minus);
  EXPECT_EQ(to_string(Side::Minus), "-");
  EXPECT_THROW(parse_side("left"), Error);
}
