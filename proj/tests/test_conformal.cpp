#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermoset/conformal.hpp"
#include "thermoset/pressure.hpp"

using namespace thermoset;

namespace {
const double kThirdsDim = oracle::kLog2 / oracle::kLog3;
}

TEST(Conformal, ThirdsAtBowenRootIsUniform) {
  const auto sys = oracle::builtin("cantor-thirds");
  const auto m = conformal_measure(sys, kThirdsDim, 6);
  ASSERT_EQ(m.weights.size(), 64u);
  for (double w : m.weights) EXPECT_NEAR(w, 1.0 / 64, 1e-12);
  EXPECT_NEAR(m.eigenvalue, 1.0, 1e-10);
  EXPECT_LE(conformality_residual(sys, m), 1e-10);
}

TEST(Conformal, EigenvalueIsExpOfPressure) {
  const auto sys = oracle::builtin("cantor-thirds");
  for (double t : {0.0, 0.3, 1.2}) {
    EXPECT_NEAR(conformal_measure(sys, t, 5).eigenvalue, std::exp(oracle::kLog2 - t * oracle::kLog3),
                1e-10);
  }
}

TEST(Conformal, GoldenMeanWeightsFollowPerronVector) {
  // Mass of words starting with 1 over mass starting with 2 equals the ratio of the Perron
  // vector entries times the branch weight: nu[1] / nu[2] = 1 / phi at the root.
  const auto sys = oracle::builtin("golden-mean-thirds");
  const double t = std::log(oracle::kGolden) / oracle::kLog3;
  const auto m = conformal_measure(sys, t, 8);
  double one = 0, two = 0;
  for (std::size_t k = 0; k < m.words.size(); ++k) (m.words[k][0] == 1 ? one : two) += m.weights[k];
  EXPECT_NEAR(one / two, 1 / oracle::kGolden, 1e-9);
  EXPECT_NEAR(one + two, 1.0, 1e-12);
}

TEST(Conformal, AggregatedMassesSumToOne) {
  const auto sys = oracle::builtin("nonlinear-perturbed");
  const auto m = conformal_measure(sys, 0.6, 7);
  const auto agg = aggregate_weights(m);
  double total = 0;
  for (const auto& [w, mass] : agg) {
    EXPECT_EQ(w.size(), 6u);
    total += mass;
  }
  EXPECT_NEAR(total, 1.0, 1e-12);
  EXPECT_LE(conformality_residual(sys, m), 1e-3);
}

TEST(Conformal, PointwiseDimensionAtCantorPoint) {
  const auto sys = oracle::builtin("cantor-thirds");
  const auto m = conformal_measure(sys, kThirdsDim, 10);
  // Balls B(0, 3^-k) meet exactly the cylinder 1^k.
  const auto probe = pointwise_dimension_probe(sys, m, 0.0, {1.0 / 9, 1.0 / 81, 1.0 / 729});
  for (const auto& s : probe.samples) EXPECT_NEAR(s.ratio, kThirdsDim, 1e-9);
  EXPECT_GT(probe.containing_mass, 0.0);
}

TEST(Conformal, ProbeInGapCarriesNoMass) {
  const auto sys = oracle::builtin("cantor-thirds");
  const auto m = conformal_measure(sys, kThirdsDim, 6);
  const auto probe = pointwise_dimension_probe(sys, m, 0.5, {0.01});
  EXPECT_EQ(probe.containing_mass, 0.0);
  EXPECT_TRUE(std::isinf(probe.samples[0].ratio));
}

TEST(TcScan, ProxyNearBowenRoot) {
  const auto sys = oracle::builtin("cantor-thirds");
  std::vector<double> grid;
  for (int i = 0; i <= 1000; ++i) grid.push_back(i / 1000.0);
  const auto scan = t_c_scan(sys, grid, 6);
  ASSERT_TRUE(scan.nearest.has_value());
  EXPECT_NEAR(*scan.nearest, kThirdsDim, 1e-3);
  ASSERT_TRUE(scan.proxy.has_value());
  EXPECT_NEAR(*scan.proxy, kThirdsDim, 1e-3);
}
