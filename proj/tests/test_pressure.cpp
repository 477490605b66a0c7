#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "thermoset/error.hpp"
#include "thermoset/parallel.hpp"
#include "thermoset/pressure.hpp"

using namespace thermoset;

namespace {

// Moran: P(t) = log 2 - t log 3 for the middle-thirds set.
double moran(double t) { return oracle::kLog2 - t * oracle::kLog3; }

// Perron root of the golden-mean adjacency matrix with weight 3^-t.
double golden_pressure(double t) { return std::log(oracle::kGolden) - t * oracle::kLog3; }

}  // namespace

TEST(Pressure, ThirdsAllMethodsAreMoran) {
  const auto sys = oracle::builtin("cantor-thirds");
  for (double t : {0.0, 0.3, 0.6309297535714574, 1.0}) {
    for (std::size_t n : {1u, 4u, 7u}) {
      const auto c = pressure_cylinder(sys, t, n);
      EXPECT_NEAR(c.lower, moran(t), 1e-12);
      EXPECT_NEAR(c.upper, moran(t), 1e-12);
      EXPECT_NEAR(pressure_periodic(sys, t, n).mid(), moran(t), 1e-12);
      EXPECT_NEAR(pressure_operator(sys, t, n).mid(), moran(t), 1e-10);
    }
  }
}

TEST(Pressure, GoldenMeanCountingAtZero) {
  const auto sys = oracle::builtin("golden-mean-thirds");
  for (std::size_t n = 2; n <= 12; n += 2) {
    const double dn = static_cast<double>(n);
    EXPECT_NEAR(pressure_cylinder(sys, 0, n).mid(), std::log(oracle::golden_words(n)) / dn, 1e-12);
    EXPECT_NEAR(pressure_periodic(sys, 0, n).mid(), std::log(oracle::golden_trace(n)) / dn, 1e-12);
  }
  EXPECT_NEAR(pressure_periodic(sys, 0, 20).mid(), std::log(oracle::kGolden), 1e-6);
}

TEST(Pressure, GoldenMeanOperatorIsPerron) {
  const auto sys = oracle::builtin("golden-mean-thirds");
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    EXPECT_NEAR(pressure_operator(sys, t, 6).mid(), golden_pressure(t), 1e-10);
  }
}

TEST(Pressure, SandwichHolds) {
  std::mt19937 rng(23);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  const auto sys = oracle::builtin("nonlinear-perturbed");
  for (int i = 0; i < 20; ++i) {
    const double t = u(rng);
    const std::size_t n = 2 + rng() % 7;
    const auto e = pressure_cylinder(sys, t, n);
    EXPECT_LE(e.lower, e.upper);
    const auto pad = distortion_pad(sys, n);
    EXPECT_LE(e.upper - e.lower, 2 * t * pad.rho + 1e-12);
  }
}

TEST(Pressure, DecreasingInT) {
  const auto sys = oracle::builtin("nonlinear-perturbed");
  PressureEvaluator ev(sys, 7, PressureMethod::Operator);
  double prev = ev(0.0).mid();
  for (double t = 0.1; t <= 2.0; t += 0.1) {
    const double cur = ev(t).mid();
    EXPECT_LT(cur, prev);
    prev = cur;
  }
}

TEST(Pressure, PeriodicNeedsTransitivity) {
  const auto sys = oracle::builtin("cantor-thirds");
  FollowerGraph g = build_follower_graph(SubshiftSpec::create(2, {{1, 2}}));
  EXPECT_FALSE(is_transitive(g));
  EXPECT_TRUE(is_transitive(sys.graph()));
}

TEST(Pressure, IndependentOfThreadCount) {
  const auto sys = oracle::builtin("nonlinear-perturbed");
  const std::size_t saved = thread_count();
  set_thread_count(1);
  const auto a = pressure_operator(sys, 0.4, 8);
  const auto b = pressure_periodic(sys, 0.4, 8);
  set_thread_count(3);
  const auto c = pressure_operator(sys, 0.4, 8);
  const auto d = pressure_periodic(sys, 0.4, 8);
  set_thread_count(saved);
  EXPECT_EQ(a.upper, c.upper);
  EXPECT_EQ(b.upper, d.upper);
}

TEST(Bowen, ThirdsRootIsMoran) {
  const auto sys = oracle::builtin("cantor-thirds");
  for (auto m : {PressureMethod::Cylinder, PressureMethod::Periodic, PressureMethod::Operator}) {
    const auto r = bowen_root(sys, 6, 1e-10, m);
    EXPECT_NEAR(r.t0, oracle::kLog2 / oracle::kLog3, 1e-8) << to_string(m);
    EXPECT_LE(r.t_lo, r.t0);
    EXPECT_GE(r.t_hi, r.t0);
  }
}

TEST(Bowen, BracketInvariants) {
  const auto sys = oracle::builtin("nonlinear-perturbed");
  const double tol = 1e-9;
  PressureEvaluator ev(sys, 8, PressureMethod::Cylinder);
  const auto r = bowen_root(ev, tol);
  EXPECT_LE(ev(r.t_hi).upper, tol);
  EXPECT_GE(ev(r.t_lo).lower, -tol);
  EXPECT_LE(r.t_lo, r.t_hi);
}

TEST(Bowen, GoldenMeanOperator) {
  const auto sys = oracle::builtin("golden-mean-thirds");
  const auto r = bowen_root(sys, 10, 1e-11, PressureMethod::Operator);
  EXPECT_NEAR(r.t0, std::log(oracle::kGolden) / oracle::kLog3, 1e-8);
}

TEST(Bowen, ParabolicPeriodicSumHasNoZero) {
  // The parabolic fixed point contributes |(f^n)'|^-t = 1 for every t, so
  // the periodic estimate never drops below 0.
  EXPECT_THROW(bowen_root(oracle::builtin("paper-example"), 6, 1e-9, PressureMethod::Periodic),
               NoSignChange);
}

TEST(Methods, ParseAndPrint) {
  for (auto m : {PressureMethod::Cylinder, PressureMethod::Periodic, PressureMethod::Operator}) {
    EXPECT_EQ(parse_pressure_method(to_string(m)), m);
  }
  EXPECT_THROW(parse_pressure_method("bogus"), Error);
}
