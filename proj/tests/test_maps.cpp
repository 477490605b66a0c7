#include <gtest/gtest.h>

#include "oracles.hpp"
#include "thermoset/error.hpp"
#include "thermoset/maps.hpp"

using namespace thermoset;

namespace {

SystemDefinition thirds() {
  SystemDefinition d;
  d.name = "thirds";
  d.branches.push_back({Branch::affine(1.0 / 3, 0.0), std::nullopt});
  d.branches.push_back({Branch::affine(1.0 / 3, 2.0 / 3), std::nullopt});
  return d;
}

}  // namespace

TEST(SmoothFunction, DeclaredLimitValues) {
  const auto f = SmoothFunction::parse("x + x^2*exp(-1/x)", {{0.0, 0.0, 1.0, 0.0}});
  EXPECT_EQ(f.value(0.0), 0.0);
  EXPECT_EQ(f.derivative(0.0), 1.0);
  EXPECT_EQ(f.second_derivative(0.0), 0.0);
  EXPECT_NEAR(f.value(0.5), 0.5 + 0.25 * std::exp(-2.0), 1e-16);
}

TEST(SmoothFunction, SingularityWithoutLimitThrows) {
  const auto f = SmoothFunction::parse("x + x^2*exp(-1/x)");
  EXPECT_THROW(f.value(0.0), DomainError);
}

TEST(Invert, RoundTrip) {
  const auto f = SmoothFunction::parse("x + x^3");
  for (double x : {0.0, 0.1, 0.37, 0.99}) {
    EXPECT_NEAR(invert_branch(f, {0.0, 1.0}, f.value(x), 1e-15), x, 1e-14);
  }
  const long double y = 1e-6L + 1e-18L;
  const long double x = invert_branch(f, Interval{0.0, 1.0}, y);
  EXPECT_NEAR(static_cast<double>((x + x * x * x - y) / y), 0.0, 1e-17);
}

TEST(Invert, Errors) {
  const auto sq = SmoothFunction::parse("x^2");
  EXPECT_THROW(invert_branch(sq, {-1.0, 1.0}, 0.5, 1e-12), NotMonotone);
  EXPECT_THROW(invert_branch(sq, {0.0, 1.0}, 2.0, 1e-12), OutOfRange);
}

TEST(Branch, AffineIsExact) {
  const auto b = Branch::affine(0.1, 0.9);
  EXPECT_DOUBLE_EQ(b.g(0.5), 0.95);
  EXPECT_NEAR(b.f(0.95), 0.5, 1e-14);
  EXPECT_DOUBLE_EQ(b.dg(0.3), 0.1);
  EXPECT_DOUBLE_EQ(b.df(0.93), 10.0);
}

TEST(Branch, InverseOfForwardConsistency) {
  const auto b = Branch::inverse_of_forward(SmoothFunction::parse("x + x^2"), {0.0, 1.0});
  for (double y : {0.0, 0.2, 0.9, 1.7, 2.0}) {
    const double x = b.g(y);
    EXPECT_NEAR(x, (-1 + std::sqrt(1 + 4 * y)) / 2, 1e-14);
    EXPECT_NEAR(b.f(x), y, 1e-14);
    EXPECT_NEAR(b.dg(y) * b.df(x), 1.0, 1e-12);
  }
  EXPECT_NEAR(static_cast<double>(b.f_increment(1e-200L) / 1e-400L), 1.0, 1e-15);
}

TEST(Branch, ContractionDerivatives) {
  const auto b = Branch::contraction(SmoothFunction::parse("x/3 + x^2/100"), {0.0, 1.0});
  for (double y : {0.1, 0.5, 0.9}) {
    EXPECT_NEAR(b.dg(y), oracle::central_difference([&](double v) { return b.g(v); }, y), 1e-9);
    EXPECT_NEAR(b.f(b.g(y)), y, 1e-14);
  }
}

TEST(System, ThirdsPiecesAndConstants) {
  const auto sys = make_system(thirds());
  ASSERT_EQ(sys.size(), 2u);
  EXPECT_NEAR(sys.piece(2).lo, 2.0 / 3, 1e-16);
  EXPECT_EQ(sys.theta(), 0.0);
  EXPECT_EQ(sys.lambda(), 1.0);
  EXPECT_EQ(sys.locate(0.5), std::nullopt);
  EXPECT_EQ(sys.locate(0.1), 1);
  EXPECT_EQ(sys.locate(1.0), 2);
}

TEST(System, ThetaMatchesDenseGrid) {
  const auto sys = oracle::builtin("nonlinear-perturbed");
  // log g' = log(1/3 + y/50) on [0, 1]; its slope peaks at y = 0.
  double sup = 0;
  for (int i = 0; i <= 100000; ++i) {
    const double y = i / 100000.0;
    sup = std::max(sup, (1.0 / 50) / (1.0 / 3 + y / 50));
  }
  EXPECT_LE(sys.theta(), kThetaSafety * sup * (1 + 1e-9));
  EXPECT_GE(sys.theta(), kThetaSafety * sup * (1 - 1e-3));
  EXPECT_NEAR(sys.lambda(), std::exp(4 * sys.theta()), 1e-15);
}

TEST(System, FlatParabolicExampleIsValid) {
  const auto sys = oracle::builtin("paper-example");
  EXPECT_EQ(sys.size(), 2u);
  EXPECT_TRUE(std::isfinite(sys.theta()));
  const double edge = sys.piece(1).hi;
  EXPECT_NEAR(edge + edge * edge * std::exp(-1 / edge), 1.0, 1e-13);
}

TEST(System, OverlapIsRejected) {
  auto d = thirds();
  d.branches[1] = {Branch::affine(0.5, 0.25), std::nullopt};
  try {
    make_system(d);
    FAIL();
  } catch (const ValidationError& e) {
    bool mentions = false;
    for (const auto& p : e.problems()) mentions |= p.find("overlap") != std::string::npos;
    EXPECT_TRUE(mentions);
  }
}

TEST(System, EscapingRangeIsRejected) {
  auto d = thirds();
  d.branches[0].interval = Interval{0.0, 0.2};
  EXPECT_THROW(make_system(d), ValidationError);
}

TEST(System, EmptySubshiftIsRejected) {
  auto d = thirds();
  d.forbidden = {{1}, {2}};
  EXPECT_THROW(make_system(d), ValidationError);
}

TEST(System, ComponentSelection) {
  auto d = thirds();
  d.forbidden = {{1, 2}};
  const auto sys = make_system(d);
  EXPECT_FALSE(sys.warnings().empty());
  d.component = 1;
  EXPECT_EQ(enumerate_words(make_system(d).subshift(), 3), (std::vector<Word>{{2, 2, 2}}));
  d.component = 2;
  EXPECT_THROW(make_system(d), ValidationError);
}
