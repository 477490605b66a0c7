#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "thermoset/cylinders.hpp"
#include "thermoset/gaps.hpp"

using namespace thermoset;

namespace {

// log |(f^n)'(x)| along the word w, by forward iteration.
double forward_log_derivative(const MarkovSystem& sys, const Word& w, double x) {
  double s = 0;
  for (int c : w) {
    s += std::log(std::abs(sys.branch(c).df(x)));
    x = sys.branch(c).f(x);
  }
  return s;
}

}  // namespace

TEST(Refine, ThirdsDepthThree) {
  const auto sys = oracle::builtin("cantor-thirds");
  const auto cyl = refine(sys, 3);
  ASSERT_EQ(cyl.size(), 8u);
  for (std::size_t k = 0; k < cyl.size(); ++k) {
    EXPECT_NEAR(cyl[k].length(), 1.0 / 27, 1e-15);
    EXPECT_NEAR(cyl[k].deriv_mid, 1.0 / 27, 1e-15);
    EXPECT_TRUE(cyl[k].interval().contains(cyl[k].point));
    // Left endpoints are sums of 2 * 3^-j over the digits equal to 2.
    double left = 0;
    for (std::size_t j = 0; j < 3; ++j) left += (cyl[k].word[j] - 1) * 2.0 / std::pow(3.0, j + 1.0);
    EXPECT_NEAR(cyl[k].left, left, 1e-15);
  }
  EXPECT_TRUE(std::is_sorted(cyl.begin(), cyl.end(),
                             [](const Cylinder& a, const Cylinder& b) { return a.word < b.word; }));
}

TEST(Refine, GoldenMeanSkipsForbiddenWords) {
  const auto sys = oracle::builtin("golden-mean-thirds");
  for (std::size_t n = 1; n <= 10; ++n) {
    EXPECT_EQ(static_cast<double>(refine(sys, n).size()), oracle::golden_words(n));
  }
}

TEST(Refine, Nesting) {
  for (const char* name : {"nonlinear-perturbed", "paper-example", "golden-mean-thirds"}) {
    const auto sys = oracle::builtin(name);
    const CylinderTable table(sys, 8);
    for (std::size_t n = 2; n <= 8; ++n) {
      for (const auto& c : table.level(n)) {
        const Word parent(c.word.begin(), c.word.end() - 1);
        const auto idx = table.find(parent);
        ASSERT_TRUE(idx.has_value());
        const auto& p = table.level(n - 1)[*idx];
        EXPECT_TRUE(p.interval().contains(c.interval(), 1e-15)) << name << " " << to_string(c.word);
      }
    }
  }
}

TEST(Refine, CoverMeasureNonIncreasing) {
  for (const char* name : {"cantor-thirds", "nonlinear-perturbed", "paper-example"}) {
    const auto sys = oracle::builtin(name);
    const CylinderTable table(sys, 10);
    for (std::size_t n = 2; n <= 10; ++n) {
      EXPECT_LE(table.total_length(n), table.total_length(n - 1) * (1 + 1e-15)) << name << n;
    }
  }
}

TEST(Refine, ThirdsCoverMeasureIsMoran) {
  const auto sys = oracle::builtin("cantor-thirds");
  for (std::size_t n = 1; n <= 12; ++n) {
    EXPECT_NEAR(cover_measure(sys, n), std::pow(2.0 / 3.0, static_cast<double>(n)), 1e-13);
  }
}

TEST(Distortion, SampledRatiosStayBelowPad) {
  std::mt19937 rng(17);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (const char* name : {"nonlinear-perturbed", "paper-example"}) {
    const auto sys = oracle::builtin(name);
    const CylinderTable table(sys, 8);
    for (std::size_t n = 1; n <= 8; ++n) {
      const auto pad = distortion_pad(sys, table, n);
      const auto& level = table.level(n);
      for (int pair = 0; pair < 32; ++pair) {
        const auto& c = level[rng() % level.size()];
        const double x = c.left + u(rng) * c.length();
        const double y = c.left + u(rng) * c.length();
        const double ratio =
            std::exp(std::abs(forward_log_derivative(sys, c.word, x) -
                              forward_log_derivative(sys, c.word, y)));
        EXPECT_LE(ratio, pad.pad * (1 + 1e-9)) << name << " n=" << n;
      }
    }
  }
}

TEST(Distortion, AffinePadIsOne) {
  const auto sys = oracle::builtin("cantor-thirds");
  EXPECT_EQ(distortion_pad(sys, 6).pad, 1.0);
}

TEST(Gaps, ThirdsMiddleGap) {
  const auto gaps = gap_list(oracle::builtin("cantor-thirds"), 1);
  bool found = false;
  for (const auto& g : gaps) {
    if (std::abs(g.span.lo - 1.0 / 3) < 1e-12 && std::abs(g.span.hi - 2.0 / 3) < 1e-12) {
      found = true;
      EXPECT_EQ(g.left_word, (Word{1}));
      EXPECT_EQ(g.right_word, (Word{2}));
    }
  }
  EXPECT_TRUE(found);
}

TEST(Gaps, GoldenMeanDepthTwo) {
  // Delta_11 = [0, 1/9] is removed; what remains in I_1 starts at 2/9.
  const auto gaps = gap_list(oracle::builtin("golden-mean-thirds"), 2);
  bool covered = false;
  for (const auto& g : gaps) {
    if (g.span.lo <= 1e-12 && g.span.hi >= 2.0 / 9 - 1e-12) covered = true;
  }
  EXPECT_TRUE(covered);
}

TEST(Gaps, GapsAndCylindersTileTheInterval) {
  for (const char* name : {"cantor-thirds", "nonlinear-perturbed"}) {
    const auto sys = oracle::builtin(name);
    for (std::size_t n = 1; n <= 6; ++n) {
      double total = 0;
      for (const auto& g : gap_list(sys, n)) {
        total += g.span.length();
        for (const auto& c : refine(sys, n)) {
          EXPECT_FALSE(c.left > g.span.lo + 1e-12 && c.left < g.span.hi - 1e-12);
        }
      }
      EXPECT_NEAR(total + cover_measure(sys, n), sys.ambient().length(), 1e-12) << name << n;
    }
  }
}
