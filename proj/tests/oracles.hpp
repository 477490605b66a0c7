#pragma once

// Reference computations that share no code with the library.

#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "thermoset/cli/config.hpp"
#include "thermoset/maps.hpp"

namespace oracle {

inline thermoset::MarkovSystem builtin(const std::string& name) {
  return thermoset::make_system(thermoset::cli::load_config(name).definition);
}

inline const double kLog2 = std::log(2.0);
inline const double kLog3 = std::log(3.0);
inline const double kGolden = (1.0 + std::sqrt(5.0)) / 2.0;

/// Symbols 1..p as characters '1'..'9'.
inline std::string as_string(const std::vector<int>& w) {
  std::string s;
  for (int c : w) s.push_back(static_cast<char>('0' + c));
  return s;
}

inline bool avoids(const std::string& s, const std::vector<std::string>& q) {
  for (const auto& f : q) {
    if (s.find(f) != std::string::npos) return false;
  }
  return true;
}

/// Every string of length n over {1..p}.
inline std::vector<std::string> all_strings(int p, std::size_t n) {
  std::vector<std::string> out{""};
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<std::string> next;
    for (const auto& s : out) {
      for (int c = 1; c <= p; ++c) next.push_back(s + static_cast<char>('0' + c));
    }
    out.swap(next);
  }
  return out;
}

/// Length-n strings that sit inside arbitrarily long Q-avoiding strings on
/// both sides. `reach` extension symbols on each side are enough once reach
/// exceeds the number of length-(l(Q)-1) states, because a repeated state
/// closes a loop that can be pumped forever.
inline std::set<std::string> biinfinite_words(int p, const std::vector<std::string>& q,
                                              std::size_t n, std::size_t reach) {
  const auto ext = all_strings(p, reach);
  std::set<std::string> out;
  for (const auto& w : all_strings(p, n)) {
    if (!avoids(w, q)) continue;
    bool right = false, left = false;
    for (const auto& u : ext) {
      if (!right && avoids(w + u, q)) right = true;
      if (!left && avoids(u + w, q)) left = true;
      if (left && right) break;
    }
    if (left && right) out.insert(w);
  }
  return out;
}

/// Number of words of length n with right extensions of length `reach`.
inline std::size_t forward_count(int p, const std::vector<std::string>& q, std::size_t n,
                                 std::size_t reach) {
  const auto ext = all_strings(p, reach);
  std::size_t count = 0;
  for (const auto& w : all_strings(p, n)) {
    if (!avoids(w, q)) continue;
    for (const auto& u : ext) {
      if (avoids(w + u, q)) {
        ++count;
        break;
      }
    }
  }
  return count;
}

using Mat2 = std::array<std::array<double, 2>, 2>;

inline Mat2 mul(const Mat2& a, const Mat2& b) {
  Mat2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) c[i][j] += a[i][k] * b[k][j];
  return c;
}

/// trace(A^n) for the golden-mean adjacency matrix [[0,1],[1,1]].
inline double golden_trace(std::size_t n) {
  Mat2 a{{{0, 1}, {1, 1}}}, r{{{1, 0}, {0, 1}}};
  for (std::size_t i = 0; i < n; ++i) r = mul(r, a);
  return r[0][0] + r[1][1];
}

/// Sum of the entries of A^(n-1): golden-mean words of length n.
inline double golden_words(std::size_t n) {
  Mat2 a{{{0, 1}, {1, 1}}}, r{{{1, 0}, {0, 1}}};
  for (std::size_t i = 1; i < n; ++i) r = mul(r, a);
  return r[0][0] + r[0][1] + r[1][0] + r[1][1];
}

/// Central difference with a step scaled to x.
template <class F>
double central_difference(F&& f, double x) {
  const double h = 1e-5 * std::max(1.0, std::abs(x));
  return (f(x + h) - f(x - h)) / (2 * h);
}

}  // namespace oracle
