#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "thermoset/interval.hpp"
#include "thermoset/maps.hpp"
#include "thermoset/symbolic.hpp"

namespace thermoset {

/// Geometric cylinder Delta_w = g_{w_1...w_{n-1}}(I_{w_n}).
///
/// `point` is the representative x_w = g_{w_1} o ... o g_{w_n}(c), with c the
/// midpoint of the ambient interval; it lies in Delta_w. `deriv_mid` is
/// |(g_{w_1} o ... o g_{w_n})'(c)|, so |(f^n)'(x_w)| = 1 / deriv_mid.
struct Cylinder {
  Word word;
  double left = 0.0;
  double right = 0.0;
  double point = 0.0;
  double log_deriv = 0.0;  // log(deriv_mid)
  double deriv_mid = 0.0;

  std::size_t depth() const noexcept { return word.size(); }
  double length() const noexcept { return right - left; }
  Interval interval() const noexcept { return {left, right}; }
};

/// All cylinders of depth 1..max_depth, each level in lexicographic word
/// order. Built by prepending symbols: Delta_{i v} = g_i(Delta_v).
class CylinderTable {
 public:
  CylinderTable(const MarkovSystem& system, std::size_t max_depth);

  std::size_t max_depth() const noexcept { return levels_.size(); }
  const std::vector<Cylinder>& level(std::size_t n) const { return levels_.at(n - 1); }
  /// Index of `w` in level |w|.
  std::optional<std::size_t> find(const Word& w) const;
  double max_diameter(std::size_t n) const;
  double total_length(std::size_t n) const;
  /// True when two cylinders of one depth overlap or touch within 1e-12 |I|.
  bool touching() const noexcept { return touching_; }

 private:
  std::vector<std::vector<Cylinder>> levels_;
  bool touching_ = false;
};

/// Cylinders of depth n.
std::vector<Cylinder> refine(const MarkovSystem& system, std::size_t n);

/// d_n, the largest cylinder length at depth n.
double max_diameter(const MarkovSystem& system, std::size_t n);

/// Tempered-distortion bound: rho_n = theta_f * sum_{k<=n} d_k / n and
/// pad = exp(n rho_n) bounds |(f^n)'(x)| / |(f^n)'(y)| for x, y in one
/// depth-n cylinder.
struct DistortionBound {
  std::size_t depth = 0;
  double rho = 0.0;
  double pad = 1.0;
};

DistortionBound distortion_pad(const MarkovSystem& system, std::size_t n);
DistortionBound distortion_pad(const MarkovSystem& system, const CylinderTable& table,
                               std::size_t n);

struct SchwartzConstants {
  double theta = 0.0;
  double lambda = 1.0;
};

SchwartzConstants schwartz_constants(const MarkovSystem& system);

/// Open interval between consecutive depth-n cylinders, or between the
/// outermost cylinders and the ambient boundary. An outer approximation of a
/// true gap of the limit set.
struct Gap {
  Interval span;
  std::optional<Word> left_word;
  std::optional<Word> right_word;
  /// d_n <= |G| / (3 lambda)
  bool schwartz_condition = false;
};

std::vector<Gap> gap_list(const MarkovSystem& system, std::size_t n);
std::vector<Gap> gap_list(const MarkovSystem& system, const CylinderTable& table, std::size_t n);

}  // namespace thermoset
