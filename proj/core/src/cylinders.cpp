#include "thermoset/cylinders.hpp"

#include <algorithm>
#include <cmath>

#include "thermoset/error.hpp"
#include "thermoset/parallel.hpp"

namespace thermoset {

CylinderTable::CylinderTable(const MarkovSystem& system, std::size_t max_depth) {
  if (max_depth == 0) throw PreconditionViolation("cylinder depth must be >= 1");
  const double c = system.ambient().midpoint();
  const double tol = system.tolerance();

  for (std::size_t n = 1; n <= max_depth; ++n) {
    const auto words = enumerate_words(system.graph(), n);
    std::vector<Cylinder> level(words.size());
    const std::vector<Cylinder>* prev = n > 1 ? &levels_.back() : nullptr;

    parallel_for(words.size(), [&](std::size_t k) {
      Cylinder& cyl = level[k];
      cyl.word = words[k];
      const int head = cyl.word.front();
      const Branch& g = system.branch(head);
      if (n == 1) {
        const Interval& piece = system.piece(head);
        cyl.left = piece.lo;
        cyl.right = piece.hi;
        cyl.point = g.g(c);
        cyl.log_deriv = std::log(std::abs(g.dg(c)));
      } else {
        const Word tail(cyl.word.begin() + 1, cyl.word.end());
        auto it = std::lower_bound(prev->begin(), prev->end(), tail,
                                   [](const Cylinder& a, const Word& w) { return a.word < w; });
        if (it == prev->end() || it->word != tail) {
          throw Error("suffix " + to_string(tail) + " missing from depth " +
                      std::to_string(n - 1));
        }
        const double a = g.g(it->left), b = g.g(it->right);
        cyl.left = std::min(a, b);
        cyl.right = std::max(a, b);
        cyl.point = g.g(it->point);
        cyl.log_deriv = std::log(std::abs(g.dg(it->point))) + it->log_deriv;
      }
      cyl.deriv_mid = std::exp(cyl.log_deriv);
    });

    std::vector<const Cylinder*> by_pos;
    by_pos.reserve(level.size());
    for (const auto& cyl : level) by_pos.push_back(&cyl);
    std::sort(by_pos.begin(), by_pos.end(),
              [](const Cylinder* a, const Cylinder* b) { return a->left < b->left; });
    for (std::size_t k = 1; k < by_pos.size(); ++k) {
      if (!(by_pos[k - 1]->right < by_pos[k]->left - tol)) touching_ = true;
    }
    levels_.push_back(std::move(level));
  }
}

std::optional<std::size_t> CylinderTable::find(const Word& w) const {
  if (w.empty() || w.size() > levels_.size()) return std::nullopt;
  const auto& lvl = levels_[w.size() - 1];
  auto it = std::lower_bound(lvl.begin(), lvl.end(), w,
                             [](const Cylinder& a, const Word& x) { return a.word < x; });
  if (it == lvl.end() || it->word != w) return std::nullopt;
  return static_cast<std::size_t>(it - lvl.begin());
}

double CylinderTable::max_diameter(std::size_t n) const {
  double d = 0.0;
  for (const auto& c : level(n)) d = std::max(d, c.length());
  return d;
}

double CylinderTable::total_length(std::size_t n) const {
  double s = 0.0;
  for (const auto& c : level(n)) s += c.length();
  return s;
}

std::vector<Cylinder> refine(const MarkovSystem& system, std::size_t n) {
  return CylinderTable(system, n).level(n);
}

double max_diameter(const MarkovSystem& system, std::size_t n) {
  return CylinderTable(system, n).max_diameter(n);
}

DistortionBound distortion_pad(const MarkovSystem& system, const CylinderTable& table,
                               std::size_t n) {
  if (n == 0 || n > table.max_depth()) throw PreconditionViolation("depth not refined");
  double sum = 0.0;
  for (std::size_t k = 1; k <= n; ++k) sum += table.max_diameter(k);
  DistortionBound b;
  b.depth = n;
  b.rho = system.theta_forward() * sum / static_cast<double>(n);
  b.pad = std::exp(system.theta_forward() * sum);
  return b;
}

DistortionBound distortion_pad(const MarkovSystem& system, std::size_t n) {
  return distortion_pad(system, CylinderTable(system, n), n);
}

SchwartzConstants schwartz_constants(const MarkovSystem& system) {
  return {system.theta(), system.lambda()};
}

std::vector<Gap> gap_list(const MarkovSystem& system, const CylinderTable& table, std::size_t n) {
  const double tol = system.tolerance();
  const double dn = table.max_diameter(n);
  std::vector<const Cylinder*> cyls;
  for (const auto& c : table.level(n)) cyls.push_back(&c);
  std::sort(cyls.begin(), cyls.end(),
            [](const Cylinder* a, const Cylinder* b) { return a->left < b->left; });

  std::vector<Gap> gaps;
  auto emit = [&](double lo, double hi, const Cylinder* l, const Cylinder* r) {
    if (!(hi - lo > tol)) return;
    Gap g;
    g.span = {lo, hi};
    if (l) g.left_word = l->word;
    if (r) g.right_word = r->word;
    g.schwartz_condition = dn <= g.span.length() / (3.0 * system.lambda());
    gaps.push_back(std::move(g));
  };
  if (cyls.empty()) return gaps;
  emit(system.ambient().lo, cyls.front()->left, nullptr, cyls.front());
  for (std::size_t k = 1; k < cyls.size(); ++k) {
    emit(cyls[k - 1]->right, cyls[k]->left, cyls[k - 1], cyls[k]);
  }
  emit(cyls.back()->right, system.ambient().hi, cyls.back(), nullptr);
  return gaps;
}

std::vector<Gap> gap_list(const MarkovSystem& system, std::size_t n) {
  return gap_list(system, CylinderTable(system, n), n);
}

}  // namespace thermoset
