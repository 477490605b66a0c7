// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any fail.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "thermoset/cli/app.hpp"
#include "thermoset/conformal.hpp"
#include "thermoset/error.hpp"
#include "thermoset/gaps.hpp"
#include "thermoset/orbits.hpp"
#include "thermoset/pressure.hpp"
#include "thermoset/symbolic.hpp"

using namespace thermoset;
using Clock = std::chrono::steady_clock;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

nlohmann::json run_cli(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  if (code != cli::kExitOk) throw Error("cli exited with " + std::to_string(code) + ": " + err.str());
  return nlohmann::json::parse(out.str());
}

Verdict bowen_moran() {
  const double expected = oracle::kLog2 / oracle::kLog3;
  const auto start = Clock::now();
  const auto j = run_cli({"-s", "cantor-thirds", "dimension", "--depth", "8", "--method", "all"});
  const double elapsed = seconds_since(start);
  Verdict v{elapsed < 1.0, ""};
  for (const auto& r : j["results"]["roots"]) {
    const double err = std::abs(r["t0"].get<double>() - expected);
    v.pass = v.pass && err <= 1e-6;
    v.detail += r["method"].get<std::string>() + " err " + num(err) + ", ";
  }
  v.pass = v.pass && j["results"]["roots"].size() == 3;
  v.detail += "time " + num(elapsed) + " s";
  return v;
}

Verdict golden_mean_dimension() {
  // Perron root of [[0,1],[1,1]] is the golden ratio.
  const double expected = std::log(oracle::kGolden) / oracle::kLog3;
  Verdict v{true, "expected " + num(expected)};
  for (const char* method : {"operator", "periodic"}) {
    const auto j = run_cli({"-s", "golden-mean-thirds", "dimension", "--depth", "12", "--method", method});
    const double t0 = j["results"]["roots"][0]["t0"].get<double>();
    v.pass = v.pass && std::abs(t0 - expected) <= 1e-5;
    v.detail += std::string(", ") + method + " " + num(t0);
  }
  return v;
}

Verdict cross_method_agreement() {
  const auto sys = oracle::builtin("nonlinear-perturbed");
  const std::size_t n = 10;
  const PressureEvaluator cyl(sys, n, PressureMethod::Cylinder);
  const PressureEvaluator per(sys, n, PressureMethod::Periodic);
  const PressureEvaluator op(sys, n, PressureMethod::Operator);
  const double rho = cyl.distortion().rho;
  Verdict v{true, "rho_n " + num(rho)};
  for (double t : {0.0, 0.3, 0.63}) {
    const auto a = cyl(t), b = per(t), c = op(t);
    const double spread = std::max({a.mid(), b.mid(), c.mid()}) - std::min({a.mid(), b.mid(), c.mid()});
    const double allowed = std::max(0.02, 2 * t * rho);
    const bool sandwich = a.lower <= a.upper && b.lower <= b.upper && c.lower <= c.upper;
    v.pass = v.pass && spread <= allowed && sandwich;
    v.detail += ", t=" + num(t) + " spread " + num(spread) + (sandwich ? "" : " sandwich broken");
  }
  return v;
}

Verdict conformality() {
  const auto sys = oracle::builtin("cantor-thirds");
  const auto root = bowen_root(sys, 8, 1e-12, PressureMethod::Operator);
  const auto m = conformal_measure(sys, root.t0, 8);
  const double residual = conformality_residual(sys, m);
  return {residual <= 1e-8 && std::abs(m.eigenvalue - 1) <= 1e-8,
          "residual " + num(residual) + ", eigenvalue - 1 = " + num(m.eigenvalue - 1)};
}

Verdict periodic_classification() {
  const auto j = run_cli({"-s", "paper-example", "periodic", "--max-period", "1"});
  const auto& pts = j["results"]["points"];
  if (pts.size() != 2) return {false, std::to_string(pts.size()) + " fixed points"};
  const auto& p0 = pts[0];
  const auto& p1 = pts[1];
  const bool ok = std::abs(p0["x"].get<double>()) <= 1e-8 &&
                  std::abs(p0["multiplier"].get<double>() - 1) <= 1e-8 && p0["class"] == "Parabolic" &&
                  std::abs(p1["x"].get<double>() - 1) <= 1e-8 &&
                  std::abs(p1["multiplier"].get<double>() - 10) <= 1e-8 && p1["class"] == "Expanding";
  return {ok, "x=" + num(p0["x"]) + " m=" + num(p0["multiplier"]) + " " + p0["class"].get<std::string>() +
                  "; x=" + num(p1["x"]) + " m=" + num(p1["multiplier"]) + " " +
                  p1["class"].get<std::string>()};
}

Verdict synthetic_gap_law() {
  Verdict v{true, ""};
  for (auto [name, b] : {std::pair{"parabolic-b2", 2.0}, std::pair{"parabolic-b3", 3.0}}) {
    const auto start = Clock::now();
    const auto sys = oracle::builtin(name);
    const auto pt = enumerate_periodic(sys, 1).front();
    const auto c = gap_cascade(sys, pt, Side::Plus, 100001);
    const auto fit = fit_power_law(c, 1000, 100000);
    const double elapsed = seconds_since(start);
    const double expected = b / (b - 1);
    v.pass = v.pass && std::abs(fit.beta - expected) <= 0.05 && elapsed < 10.0;
    v.detail += std::string(v.detail.empty() ? "" : "; ") + "b=" + num(b) + " beta " + num(fit.beta) +
                " (expected " + num(expected) + ", " + num(elapsed) + " s)";
  }
  return v;
}

Verdict flat_parabolic_gap_law() {
  const auto sys = oracle::builtin("paper-example");
  const auto pt = enumerate_periodic(sys, 1).front();
  const auto c = gap_cascade(sys, pt, Side::Plus, 1000001);
  const auto band = fit_log_corrected(c, 10000, 1000000);
  const auto at_one = tail_series(c, 1.0);
  const auto below = tail_series(c, 0.9);
  const bool ok = band.band <= 3.0 && at_one.verdict == SeriesVerdict::Convergent &&
                  below.verdict == SeriesVerdict::Divergent;
  return {ok, "band " + num(band.band) + ", t=1 " + to_string(at_one.verdict) + ", t=0.9 " +
                  to_string(below.verdict)};
}

Verdict dimension_one_measure_zero() {
  const auto sys = oracle::builtin("paper-example");
  Verdict v{true, "roots"};
  double prev = 0;
  for (std::size_t n : {6u, 8u, 10u, 12u}) {
    const double t0 = bowen_root(sys, n, 1e-9, PressureMethod::Operator).t0;
    v.pass = v.pass && t0 >= prev && t0 <= 1.0;
    v.detail += " " + num(t0);
    prev = t0;
  }
  v.detail += "; cover";
  double last = sys.ambient().length();
  for (std::size_t n = 1; n <= 14; ++n) {
    const double m = cover_measure(sys, n);
    v.pass = v.pass && m < last;
    if (n % 3 == 2 || n == 14) v.detail += " n" + std::to_string(n) + "=" + num(m);
    last = m;
  }
  return v;
}

Verdict hyperbolic_times_check() {
  const auto thirds = orbit_analyze(oracle::builtin("cantor-thirds"), 0.0, 50);
  const auto at_log3 = hyperbolic_times(thirds, oracle::kLog3);
  const auto above = hyperbolic_times(thirds, 1.2 * oracle::kLog3);
  const auto paper = orbit_analyze(oracle::builtin("paper-example"), 0.0, 50);
  std::size_t paper_times = 0;
  for (double a : {0.01, 0.05, 0.1, 0.5, 1.0, 2.0}) paper_times += hyperbolic_times(paper, a).size();
  const bool ok = !thirds.escaped && at_log3.size() == 50 && above.empty() && paper_times == 0;
  return {ok, "thirds " + std::to_string(at_log3.size()) + "/50 at log 3, " +
                  std::to_string(above.size()) + " at 1.2 log 3; paper-example " +
                  std::to_string(paper_times) + " over the grid"};
}

std::string text(const Word& w) { return oracle::as_string(w); }

// Length-12 prefixes of the repaired spec against strings that embed in
// arbitrarily long Q-avoiding strings on both sides. With l(Q) <= 3 there are
// at most 4 states of length 2, so 5 extension symbols force a repeated state
// and hence an infinite extension. Only the last (first) two symbols of an
// avoiding word interact with a right (left) extension.
Verdict subshift_equivalence() {
  const auto start = Clock::now();
  std::vector<std::string> pool;
  for (std::size_t len = 1; len <= 3; ++len) {
    for (const auto& s : oracle::all_strings(2, len)) pool.push_back(s);
  }
  std::vector<std::vector<std::string>> cases = {{}};
  for (std::size_t i = 0; i < pool.size(); ++i) {
    cases.push_back({pool[i]});
    for (std::size_t j = i + 1; j < pool.size(); ++j) cases.push_back({pool[i], pool[j]});
  }
  std::mt19937 rng(20240601);
  std::uniform_int_distribution<std::uint32_t> mask(0, (1u << pool.size()) - 1);
  for (int i = 0; i < 500; ++i) {
    const auto m = mask(rng);
    std::vector<std::string> q;
    for (std::size_t b = 0; b < pool.size(); ++b)
      if (m >> b & 1u) q.push_back(pool[b]);
    cases.push_back(q);
  }

  const auto words12 = oracle::all_strings(2, 12);
  const auto ext = oracle::all_strings(2, 5);
  std::size_t mismatches = 0, empty = 0;
  for (const auto& q : cases) {
    std::set<std::string> expected;
    for (const auto& w : words12) {
      if (!oracle::avoids(w, q)) continue;
      bool right = false, left = false;
      for (const auto& u : ext) {
        right = right || oracle::avoids(w.substr(10) + u, q);
        left = left || oracle::avoids(u + w.substr(0, 2), q);
      }
      if (left && right) expected.insert(w);
    }
    std::vector<Word> fw;
    for (const auto& s : q) {
      Word w;
      for (char ch : s) w.push_back(ch - '0');
      fw.push_back(w);
    }
    std::set<std::string> got;
    try {
      const auto repaired = repair_complete_invariance(SubshiftSpec::create(2, fw));
      for (const auto& w : enumerate_words(repaired, 12)) got.insert(text(w));
    } catch (const EmptySubshift&) {
    }
    empty += expected.empty();
    mismatches += got != expected;
  }
  const double elapsed = seconds_since(start);
  return {mismatches == 0 && elapsed < 60.0,
          std::to_string(cases.size()) + " sets (" + std::to_string(empty) + " empty), " +
              std::to_string(mismatches) + " mismatches, " + num(elapsed) + " s"};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Verdict()>>> criteria = {
      {"bowen root on cantor-thirds, three methods", bowen_moran},
      {"golden-mean-thirds dimension", golden_mean_dimension},
      {"cross-method pressure agreement", cross_method_agreement},
      {"conformality at the bowen root", conformality},
      {"paper-example fixed point classification", periodic_classification},
      {"gap law for x + x^b", synthetic_gap_law},
      {"paper-example gap law and tail series", flat_parabolic_gap_law},
      {"bowen roots rise while cover measure falls", dimension_one_measure_zero},
      {"hyperbolic times", hyperbolic_times_check},
      {"subshift repair against brute force", subshift_equivalence},
  };
  int failed = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Verdict v;
    try {
      v = criteria[i].second();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << criteria[i].first << ": "
              << v.detail << std::endl;
  }
  std::cout << (criteria.size() - failed) << "/" << criteria.size() << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
