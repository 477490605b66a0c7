#include "thermoset/cli/app.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "thermoset/cli/config.hpp"
#include "thermoset/conformal.hpp"
#include "thermoset/cylinders.hpp"
#include "thermoset/gaps.hpp"
#include "thermoset/orbits.hpp"
#include "thermoset/parallel.hpp"
#include "thermoset/pressure.hpp"
#include "thermoset/symbolic.hpp"

#ifndef THERMOSET_VERSION
#define THERMOSET_VERSION "0.0.0"
#endif

namespace thermoset::cli {

using nlohmann::json;

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string fingerprint(const json& config) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

std::string emit_json(const Report& r) {
  json j;
  j["command"] = r.command;
  j["system"] = r.system;
  j["fingerprint"] = r.fingerprint;
  j["parameters"] = r.parameters;
  j["results"] = r.results;
  j["warnings"] = r.warnings;
  j["version"] = r.version;
  return j.dump(2) + "\n";
}

std::string emit_csv(const Report& r) {
  if (r.table.header.empty()) {
    throw ConfigError("command '" + r.command + "' has no csv form; use --format json");
  }
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << cells[i];
    os << "\n";
  };
  line(r.table.header);
  for (const auto& row : r.table.rows) line(row);
  return os.str();
}

namespace {

// JSON has no infinities; they are written as strings.
json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "+inf" : "-inf";
}

std::string word_cell(const Word& w) { return to_string(w); }

std::vector<double> parse_list(const std::string& s, const char* what) {
  // "a:b:n" is n evenly spaced points from a to b; otherwise comma separated.
  std::vector<double> out;
  try {
    if (s.find(':') != std::string::npos) {
      std::istringstream is(s);
      std::string a, b, n;
      std::getline(is, a, ':');
      std::getline(is, b, ':');
      std::getline(is, n);
      const double lo = std::stod(a), hi = std::stod(b);
      const long cnt = std::stol(n);
      if (cnt < 1) throw std::invalid_argument("count");
      for (long k = 0; k < cnt; ++k) {
        out.push_back(cnt == 1 ? lo : lo + (hi - lo) * static_cast<double>(k) / double(cnt - 1));
      }
    } else {
      std::istringstream is(s);
      std::string tok;
      while (std::getline(is, tok, ',')) out.push_back(std::stod(tok));
    }
  } catch (const std::logic_error&) {
    throw ConfigError(std::string("malformed ") + what + " '" + s + "'");
  }
  if (out.empty()) throw ConfigError(std::string("empty ") + what);
  return out;
}

json spec_json(const SubshiftSpec& s) {
  json q = json::array();
  for (const auto& w : s.forbidden()) q.push_back(w);
  return {{"alphabet_size", s.alphabet_size()},
          {"forbidden", q},
          {"max_forbidden_length", s.max_forbidden_length()}};
}

json interval_json(const Interval& iv) { return json::array({iv.lo, iv.hi}); }

std::vector<PressureMethod> methods_from(const std::string& m) {
  if (m == "all") return {PressureMethod::Cylinder, PressureMethod::Periodic, PressureMethod::Operator};
  return {parse_pressure_method(m)};
}

struct Options {
  std::string system;
  std::string format = "json";
  std::optional<std::size_t> threads;

  std::optional<std::size_t> depth;
  std::optional<double> tol;
  std::string method;
  std::string t_grid;
  std::optional<double> t;
  std::optional<std::size_t> max_period;
  double x = 0.0;
  std::optional<std::size_t> steps;
  std::string alpha = "0.1,0.5,1";
  std::string side = "+";
  std::optional<std::size_t> count;
  std::string tail_t = "1,0.9";
  std::optional<double> point_x;
  std::string probe_radii;
  std::optional<double> probe_x;
  bool repair = false, components = false;
  std::string cut;
};

// ---------------------------------------------------------------------------
// Subcommands

void cmd_validate(const MarkovSystem& sys, Report& r) {
  json pieces = json::array(), branches = json::array();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    pieces.push_back(interval_json(sys.pieces()[i]));
    branches.push_back(sys.branch(static_cast<int>(i + 1)).describe());
  }
  r.results = {{"ambient", interval_json(sys.ambient())},
               {"pieces", pieces},
               {"branches", branches},
               {"subshift", spec_json(sys.subshift())},
               {"graph", {{"nodes", sys.graph().size()}, {"edges", sys.graph().edge_count()}}},
               {"transitive", is_transitive(sys.graph())},
               {"theta", sys.theta()},
               {"theta_forward", sys.theta_forward()},
               {"lambda", sys.lambda()},
               {"theta_unstable", sys.theta_unstable()},
               {"valid", true}};
}

void cmd_refine(const MarkovSystem& sys, std::size_t depth, Report& r) {
  const CylinderTable table(sys, depth);
  const auto& level = table.level(depth);
  const auto pad = distortion_pad(sys, table, depth);
  json cyls = json::array();
  r.table.header = {"word", "left", "right", "length", "deriv_mid"};
  for (const auto& c : level) {
    cyls.push_back({{"word", c.word},
                    {"left", c.left},
                    {"right", c.right},
                    {"length", c.length()},
                    {"deriv_mid", c.deriv_mid}});
    r.table.rows.push_back({word_cell(c.word), format_number(c.left), format_number(c.right),
                            format_number(c.length()), format_number(c.deriv_mid)});
  }
  json gaps = json::array();
  for (const auto& g : gap_list(sys, table, depth)) {
    json e = {{"span", interval_json(g.span)}, {"schwartz_condition", g.schwartz_condition}};
    e["left_word"] = g.left_word ? json(*g.left_word) : json(nullptr);
    e["right_word"] = g.right_word ? json(*g.right_word) : json(nullptr);
    gaps.push_back(e);
  }
  json diam = json::array();
  for (std::size_t k = 1; k <= depth; ++k) diam.push_back(table.max_diameter(k));
  r.results = {{"depth", depth},
               {"count", level.size()},
               {"max_diameter", diam},
               {"cover_measure", table.total_length(depth)},
               {"distortion", {{"rho", pad.rho}, {"pad", pad.pad}}},
               {"touching", table.touching()},
               {"cylinders", cyls},
               {"gaps", gaps}};
}

void cmd_pressure(const MarkovSystem& sys, const Options& o, const Defaults& d, Report& r) {
  const std::size_t depth = o.depth.value_or(d.depth);
  const auto grid = parse_list(o.t_grid.empty() ? "0:1:11" : o.t_grid, "t grid");
  const std::string method = o.method.empty() ? "all" : o.method;
  r.parameters["depth"] = depth;
  r.parameters["t_grid"] = grid;
  r.parameters["method"] = method;
  r.table.header = {"t", "lower", "upper", "method", "depth"};
  json rows = json::array();
  double rho = 0.0;
  for (PressureMethod m : methods_from(method)) {
    const PressureEvaluator eval(sys, depth, m, d.iterations, d.eigen_tol);
    rho = eval.distortion().rho;
    for (double t : grid) {
      const PressureEstimate e = eval(t);
      rows.push_back({{"t", t},
                      {"lower", e.lower},
                      {"upper", e.upper},
                      {"method", to_string(m)},
                      {"depth", depth},
                      {"dominant_share", e.dominant_share}});
      r.table.rows.push_back({format_number(t), format_number(e.lower), format_number(e.upper),
                              to_string(m), std::to_string(depth)});
      if (m == PressureMethod::Periodic && e.dominant_share > 0.5) {
        r.warnings.push_back("periodic sum at t=" + format_number(t) +
                             " is dominated by a single orbit (share " +
                             format_number(e.dominant_share) + ")");
      }
    }
  }
  r.results = {{"estimates", rows}, {"distortion_rho", rho}};
}

void cmd_dimension(const MarkovSystem& sys, const Options& o, const Defaults& d, Report& r) {
  const std::size_t depth = o.depth.value_or(d.depth);
  const double tol = o.tol.value_or(d.tol);
  const std::string method = o.method.empty() ? "operator" : o.method;
  r.parameters["depth"] = depth;
  r.parameters["tol"] = tol;
  r.parameters["method"] = method;
  const auto methods = methods_from(method);
  json roots = json::array();
  r.table.header = {"method", "t0", "t_lo", "t_hi", "depth"};
  for (PressureMethod m : methods) {
    try {
      const PressureEvaluator eval(sys, depth, m, d.iterations, d.eigen_tol);
      const BowenResult b = bowen_root(eval, tol);
      roots.push_back({{"method", to_string(m)},
                       {"t0", b.t0},
                       {"t_lo", b.t_lo},
                       {"t_hi", b.t_hi},
                       {"depth", b.n}});
      r.table.rows.push_back({to_string(m), format_number(b.t0), format_number(b.t_lo),
                              format_number(b.t_hi), std::to_string(depth)});
    } catch (const NoSignChange& e) {
      if (methods.size() == 1) throw;
      roots.push_back({{"method", to_string(m)}, {"error", e.what()}});
      r.warnings.push_back(to_string(m) + ": " + e.what());
    }
  }
  r.results = {{"roots", roots}};
}

void cmd_conformal(const MarkovSystem& sys, const Options& o, const Defaults& d, Report& r) {
  const std::size_t depth = o.depth.value_or(d.depth);
  double t;
  if (o.t) {
    t = *o.t;
  } else {
    t = bowen_root(PressureEvaluator(sys, depth, PressureMethod::Operator, d.iterations,
                                     d.eigen_tol),
                   d.tol)
            .t0;
    r.warnings.push_back("no --t given; using the operator Bowen root " + format_number(t));
  }
  r.parameters["depth"] = depth;
  r.parameters["t"] = t;
  const CylinderMeasure m = conformal_measure(sys, t, depth, d.iterations, d.eigen_tol);
  json weights = json::array();
  r.table.header = {"word", "mass"};
  for (std::size_t k = 0; k < m.words.size(); ++k) {
    weights.push_back({{"word", m.words[k]}, {"mass", m.weights[k]}});
    r.table.rows.push_back({word_cell(m.words[k]), format_number(m.weights[k])});
  }
  r.results = {{"t", m.t},
               {"depth", m.n},
               {"eigenvalue", m.eigenvalue},
               {"residual", m.residual},
               {"iterations", m.iterations},
               {"distortion_pad", distortion_pad(sys, depth).pad},
               {"weights", weights}};
  if (!o.t_grid.empty()) {
    auto grid = parse_list(o.t_grid, "t grid");
    std::sort(grid.begin(), grid.end());
    const TcScan scan = t_c_scan(sys, grid, depth);
    json entries = json::array();
    for (const auto& e : scan.entries) {
      entries.push_back({{"t", e.t},
                         {"eigenvalue", num(e.eigenvalue)},
                         {"converged", e.converged},
                         {"iterations", e.iterations}});
    }
    r.results["t_c_scan"] = {{"entries", entries},
                             {"grid_tolerance", scan.grid_tolerance},
                             {"depth", scan.n},
                             {"proxy", scan.proxy ? json(*scan.proxy) : json(nullptr)},
                             {"nearest", scan.nearest ? json(*scan.nearest) : json(nullptr)}};
  }
  if (o.probe_x) {
    const auto radii = parse_list(o.probe_radii.empty() ? "0.1,0.01,0.001" : o.probe_radii,
                                  "radii");
    const DimensionProbe p = pointwise_dimension_probe(sys, m, *o.probe_x, radii);
    json samples = json::array();
    for (const auto& s : p.samples) {
      samples.push_back({{"r", s.r}, {"mass", s.mass}, {"ratio", num(s.ratio)}});
    }
    r.results["probe"] = {
        {"x", *o.probe_x}, {"samples", samples}, {"containing_mass", p.containing_mass}};
  }
}

json point_json(const PeriodicPoint& p) {
  return {{"word", p.word},
          {"x", p.x},
          {"multiplier", p.multiplier},
          {"class", to_string(p.cls)},
          {"period", p.period()},
          {"residual", p.residual}};
}

void cmd_periodic(const MarkovSystem& sys, const Options& o, const Defaults& d, Report& r) {
  const std::size_t n_max = o.max_period.value_or(d.max_period);
  r.parameters["max_period"] = n_max;
  json points = json::array();
  r.table.header = {"word", "x", "multiplier", "class"};
  for (std::size_t m = 1; m <= n_max; ++m) {
    for (const auto& p : enumerate_periodic(sys, m)) {
      if (p.period() != m) continue;
      points.push_back(point_json(p));
      r.table.rows.push_back(
          {word_cell(p.word), format_number(p.x), format_number(p.multiplier), to_string(p.cls)});
    }
  }
  const HyperbolicityReport h = uniform_hyperbolicity_report(sys, n_max);
  json parabolic = json::array();
  for (const auto& p : h.parabolic) parabolic.push_back(point_json(p));
  r.results = {{"points", points},
               {"hyperbolicity",
                {{"min_rate", num(h.min_rate)},
                 {"points_checked", h.points_checked},
                 {"parabolic", parabolic},
                 {"verdict", h.verdict}}}};
}

void cmd_hyperbolic(const MarkovSystem& sys, const Options& o, const Defaults& d, Report& r) {
  const std::size_t steps = o.steps.value_or(d.steps);
  auto alphas = parse_list(o.alpha, "alpha list");
  r.parameters["x"] = o.x;
  r.parameters["steps"] = steps;
  r.parameters["alpha"] = alphas;
  const OrbitAnalysis orbit = orbit_analyze(sys, o.x, steps);
  json per_alpha = json::array();
  for (double a : alphas) {
    const auto times = hyperbolic_times(orbit, a);
    json inst = json::array();
    for (const auto& di : instant_constants(sys, orbit, times)) {
      inst.push_back({{"time", di.time},
                      {"radius", di.radius},
                      {"image_diameter", di.image_diameter},
                      {"distortion", di.distortion}});
    }
    per_alpha.push_back(
        {{"alpha", a}, {"count", times.size()}, {"times", times}, {"instants", inst}});
  }
  const MembershipVerdict v = h_membership(sys, o.x, steps, alphas);
  r.table.header = {"k", "x_k", "branch", "logderiv_partial"};
  for (std::size_t k = 0; k < orbit.positions.size(); ++k) {
    r.table.rows.push_back({std::to_string(k), format_number(orbit.positions[k]),
                            k < orbit.branches.size() ? std::to_string(orbit.branches[k]) : "",
                            format_number(orbit.log_partial[k])});
  }
  if (orbit.escaped) r.warnings.push_back("orbit escaped the pieces after " +
                                          std::to_string(orbit.steps()) + " steps");
  r.results = {{"escaped", orbit.escaped},
               {"steps_completed", orbit.steps()},
               {"lyapunov_estimate", orbit.lyapunov_estimate()},
               {"hyperbolic_times", per_alpha},
               {"membership",
                {{"verdict", to_string(v.verdict)},
                 {"alpha", v.alpha ? json(*v.alpha) : json(nullptr)},
                 {"parabolic_x", v.parabolic_x ? json(*v.parabolic_x) : json(nullptr)},
                 {"max_spacing", v.max_spacing},
                 {"note", v.note},
                 {"heuristic", true}}}};
}

void cmd_gaps(const MarkovSystem& sys, const Options& o, const Defaults& d, Report& r) {
  const std::size_t count = o.count.value_or(d.count);
  const Side side = parse_side(o.side);
  r.parameters["count"] = count;
  r.parameters["side"] = to_string(side);

  std::optional<PeriodicPoint> pt;
  for (const auto& p : enumerate_periodic(sys, 1)) {
    if (p.cls != PointClass::Parabolic) continue;
    if (!pt || (o.point_x && std::abs(p.x - *o.point_x) < std::abs(pt->x - *o.point_x))) pt = p;
  }
  if (!pt) throw PreconditionViolation("system has no parabolic fixed point");
  const GapCascade c = gap_cascade(sys, *pt, side, count);

  r.table.header = {"k", "x_k", "D_k"};
  json marks = json::array();
  std::size_t next_mark = 1;
  for (std::size_t k = c.first; k < c.last(); ++k) {
    const double y = static_cast<double>(c.point(k));
    r.table.rows.push_back({std::to_string(k), format_number(y), format_number(c.length(k))});
    while (next_mark < k) next_mark *= 10;
    if (k == next_mark || k + 1 == c.last()) {
      marks.push_back({{"k", k}, {"x_k", y}, {"D_k", c.length(k)}});
      next_mark *= 10;
    }
  }
  json res = {{"x", pt->x}, {"symbol", c.symbol}, {"first", c.first}, {"samples", marks}};
  if (c.lengths.size() >= 100) {
    const PowerLawFit pf = fit_power_law(c);
    res["power_law"] = {{"beta", pf.beta},
                        {"r2", pf.r2},
                        {"k_min", pf.k_min},
                        {"k_max", pf.k_max},
                        {"slope_first", pf.slope_first},
                        {"slope_last", pf.slope_last},
                        {"drifting", pf.drifting}};
    if (pf.drifting) r.warnings.push_back("local power-law slope drifts across the fit window");
  }
  if (c.lengths.size() >= 10000) {
    const LogCorrectedFit lf = fit_log_corrected(c);
    res["log_corrected"] = {{"min_ratio", lf.min_ratio},
                            {"max_ratio", lf.max_ratio},
                            {"band", lf.band},
                            {"drift", lf.drift},
                            {"k_min", lf.k_min},
                            {"k_max", lf.k_max},
                            {"degenerate", lf.degenerate}};
    json tails = json::array();
    for (double t : parse_list(o.tail_t, "tail exponents")) {
      const TailSeries ts = tail_series(c, t);
      json partial = json::array();
      for (const auto& [k, s] : ts.partial_sums) partial.push_back({{"k", k}, {"sum", s}});
      tails.push_back({{"t", t},
                       {"total", ts.total},
                       {"partial_sums", partial},
                       {"last_decade_increment", ts.last_decade_increment},
                       {"rule_verdict", to_string(ts.rule_verdict)},
                       {"model", to_string(ts.model)},
                       {"model_rms", ts.model_rms},
                       {"model_beta", ts.model_beta},
                       {"model_shift", ts.model_shift},
                       {"model_verdict", to_string(ts.model_verdict)},
                       {"verdict", to_string(ts.verdict)}});
    }
    res["tail_series"] = tails;
  }
  try {
    const LocalExponent le = estimate_local_exponent(sys, *pt, side);
    res["local_exponent"] = {{"b", le.b}, {"r2", le.r2},
                             {"beta", le.b > 1.0 ? num(le.b / (le.b - 1.0)) : json(nullptr)}};
  } catch (const PreconditionViolation& e) {
    r.warnings.push_back(std::string("local exponent: ") + e.what());
  }
  r.results = res;
}

void cmd_subshift(const SystemConfig& cfg, const Options& o, Report& r) {
  const int p = static_cast<int>(cfg.definition.branches.size());
  const SubshiftSpec spec = SubshiftSpec::create(p, cfg.definition.forbidden);
  r.results["input"] = spec_json(spec);
  const FollowerGraph g = build_follower_graph(spec);
  r.results["graph"] = {{"nodes", g.size()}, {"edges", g.edge_count()}};
  if (o.repair) r.results["repaired"] = spec_json(repair_complete_invariance(spec));
  if (o.components) {
    json comps = json::array();
    for (const auto& c : transitive_components(build_follower_graph(repair_complete_invariance(spec)))) {
      comps.push_back(spec_json(c));
    }
    r.results["components"] = comps;
  }
  if (!o.cut.empty()) {
    const Word w = parse_word(o.cut);
    r.parameters["cut"] = w;
    r.results["cut"] = spec_json(cut_cylinder(repair_complete_invariance(spec), w));
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Thermodynamic formalism toolkit for Markov interval maps", "thermoset"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_option("--system,-s", o.system, "Config file or builtin name")->required();
  app.add_option("--format,-f", o.format, "Output format")
      ->check(CLI::IsMember({"json", "csv"}));
  app.add_option("--threads", o.threads, "Worker threads (env THERMOSET_THREADS)")
      ->check(CLI::PositiveNumber);

  auto* validate = app.add_subcommand("validate", "Validate the system and print its constants");
  auto* refine = app.add_subcommand("refine", "Cylinders of one depth");
  refine->add_option("--depth", o.depth, "Refinement depth");
  auto* pressure = app.add_subcommand("pressure", "Pressure estimates over a t grid");
  pressure->add_option("--t-grid", o.t_grid, "t values: a,b,c or lo:hi:count");
  pressure->add_option("--depth", o.depth, "Depth n");
  pressure->add_option("--method", o.method, "cylinder|periodic|operator|all")
      ->check(CLI::IsMember({"cylinder", "periodic", "operator", "all"}));
  auto* dimension = app.add_subcommand("dimension", "Bowen root");
  dimension->add_option("--depth", o.depth, "Depth n");
  dimension->add_option("--tol", o.tol, "Bracket width");
  dimension->add_option("--method", o.method, "cylinder|periodic|operator|all")
      ->check(CLI::IsMember({"cylinder", "periodic", "operator", "all"}));
  auto* conformal = app.add_subcommand("conformal", "Approximate conformal measure");
  conformal->add_option("--t", o.t, "Exponent (default: Bowen root)");
  conformal->add_option("--depth", o.depth, "Depth n");
  conformal->add_option("--t-grid", o.t_grid, "Also scan eigenvalues over these t");
  conformal->add_option("--probe-x", o.probe_x, "Pointwise dimension probe location");
  conformal->add_option("--radii", o.probe_radii, "Probe radii, decreasing");
  auto* periodic = app.add_subcommand("periodic", "Periodic points and their classes");
  periodic->add_option("--max-period", o.max_period, "Largest period");
  auto* hyperbolic = app.add_subcommand("hyperbolic", "Orbit, hyperbolic times, H membership");
  hyperbolic->add_option("--x", o.x, "Start point")->required();
  hyperbolic->add_option("--steps", o.steps, "Orbit length");
  hyperbolic->add_option("--alpha", o.alpha, "Exponents, comma separated");
  auto* gaps = app.add_subcommand("gaps", "Gap cascade at a parabolic fixed point");
  gaps->add_option("--side", o.side, "+ or -")->check(CLI::IsMember({"+", "-", "plus", "minus"}));
  gaps->add_option("--count", o.count, "Cascade length K");
  gaps->add_option("--t", o.tail_t, "Tail-series exponents, comma separated");
  gaps->add_option("--point", o.point_x, "Pick the parabolic point nearest to this x");
  auto* subshift = app.add_subcommand("subshift", "Subshift operations on the forbidden words");
  subshift->add_flag("--repair", o.repair, "Repair complete invariance");
  subshift->add_flag("--components", o.components, "Transitive components");
  subshift->add_option("--cut", o.cut, "Forbid WORD and repair");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (o.threads) {
    set_thread_count(*o.threads);
  } else if (const char* env = std::getenv("THERMOSET_THREADS")) {
    try {
      const long v = std::stol(env);
      if (v > 0) set_thread_count(static_cast<std::size_t>(v));
    } catch (const std::logic_error&) {
      err << "warning: ignoring malformed THERMOSET_THREADS='" << env << "'\n";
    }
  }

  Report r;
  r.version = THERMOSET_VERSION;
  try {
    const SystemConfig cfg = load_config(o.system);
    const Defaults& d = cfg.defaults;
    r.system = cfg.definition.name;
    r.fingerprint = fingerprint(cfg.source);
    r.parameters = {{"defaults",
                     {{"depth", d.depth},
                      {"tol", d.tol},
                      {"max_period", d.max_period},
                      {"steps", d.steps},
                      {"count", d.count},
                      {"iterations", d.iterations},
                      {"eigen_tol", d.eigen_tol}}}};
    auto* sub = app.get_subcommands().front();
    r.command = sub->get_name();
    if (sub == subshift) {
      if (!o.repair && !o.components && o.cut.empty()) {
        throw ConfigError("subshift needs --repair, --components or --cut WORD");
      }
      cmd_subshift(cfg, o, r);
    } else {
      const MarkovSystem sys = make_system(cfg.definition);
      r.warnings = sys.warnings();
      if (sub == validate) cmd_validate(sys, r);
      else if (sub == refine) {
        const std::size_t depth = o.depth.value_or(d.depth);
        r.parameters["depth"] = depth;
        cmd_refine(sys, depth, r);
      } else if (sub == pressure) cmd_pressure(sys, o, d, r);
      else if (sub == dimension) cmd_dimension(sys, o, d, r);
      else if (sub == conformal) cmd_conformal(sys, o, d, r);
      else if (sub == periodic) cmd_periodic(sys, o, d, r);
      else if (sub == hyperbolic) cmd_hyperbolic(sys, o, d, r);
      else if (sub == gaps) cmd_gaps(sys, o, d, r);
    }
    out << (o.format == "csv" ? emit_csv(r) : emit_json(r));
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "error: invalid system:\n";
    for (const auto& p : e.problems()) err << "  - " << p << "\n";
    return kExitUsage;
  } catch (const PreconditionViolation& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kExitComputation;
  }
  for (const auto& w : r.warnings) err << "warning: " << w << "\n";
  return kExitOk;
}

}  // namespace thermoset::cli
