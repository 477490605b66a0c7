#include "thermoset/cli/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>

#include "thermoset/expr.hpp"

namespace thermoset::cli {

using nlohmann::json;

ConfigError::ConfigError(const std::string& what, std::size_t line)
    : Error(line ? what + " (line " + std::to_string(line) + ")" : what), line_(line) {}

namespace {

const std::map<std::string, std::string>& registry() {
  static const std::map<std::string, std::string> r = {
      {"cantor-thirds", R"cfg({
  "name": "cantor-thirds",
  "interval": [0, 1],
  "branches": [
    {"kind": "affine", "a": "1/3", "b": 0},
    {"kind": "affine", "a": "1/3", "b": "2/3"}
  ]
})cfg"},
      {"golden-mean-thirds", R"cfg({
  "name": "golden-mean-thirds",
  "interval": [0, 1],
  "branches": [
    {"kind": "affine", "a": "1/3", "b": 0},
    {"kind": "affine", "a": "1/3", "b": "2/3"}
  ],
  "forbidden": [[1, 1]],
  "defaults": {"depth": 12}
})cfg"},
      {"nonlinear-perturbed", R"cfg({
  "name": "nonlinear-perturbed",
  "interval": [0, 1],
  "branches": [
    {"kind": "expr", "contraction": "x/3 + x^2/100", "domain": [0, 1]},
    {"kind": "expr", "contraction": "0.65 + x/3 + x^2/100", "domain": [0, 1]}
  ],
  "defaults": {"depth": 10}
})cfg"},
      {"paper-example", R"cfg({
  "name": "paper-example",
  "interval": [0, 1],
  "branches": [
    {"kind": "expr", "forward": "x + x^2*exp(-1/x)", "domain": [0, 1],
     "limits": [{"at": 0, "value": 0, "derivative": 1, "second_derivative": 0}]},
    {"kind": "affine", "a": "1/10", "b": "9/10"}
  ],
  "defaults": {"depth": 10, "max_period": 1, "count": 1000000}
})cfg"},
      {"parabolic-b2", R"cfg({
  "name": "parabolic-b2",
  "interval": [0, 1],
  "branches": [
    {"kind": "expr", "forward": "x + x^2", "domain": [0, 1]},
    {"kind": "affine", "a": "1/10", "b": "9/10"}
  ],
  "defaults": {"max_period": 1, "count": 100000}
})cfg"},
      {"parabolic-b3", R"cfg({
  "name": "parabolic-b3",
  "interval": [0, 1],
  "branches": [
    {"kind": "expr", "forward": "x + x^3", "domain": [0, 1]},
    {"kind": "affine", "a": "1/10", "b": "9/10"}
  ],
  "defaults": {"max_period": 1, "count": 100000}
})cfg"},
      {"parabolic-b4", R"cfg({
  "name": "parabolic-b4",
  "interval": [0, 1],
  "branches": [
    {"kind": "expr", "forward": "x + x^4", "domain": [0, 1]},
    {"kind": "affine", "a": "1/10", "b": "9/10"}
  ],
  "defaults": {"max_period": 1, "count": 100000}
})cfg"},
  };
  return r;
}

std::size_t line_at(const std::string& text, std::size_t offset) {
  offset = std::min(offset, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + offset, '\n'));
}

// Locates keys in the source text so schema errors can carry a line number.
class Locator {
 public:
  explicit Locator(const std::string& text) : text_(text) {}

  // Line of `"key"`, searching after the start of branch `branch` when given.
  std::size_t line(const std::string& key, std::optional<std::size_t> branch = {}) const {
    std::size_t from = 0;
    if (branch) {
      from = branch_start(*branch);
      if (from == std::string::npos) return 0;
    }
    const std::size_t pos = text_.find('"' + key + '"', from);
    return pos == std::string::npos ? 0 : line_at(text_, pos);
  }

  std::size_t branch_line(std::size_t branch) const {
    const std::size_t pos = branch_start(branch);
    return pos == std::string::npos ? 0 : line_at(text_, pos);
  }

 private:
  // Offset of the opening brace of the branch-th object in "branches".
  std::size_t branch_start(std::size_t branch) const {
    std::size_t pos = text_.find("\"branches\"");
    if (pos == std::string::npos) return pos;
    pos = text_.find('[', pos);
    int depth = 0;
    std::size_t seen = 0;
    bool in_string = false;
    for (std::size_t i = pos; i < text_.size(); ++i) {
      const char ch = text_[i];
      if (in_string) {
        if (ch == '\\') ++i;
        else if (ch == '"') in_string = false;
        continue;
      }
      if (ch == '"') in_string = true;
      else if (ch == '[' || ch == '{') {
        if (ch == '{' && depth == 1) {
          if (seen == branch) return i;
          ++seen;
        }
        ++depth;
      } else if (ch == ']' || ch == '}') {
        if (--depth == 0) break;
      }
    }
    return std::string::npos;
  }

  const std::string& text_;
};

struct Reader {
  const Locator& loc;

  [[noreturn]] void fail(const std::string& path, const std::string& msg, std::size_t line) const {
    throw ConfigError("field '" + path + "': " + msg, line);
  }

  double number(const json& v, const std::string& path, std::size_t line) const {
    if (v.is_number()) return v.get<double>();
    if (v.is_string()) {
      try {
        const Expr e = parse_expr(v.get<std::string>());
        const double d = eval(e, 0.0);
        if (eval(e, 1.0) != d) fail(path, "constant expression must not use x", line);
        if (std::isfinite(d)) return d;
      } catch (const ConfigError&) {
        throw;
      } catch (const Error& ex) {
        fail(path, std::string("invalid constant: ") + ex.what(), line);
      }
    }
    fail(path, "expected a number or a constant expression string", line);
  }

  Interval interval(const json& v, const std::string& path, std::size_t line) const {
    if (!v.is_array() || v.size() != 2) fail(path, "expected [lo, hi]", line);
    Interval iv{number(v[0], path + "[0]", line), number(v[1], path + "[1]", line)};
    if (!(iv.hi > iv.lo)) fail(path, "expected lo < hi", line);
    return iv;
  }

  std::size_t count(const json& v, const std::string& path, std::size_t line) const {
    if (!v.is_number_integer() || v.get<long long>() < 0) {
      fail(path, "expected a non-negative integer", line);
    }
    return v.get<std::size_t>();
  }

  void only(const json& obj, std::initializer_list<const char*> keys, const std::string& path,
            std::optional<std::size_t> branch) const {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
      if (std::none_of(keys.begin(), keys.end(), [&](const char* k) { return it.key() == k; })) {
        fail(path.empty() ? it.key() : path + "." + it.key(), "unknown field",
             loc.line(it.key(), branch));
      }
    }
  }
};

SystemDefinition::BranchDef read_branch(const Reader& rd, const json& b, std::size_t i) {
  const std::string path = "branches[" + std::to_string(i) + "]";
  const std::size_t bline = rd.loc.branch_line(i);
  auto line = [&](const char* key) {
    const std::size_t l = rd.loc.line(key, i);
    return l ? l : bline;
  };
  if (!b.is_object()) rd.fail(path, "expected an object", bline);
  if (!b.contains("kind")) rd.fail(path + ".kind", "missing required field", bline);
  if (!b["kind"].is_string()) rd.fail(path + ".kind", "expected a string", line("kind"));
  const std::string kind = b["kind"].get<std::string>();

  std::optional<Interval> range;
  if (b.contains("range")) range = rd.interval(b["range"], path + ".range", line("range"));

  if (kind == "affine") {
    rd.only(b, {"kind", "a", "b", "range"}, path, i);
    for (const char* key : {"a", "b"}) {
      if (!b.contains(key)) rd.fail(path + "." + key, "missing required field", bline);
    }
    const double a = rd.number(b["a"], path + ".a", line("a"));
    const double off = rd.number(b["b"], path + ".b", line("b"));
    if (a == 0.0) rd.fail(path + ".a", "slope must be non-zero", line("a"));
    return {Branch::affine(a, off), range};
  }
  if (kind != "expr") {
    rd.fail(path + ".kind", "expected \"affine\" or \"expr\", got \"" + kind + "\"", line("kind"));
  }
  rd.only(b, {"kind", "forward", "contraction", "domain", "range", "limits"}, path, i);
  const bool fwd = b.contains("forward"), con = b.contains("contraction");
  if (fwd == con) {
    rd.fail(path, "exactly one of 'forward' or 'contraction' is required", bline);
  }
  const char* src_key = fwd ? "forward" : "contraction";
  if (!b[src_key].is_string()) rd.fail(path + "." + src_key, "expected a string", line(src_key));
  if (!b.contains("domain")) rd.fail(path + ".domain", "missing required field", bline);
  const Interval domain = rd.interval(b["domain"], path + ".domain", line("domain"));

  std::vector<LimitValue> limits;
  if (b.contains("limits")) {
    const json& ls = b["limits"];
    if (!ls.is_array()) rd.fail(path + ".limits", "expected an array", line("limits"));
    for (std::size_t k = 0; k < ls.size(); ++k) {
      const std::string lp = path + ".limits[" + std::to_string(k) + "]";
      const json& l = ls[k];
      if (!l.is_object()) rd.fail(lp, "expected an object", line("limits"));
      rd.only(l, {"at", "value", "derivative", "second_derivative"}, lp, i);
      for (const char* key : {"at", "value"}) {
        if (!l.contains(key)) rd.fail(lp + "." + key, "missing required field", line("limits"));
      }
      LimitValue lv;
      lv.at = rd.number(l["at"], lp + ".at", line("at"));
      lv.value = rd.number(l["value"], lp + ".value", line("value"));
      if (l.contains("derivative")) {
        lv.derivative = rd.number(l["derivative"], lp + ".derivative", line("derivative"));
      }
      if (l.contains("second_derivative")) {
        lv.second_derivative =
            rd.number(l["second_derivative"], lp + ".second_derivative", line("second_derivative"));
      }
      limits.push_back(lv);
    }
  }

  std::optional<SmoothFunction> fn;
  try {
    fn.emplace(SmoothFunction::parse(b[src_key].get<std::string>(), limits));
  } catch (const ParseError& e) {
    rd.fail(path + "." + src_key, e.what(), line(src_key));
  }
  return {fwd ? Branch::inverse_of_forward(*fn, domain) : Branch::contraction(*fn, domain), range};
}

}  // namespace

SystemConfig parse_config(const std::string& text, const std::string& origin) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(origin + ": malformed JSON: " + e.what(), line_at(text, e.byte));
  }
  const Locator loc(text);
  const Reader rd{loc};
  if (!j.is_object()) throw ConfigError(origin + ": top level must be an object", 1);
  rd.only(j, {"name", "interval", "branches", "forbidden", "component", "theta_samples",
              "defaults"},
          "", std::nullopt);

  SystemConfig cfg;
  cfg.source = j;
  SystemDefinition& def = cfg.definition;
  if (j.contains("name")) {
    if (!j["name"].is_string()) rd.fail("name", "expected a string", loc.line("name"));
    def.name = j["name"].get<std::string>();
  } else {
    def.name = origin;
  }
  if (!j.contains("interval")) rd.fail("interval", "missing required field", 1);
  def.ambient = rd.interval(j["interval"], "interval", loc.line("interval"));

  if (!j.contains("branches")) rd.fail("branches", "missing required field", 1);
  const json& bs = j["branches"];
  if (!bs.is_array() || bs.empty()) {
    rd.fail("branches", "expected a non-empty array", loc.line("branches"));
  }
  for (std::size_t i = 0; i < bs.size(); ++i) def.branches.push_back(read_branch(rd, bs[i], i));

  if (j.contains("forbidden")) {
    const json& q = j["forbidden"];
    const std::size_t line = loc.line("forbidden");
    if (!q.is_array()) rd.fail("forbidden", "expected an array of words", line);
    for (std::size_t k = 0; k < q.size(); ++k) {
      const std::string path = "forbidden[" + std::to_string(k) + "]";
      if (!q[k].is_array() || q[k].empty()) rd.fail(path, "expected a non-empty word", line);
      Word w;
      for (const auto& s : q[k]) {
        if (!s.is_number_integer()) rd.fail(path, "symbols must be integers", line);
        const int v = s.get<int>();
        if (v < 1 || v > static_cast<int>(bs.size())) {
          rd.fail(path, "symbol " + std::to_string(v) + " outside 1.." + std::to_string(bs.size()),
                  line);
        }
        w.push_back(v);
      }
      def.forbidden.push_back(std::move(w));
    }
  }
  if (j.contains("component")) {
    def.component = rd.count(j["component"], "component", loc.line("component"));
  }
  if (j.contains("theta_samples")) {
    def.theta_samples = rd.count(j["theta_samples"], "theta_samples", loc.line("theta_samples"));
    if (def.theta_samples < 10) rd.fail("theta_samples", "must be >= 10", loc.line("theta_samples"));
  }
  if (j.contains("defaults")) {
    const json& d = j["defaults"];
    if (!d.is_object()) rd.fail("defaults", "expected an object", loc.line("defaults"));
    rd.only(d, {"depth", "tol", "max_period", "steps", "count", "iterations", "eigen_tol"},
            "defaults", std::nullopt);
    Defaults& df = cfg.defaults;
    auto cnt = [&](const char* key, std::size_t& out) {
      if (d.contains(key)) out = rd.count(d[key], std::string("defaults.") + key, loc.line(key));
    };
    auto num = [&](const char* key, double& out) {
      if (d.contains(key)) out = rd.number(d[key], std::string("defaults.") + key, loc.line(key));
    };
    cnt("depth", df.depth);
    cnt("max_period", df.max_period);
    cnt("steps", df.steps);
    cnt("count", df.count);
    cnt("iterations", df.iterations);
    num("tol", df.tol);
    num("eigen_tol", df.eigen_tol);
  }
  return cfg;
}

std::vector<std::string> builtin_names() {
  std::vector<std::string> names;
  for (const auto& [k, v] : registry()) names.push_back(k);
  return names;
}

const std::string& builtin_text(const std::string& name) {
  const auto& r = registry();
  const auto it = r.find(name);
  if (it == r.end()) throw ConfigError("unknown builtin system '" + name + "'");
  return it->second;
}

SystemConfig load_config(const std::string& path_or_name) {
  const auto& r = registry();
  if (r.count(path_or_name)) return parse_config(r.at(path_or_name), path_or_name);
  std::ifstream in(path_or_name);
  if (!in) {
    throw ConfigError("cannot open '" + path_or_name + "' (not a file or builtin name)");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path_or_name);
}

Word parse_word(const std::string& s) {
  Word w;
  const bool separated = s.find_first_of(".,") != std::string::npos;
  std::string token;
  auto flush = [&] {
    if (token.empty()) throw ConfigError("malformed word '" + s + "'");
    w.push_back(std::stoi(token));
    token.clear();
  };
  for (char ch : s) {
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      token.push_back(ch);
      if (!separated) flush();
    } else if (separated && (ch == '.' || ch == ',')) {
      flush();
    } else if (!std::isspace(static_cast<unsigned char>(ch))) {
      throw ConfigError("malformed word '" + s + "'");
    }
  }
  if (separated) flush();
  if (w.empty()) throw ConfigError("empty word");
  return w;
}

}  // namespace thermoset::cli
