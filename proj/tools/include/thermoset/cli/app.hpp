#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace thermoset::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitComputation = 1;
inline constexpr int kExitUsage = 2;

/// Rows for CSV emission; every cell is pre-formatted.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

struct Report {
  std::string command;
  std::string system;
  std::string fingerprint;
  nlohmann::json parameters = nlohmann::json::object();
  nlohmann::json results = nlohmann::json::object();
  std::vector<std::string> warnings;
  std::string version;
  Table table;
};

/// 64-bit FNV-1a of the canonical configuration text, as 16 hex digits.
std::string fingerprint(const nlohmann::json& config);

/// JSON with sorted keys, two-space indent, trailing newline.
std::string emit_json(const Report& report);
/// Header line plus one line per row. Throws ConfigError when the command
/// has no tabular form.
std::string emit_csv(const Report& report);

/// Shortest round-trip formatting of a double.
std::string format_number(double v);

/// Entry point shared by the executable and the tests. `args` excludes the
/// program name. Reports go to `out`, diagnostics to `err`.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace thermoset::cli
