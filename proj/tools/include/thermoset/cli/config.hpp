#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "thermoset/error.hpp"
#include "thermoset/maps.hpp"

namespace thermoset::cli {

/// Malformed or schema-violating configuration. `line` is 0 when unknown.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, std::size_t line = 0);
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

/// Analysis defaults; every one of them is echoed into reports.
struct Defaults {
  std::size_t depth = 8;
  double tol = 1e-9;
  std::size_t max_period = 4;
  std::size_t steps = 200;
  std::size_t count = 10000;
  std::size_t iterations = 20000;
  double eigen_tol = 1e-13;
};

struct SystemConfig {
  /// Canonical form of the configuration (sorted keys), used for the
  /// fingerprint.
  nlohmann::json source;
  SystemDefinition definition;
  Defaults defaults;
};

/// Parses configuration text. `origin` names the source in error messages.
SystemConfig parse_config(const std::string& text, const std::string& origin = "<config>");

/// Loads a file, or a built-in system when `path_or_name` is a registered
/// builtin name.
SystemConfig load_config(const std::string& path_or_name);

std::vector<std::string> builtin_names();
/// Configuration text of a builtin. Throws ConfigError for unknown names.
const std::string& builtin_text(const std::string& name);

/// Parses "1.2.1", "1,2,1" or "121" (single-digit symbols).
Word parse_word(const std::string& s);

}  // namespace thermoset::cli
