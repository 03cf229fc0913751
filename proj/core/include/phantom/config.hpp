#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "phantom/analysis.hpp"
#include "phantom/engine.hpp"

namespace phantom {

/// Key-value configuration files: one `key = value` per line, `#` starts a
/// comment. Unknown keys, duplicate keys and malformed values throw
/// ConfigError; type errors carry the line number.

/// Unspecified keys take the defaults of the chosen environment (outdoor when
/// `environment` is absent). The `seed` key sets both the run and scenario seed.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::filesystem::path& path);

/// Every key with its resolved value; parse_config(dump_config(c)) == c.
std::string dump_config(const SimConfig& config);

/// `key = value  # unit/meaning [default|set]` lines for report headers.
std::vector<std::string> describe_config(const SimConfig& config);

struct KeyInfo {
  std::string key;
  std::string alias;
  std::string unit;
  std::string description;
};

/// Schema of the simulation config, in dump order.
std::vector<KeyInfo> config_schema();

analysis::AnalysisParams parse_analysis_params(std::string_view text);
analysis::AnalysisParams load_analysis_params(const std::filesystem::path& path);
std::vector<KeyInfo> analysis_schema();

bool operator==(const SimConfig& a, const SimConfig& b);

}  // namespace phantom
