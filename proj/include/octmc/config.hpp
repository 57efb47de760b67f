#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "octmc/experiment.hpp"

namespace octmc {

struct ConfigError {
  std::string key_path;  // dotted, e.g. "motion.amplitude_um"; empty for syntax errors
  std::optional<int> line;  // 1-based
  std::optional<int> column;
  std::string message;

  // "<source>:<line>:<col>: <key_path>: <message>"
  std::string format(const std::string& source) const;
};

class ConfigParseError : public std::runtime_error {
 public:
  ConfigParseError(std::string source, std::vector<ConfigError> errors);
  const std::vector<ConfigError>& errors() const { return errors_; }

 private:
  std::vector<ConfigError> errors_;
};

// Parses a scenario from YAML. Every unset key keeps its default. Unknown keys,
// type mismatches and out-of-range values are all collected and thrown
// together as ConfigParseError.
ScenarioConfig parse_config(const std::string& text, const std::string& source = "<config>");
ScenarioConfig load_config_file(const std::string& path);

// Canonical YAML: every field, fixed key order, shortest round-trip numbers.
// parse_config(serialize_config(c)) reproduces c exactly.
std::string serialize_config(const ScenarioConfig& config);

// FNV-1a over the canonical serialization.
std::uint64_t config_hash(const ScenarioConfig& config);
std::string config_hash_hex(const ScenarioConfig& config);

// A sweep file holds a base scenario (inline or a preset name), a list of
// scenarios given as dotted-key overrides, and optional seeds; every scenario
// runs once per seed.
struct SweepSpec {
  std::vector<ScenarioConfig> configs;
};

SweepSpec parse_sweep(const std::string& text, const std::string& source = "<sweep>");
SweepSpec load_sweep_file(const std::string& path);

std::string read_text_file(const std::string& path);

}  // namespace octmc
