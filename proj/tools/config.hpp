#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <string>

#include "jtl/circuit_model.hpp"
#include "jtl/experiments.hpp"

namespace jtlsim {

// Parsed INI file. Values are kept as text until a consumer needs them.
struct Config {
  std::map<std::string, std::string> circuit;
  std::map<std::string, std::string> drive;
  std::map<std::string, std::string> solver;
  std::map<std::string, std::string> scenario;
};

/// Reads and checks section/key names. Throws ValidationError on unknown
/// sections or keys, or if the file cannot be read or parsed.
Config load_config(const std::filesystem::path& path);
Config parse_config(const std::string& text);

/// Full CircuitParams from [circuit]; r_n and r_sub fall back to the
/// library defaults, everything else is required.
jtl::CircuitParams circuit_from(const Config& cfg);

/// Scenario selection: `cli_id` wins over [scenario] id.
jtl::ScenarioSpec scenario_from(const Config& cfg, const std::optional<std::string>& cli_id,
                                const std::filesystem::path& out_dir);

/// dt divisor and fixed t_end from [solver]; `cli_divisor` wins when set.
jtl::RunOptions options_from(const Config& cfg, std::optional<double> cli_divisor, int jobs);

/// Multi-line report used by `derive`.
std::string describe(const jtl::CircuitParams& circuit);

/// value with an SI prefix, 6 significant digits, e.g. "19.6197 G".
std::string engineering(double value);

}  // namespace jtlsim
