#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "eon/scenario.hpp"

namespace eon {

inline constexpr std::string_view kPaperDefaultsProfile = "paper_defaults";

/// Built-in reference profile: shipped 14-node topology, C+L band, KSP with
/// K = 5, all three policies.
ScenarioConfig paper_defaults();

std::filesystem::path default_data_dir();

/// Parses a TOML scenario. Unknown sections or keys are errors. Relative
/// paths resolve against `base_dir`.
ScenarioConfig parse_config(std::string_view toml_text, const std::filesystem::path& base_dir = {});

/// Accepts a file path or the name of the built-in profile.
ScenarioConfig load_config(std::string_view path_or_profile);

/// Every field materialised, paths absolute, RNG algorithm named. Parsing
/// the result yields the same configuration.
std::string config_to_toml(const ScenarioConfig& config);

/// "lo:hi:step" inclusive grid, or a comma-separated list.
std::vector<double> parse_load_grid(std::string_view text);

/// "all" or a comma-separated list of policy names.
std::vector<Policy> parse_policy_list(std::string_view text);

}  // namespace eon
