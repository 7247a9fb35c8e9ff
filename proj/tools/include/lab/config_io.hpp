#pragma once

#include <filesystem>
#include <string>

#include <nlohmann/json.hpp>

#include "rwrs/experiments.hpp"

namespace lab {

inline constexpr std::string_view kToolVersion = "0.1.0";

// Parse an experiment configuration from JSON.  Unknown keys and invariant
// violations are reported with their key path.  A manifest written by a
// previous run (carrying "subcommand" and "config") is accepted too, so a
// run can be reproduced from its manifest alone.
rwrs::ExperimentConfig parse_config_json(const nlohmann::json& j);
rwrs::ExperimentConfig parse_config_file(const std::filesystem::path& path);

// Canonical JSON form; parse_config_json(config_to_json(c)) == c.
nlohmann::json config_to_json(const rwrs::ExperimentConfig& config);

}  // namespace lab
