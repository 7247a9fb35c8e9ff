#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "lab/config_io.hpp"
#include "rwrs/experiments.hpp"

namespace lab {

inline const std::vector<std::string> kSubcommands = {
    "slln",   "theorem3", "scaling-alpha", "scaling-occupancy",
    "subseq", "varbound", "covbound"};

// Fixed-schema CSV of the replica rows (header + LF rows, '.' decimals,
// shortest round-trip doubles).
std::string rows_to_csv(const std::vector<rwrs::ReplicaRow>& rows);

nlohmann::json report_to_json(const rwrs::ExperimentReport& report);

struct RunResult {
  int exit_code = 0;
  rwrs::ExperimentReport report;
  std::filesystem::path manifest_path;
  std::filesystem::path rows_path;
  std::filesystem::path summary_path;
};

// Dispatch one subcommand: write manifest.json (before any rows), run the
// experiment, then rows.csv, summary.json, and the finished manifest with
// the rows hash.  Exit code 0 iff every configured acceptance rule passed.
// config_path is recorded in the manifest ("<inline>" for programmatic runs).
RunResult run_subcommand(const std::string& subcommand,
                         const rwrs::ExperimentConfig& config,
                         const std::filesystem::path& out_dir,
                         const rwrs::ExecOptions& opts = {},
                         const std::string& config_path = "<inline>");

}  // namespace lab
