#include "lab/runner.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <ctime>
#include <fstream>
#include <stdexcept>

#include "lab/sha256.hpp"

namespace lab {

using nlohmann::json;
using rwrs::ExperimentConfig;
using rwrs::ExperimentReport;
using rwrs::ReplicaRow;

namespace {

void append_number(std::string& out, double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

void append_number(std::string& out, long long v) {
  char buf[24];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  out.append(buf, res.ptr);
}

std::string utc_timestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_file(const std::filesystem::path& path, std::string_view data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw std::runtime_error("cannot write '" + path.string() + "'");
  }
  out.write(data.data(), static_cast<std::streamsize>(data.size()));
}

ExperimentReport dispatch(const std::string& subcommand,
                          const ExperimentConfig& config,
                          const rwrs::ExecOptions& opts) {
  if (subcommand == "slln") return rwrs::run_slln(config, opts);
  if (subcommand == "theorem3") return rwrs::run_theorem3(config, opts);
  if (subcommand == "scaling-alpha") return rwrs::scaling_alpha(config, opts);
  if (subcommand == "scaling-occupancy") {
    return rwrs::scaling_occupancy(config, opts);
  }
  if (subcommand == "subseq") {
    return rwrs::subsequence_diagnostic(config, opts);
  }
  if (subcommand == "varbound") {
    return rwrs::variance_bound_check(config, opts);
  }
  if (subcommand == "covbound") {
    if (config.samples < 10000) {
      throw std::invalid_argument(
          "config: samples: covbound requires samples >= 10000");
    }
    return rwrs::covariance_bound_report(config, opts);
  }
  throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
}

json slope_to_json(const rwrs::SlopeFit& fit) {
  return json{{"slope", fit.slope},
              {"intercept", fit.intercept},
              {"stderr", fit.stderr_slope},
              {"r2", fit.r2},
              {"points", fit.points}};
}

}  // namespace

std::string rows_to_csv(const std::vector<ReplicaRow>& rows) {
  std::string out =
      "n,replica,Z,Z_centered,Z_norm,alpha0,sumN2,max_abs_S,window_ok,lil_ok\n";
  for (const ReplicaRow& r : rows) {
    append_number(out, r.n);
    out.push_back(',');
    append_number(out, r.replica);
    out.push_back(',');
    append_number(out, r.z);
    out.push_back(',');
    append_number(out, r.z_centered);
    out.push_back(',');
    append_number(out, r.z_norm);
    out.push_back(',');
    append_number(out, r.alpha0);
    out.push_back(',');
    append_number(out, r.sum_n2);
    out.push_back(',');
    append_number(out, r.max_abs_s);
    out.push_back(',');
    out.push_back(r.window_ok ? '1' : '0');
    out.push_back(',');
    out.push_back(r.lil_ok ? '1' : '0');
    out.push_back('\n');
  }
  return out;
}

json report_to_json(const ExperimentReport& report) {
  json slopes = json::object();
  for (const auto& [name, fit] : report.slopes) {
    slopes[name] = slope_to_json(fit);
  }

  json per_n = json::array();
  for (const auto& stats : report.per_n) {
    json row{{"n", stats.n}};
    for (const auto& [key, value] : stats.stats) row[key] = value;
    per_n.push_back(std::move(row));
  }

  json rules = json::array();
  for (const auto& rule : report.rules) {
    rules.push_back(json{{"name", rule.name},
                         {"pass", rule.pass},
                         {"observed", rule.observed},
                         {"lo", rule.lo},
                         {"hi", rule.hi},
                         {"note", rule.note}});
  }

  json out{{"kind", report.kind},
           {"tool_version", std::string(kToolVersion)},
           {"slopes", slopes},
           {"per_n", per_n},
           {"rules", rules},
           {"warnings", report.warnings},
           {"failures", report.failed_rules()},
           {"pass", report.all_rules_pass()}};
  if (!report.bc_partial_sums.empty()) {
    out["bc_partial_sums"] = report.bc_partial_sums;
  }
  return out;
}

RunResult run_subcommand(const std::string& subcommand,
                         const ExperimentConfig& config,
                         const std::filesystem::path& out_dir,
                         const rwrs::ExecOptions& opts,
                         const std::string& config_path) {
  if (std::find(kSubcommands.begin(), kSubcommands.end(), subcommand) ==
      kSubcommands.end()) {
    throw std::invalid_argument("unknown subcommand '" + subcommand + "'");
  }
  if (config.tau.has_value() && subcommand != "theorem3") {
    throw std::invalid_argument(
        "config: tau: only valid for theorem3 runs");
  }

  std::filesystem::create_directories(out_dir);

  RunResult result;
  result.manifest_path = out_dir / "manifest.json";
  result.rows_path = out_dir / "rows.csv";
  result.summary_path = out_dir / "summary.json";

  json manifest{{"tool_version", std::string(kToolVersion)},
                {"subcommand", subcommand},
                {"base_seed", static_cast<long long>(config.base_seed)},
                {"config_path", config_path},
                {"output_dir", out_dir.string()},
                {"config", config_to_json(config)},
                {"started", utc_timestamp()},
                {"finished", ""},
                {"rows_sha256", ""}};
  write_file(result.manifest_path, manifest.dump(2) + "\n");

  result.report = dispatch(subcommand, config, opts);

  const std::string csv = rows_to_csv(result.report.rows);
  write_file(result.rows_path, csv);
  write_file(result.summary_path, report_to_json(result.report).dump(2) + "\n");

  // Timestamps live only in the manifest; the hash covers the row bytes.
  manifest["finished"] = utc_timestamp();
  manifest["rows_sha256"] = sha256_hex(csv);
  write_file(result.manifest_path, manifest.dump(2) + "\n");

  result.exit_code = result.report.all_rules_pass() ? 0 : 1;
  return result;
}

}  // namespace lab
