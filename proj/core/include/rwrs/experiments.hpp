#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "rwrs/regression.hpp"
#include "rwrs/scenery.hpp"
#include "rwrs/walk.hpp"

namespace rwrs {

// Bypass for regression plumbing tests: aggregate observables are replaced
// by coefficient * n^exponent, exactly.
struct SyntheticFixture {
  double coefficient = 1.0;
  double exponent = 1.0;

  bool operator==(const SyntheticFixture&) const = default;
};

struct ExperimentConfig {
  WalkModel walk = WalkModel::rademacher();
  SceneryModel scenery = SceneryModel::iid(InnovationDist::Gaussian);
  std::vector<long long> n_grid;
  long long replicas = 200;
  std::uint64_t base_seed = 0;
  double lambda = 1.5;             // geometric subsequence parameter
  std::optional<double> tau;       // normalization exponent (theorem3 runs)
  double delta = 0.1;              // window exponent slack
  double epsilon = 0.1;            // Chebyshev tolerance (subseq runs)
  bool allow_divergent_tau = false;
  long long samples = 10000;       // covariance-check sample count
  long long max_lag = 20;          // covariance-check lag range
  std::optional<SyntheticFixture> fixture;

  void validate() const;

  bool operator==(const ExperimentConfig&) const = default;
};

struct ExecOptions {
  int threads = 0;  // 0: RWRS_LAB_THREADS env var, else hardware concurrency
};

int resolve_threads(const ExecOptions& opts);

// One record per (n, replica); the row schema of rows.csv.
struct ReplicaRow {
  long long n = 0;
  long long replica = 0;
  double z = 0.0;
  double z_centered = 0.0;  // sum_k (xi - E xi)(S_k): exact path-conditional centering
  double z_norm = 0.0;      // z_centered/n (SLLN runs) or z/n^tau (theorem3 runs)
  long long alpha0 = 0;     // self-intersection local time
  long long sum_n2 = 0;     // sum_i N_n(i)^2 (identical quantity, kept per schema)
  long long max_abs_s = 0;
  bool window_ok = true;
  bool lil_ok = true;
};

struct PerNStats {
  long long n = 0;
  std::map<std::string, double> stats;
};

struct RuleResult {
  std::string name;
  bool pass = true;
  double observed = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  std::string note;
};

struct ExperimentReport {
  std::string kind;
  std::vector<ReplicaRow> rows;  // sorted by (n, replica)
  std::vector<PerNStats> per_n;
  std::map<std::string, SlopeFit> slopes;
  std::vector<double> bc_partial_sums;  // subsequence runs
  std::vector<RuleResult> rules;
  std::vector<std::string> warnings;

  bool all_rules_pass() const;
  std::vector<std::string> failed_rules() const;
};

// Scenery half-width for a run that reaches n_max: twice the LIL envelope,
// never below the largest single step.
long long scenery_halfwidth(const WalkModel& walk, long long n_max);

// Normalized-statistic trajectory diagnostics: per-replica prefix rows at
// every grid point and per-n medians of |Z_centered|/n, with decay rules.
ExperimentReport run_slln(const ExperimentConfig& config,
                          const ExecOptions& opts = {});

// Identically-distributed scenery runs with tau-normalized columns, the
// truncated statistic and tail mismatch accounting.
ExperimentReport run_theorem3(const ExperimentConfig& config,
                              const ExecOptions& opts = {});

// Log-log slope of the mean self-intersection local time (and its square).
ExperimentReport scaling_alpha(const ExperimentConfig& config,
                               const ExecOptions& opts = {});

// Log-log slope of sum_i E N_n(i)^2 for long-range dependent walks.
ExperimentReport scaling_occupancy(const ExperimentConfig& config,
                                   const ExecOptions& opts = {});

// Geometric subsequence k_m = floor(lambda^m): Monte Carlo variances of the
// centered statistic and partial sums of Var/(eps^2 k^2).
ExperimentReport subsequence_diagnostic(const ExperimentConfig& config,
                                        const ExecOptions& opts = {});

// Variance envelope check: Var(Z) against the analytic scenery constants
// times sum_i Var(N(i)), with the free constant frozen at the smallest n.
ExperimentReport variance_bound_check(const ExperimentConfig& config,
                                      const ExecOptions& opts = {});

// Covariance-decay check against the analytic theta bound (scenery only).
ExperimentReport covariance_bound_report(const ExperimentConfig& config,
                                         const ExecOptions& opts = {});

}  // namespace rwrs
