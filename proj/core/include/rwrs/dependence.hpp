#pragma once

#include <cstdint>
#include <vector>

#include "rwrs/scenery.hpp"

namespace rwrs {

enum class ThetaOrder { Theta12, Theta11 };

// Analytic upper bound on the theta-dependence coefficient at lag j for a
// causal moving-average scenery:
//   (sup_i sigma_i) * ||eps||_q * sum_{k>=j} |a_k|,
// q = 2 for Theta12 and q = 1 for Theta11.  Requires a CausalMA model and
// j >= 1.
double theta_bound_ma(const SceneryModel& model, ThetaOrder order, long long j);

// Lag-indexed bound for any implemented scenery model.  Non-MA models are
// built from independent site streams, so their bound vanishes for j >= 1.
struct ThetaBound {
  SceneryModel model;
  ThetaOrder order = ThetaOrder::Theta12;

  double at(long long j) const;
  bool summable() const;  // finite sum over all lags (true for every
                          // implemented coefficient rule)
};

struct SummabilityResult {
  std::vector<double> partial_sums;  // cumulative over j = 0,1,2,...
  bool converged = false;
  double limit = 0.0;       // last partial sum when converged
  long long lags_used = 0;  // number of terms accumulated
};

// Accumulate partial sums of bound.at(j) until the increment drops below
// tolerance; reports non-convergence when the lag cap is hit first.
SummabilityResult summability_check(const ThetaBound& bound, double tolerance,
                                    long long lag_cap = 1'000'000);

struct CovarianceRow {
  long long lag;
  double empirical_max_abs_cov;  // max over probed base sites
  double standard_error;         // of the reported maximum's estimate
  double bound;                  // sup_i sqrt(Var xi_i) * theta_{1,2}(lag)
  long long argmax_site;
};

// Monte Carlo check that covariance decay respects the analytic bound.
// Centering uses the model's closed-form means, so the estimator is an
// average of products.
std::vector<CovarianceRow> covariance_bound_check(
    const SceneryModel& model, const std::vector<long long>& lags,
    long long samples, std::uint64_t seed,
    const std::vector<long long>& probe_sites);

// Default probe sites: one sigma-profile period (capped), since only the
// sigma profile enters the covariance.
std::vector<long long> default_probe_sites(const SceneryModel& model,
                                           long long cap = 8);

}  // namespace rwrs
