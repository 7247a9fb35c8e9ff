#include "rwrs/dependence.hpp"

#include <cmath>
#include <stdexcept>

namespace rwrs {

namespace {

double innovation_norm(const SceneryModel& model, ThetaOrder order) {
  return order == ThetaOrder::Theta12 ? model.innovation_l2()
                                      : model.innovation_l1();
}

}  // namespace

double theta_bound_ma(const SceneryModel& model, ThetaOrder order,
                      long long j) {
  if (model.kind != SceneryKind::CausalMA) {
    throw std::invalid_argument("theta_bound_ma: model is not CausalMA");
  }
  if (j < 1) throw std::invalid_argument("theta_bound_ma: lag must be >= 1");
  return model.sup_sigma() * innovation_norm(model, order) *
         model.coeff_abs_tail(j);
}

double ThetaBound::at(long long j) const {
  if (j < 0) throw std::invalid_argument("ThetaBound: lag must be >= 0");
  if (model.kind == SceneryKind::CausalMA) {
    return model.sup_sigma() * innovation_norm(model, order) *
           model.coeff_abs_tail(j);
  }
  // Independent site streams: only the lag-0 term is nonzero.
  if (j >= 1) return 0.0;
  return model.sup_sigma() * innovation_norm(model, order);
}

bool ThetaBound::summable() const {
  // Geometric tails and finite coefficient lists both sum; so do the
  // independent models.
  return true;
}

SummabilityResult summability_check(const ThetaBound& bound, double tolerance,
                                    long long lag_cap) {
  if (!(tolerance > 0.0)) {
    throw std::invalid_argument("summability_check: tolerance must be > 0");
  }
  SummabilityResult res;
  double total = 0.0;
  for (long long j = 0; j <= lag_cap; ++j) {
    const double term = bound.at(j);
    total += term;
    res.partial_sums.push_back(total);
    res.lags_used = j + 1;
    if (j >= 1 && term < tolerance) {
      res.converged = true;
      res.limit = total;
      return res;
    }
  }
  // Cap reached before the increments dropped below tolerance: report the
  // partial sums without asserting a limit.
  res.converged = false;
  res.limit = 0.0;
  return res;
}

std::vector<long long> default_probe_sites(const SceneryModel& model,
                                           long long cap) {
  const long long period =
      model.sigma.kind == Profile::Kind::Periodic ? model.sigma.period : 1;
  std::vector<long long> sites;
  for (long long i = 0; i < std::min(period, cap); ++i) sites.push_back(i);
  return sites;
}

std::vector<CovarianceRow> covariance_bound_check(
    const SceneryModel& model, const std::vector<long long>& lags,
    long long samples, std::uint64_t seed,
    const std::vector<long long>& probe_sites) {
  model.validate();
  if (samples < 2) {
    throw std::invalid_argument("covariance_bound_check: samples must be >= 2");
  }
  if (lags.empty() || probe_sites.empty()) {
    throw std::invalid_argument("covariance_bound_check: empty lags or probes");
  }

  long long max_lag = 0, min_probe = probe_sites[0], max_probe = probe_sites[0];
  for (long long j : lags) {
    if (j < 1) {
      throw std::invalid_argument("covariance_bound_check: lags must be >= 1");
    }
    max_lag = std::max(max_lag, j);
  }
  for (long long i : probe_sites) {
    min_probe = std::min(min_probe, i);
    max_probe = std::max(max_probe, i);
  }

  const ThetaBound theta{model, ThetaOrder::Theta12};
  const double sup_std = std::sqrt(model.sup_variance());

  // Accumulate centered products per (probe, lag).
  const std::size_t cells = probe_sites.size() * lags.size();
  std::vector<double> sum(cells, 0.0), sum_sq(cells, 0.0);

  for (long long r = 0; r < samples; ++r) {
    const Scenery s =
        gen_scenery(model, min_probe, max_probe + max_lag,
                    derive_seed(seed, seed_domain::diagnostic, r));
    for (std::size_t p = 0; p < probe_sites.size(); ++p) {
      const long long i = probe_sites[p];
      const double xi = s.at(i) - model.mean_at(i);
      for (std::size_t l = 0; l < lags.size(); ++l) {
        const long long j = i + lags[l];
        const double xj = s.at(j) - model.mean_at(j);
        const double prod = xi * xj;
        sum[p * lags.size() + l] += prod;
        sum_sq[p * lags.size() + l] += prod * prod;
      }
    }
  }

  std::vector<CovarianceRow> rows;
  rows.reserve(lags.size());
  const double inv_n = 1.0 / static_cast<double>(samples);
  for (std::size_t l = 0; l < lags.size(); ++l) {
    CovarianceRow row{lags[l], -1.0, 0.0, sup_std * theta.at(lags[l]),
                      probe_sites[0]};
    for (std::size_t p = 0; p < probe_sites.size(); ++p) {
      const double mean = sum[p * lags.size() + l] * inv_n;
      const double var =
          std::max(0.0, sum_sq[p * lags.size() + l] * inv_n - mean * mean);
      const double se =
          std::sqrt(var / static_cast<double>(samples - 1));
      if (std::abs(mean) > row.empirical_max_abs_cov) {
        row.empirical_max_abs_cov = std::abs(mean);
        row.standard_error = se;
        row.argmax_site = probe_sites[p];
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rwrs
