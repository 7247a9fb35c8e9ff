#include <gtest/gtest.h>

#include <cmath>

#include "rwrs/dependence.hpp"
#include "rwrs/rng.hpp"

using namespace rwrs;

namespace {

SceneryModel geometric_ma(double rho) {
  return SceneryModel::causal_ma(rho, InnovationDist::Gaussian);
}

}  // namespace

TEST(ThetaBoundMa, GeometricTailValues) {
  const auto model = geometric_ma(0.5);
  // sup sigma = 1, ||eps||_2 = 1, sum_{k>=2} 0.5^k = 0.5.
  EXPECT_DOUBLE_EQ(theta_bound_ma(model, ThetaOrder::Theta12, 2), 0.5);
  EXPECT_DOUBLE_EQ(theta_bound_ma(model, ThetaOrder::Theta12, 1), 1.0);
}

TEST(ThetaBoundMa, MaZeroVanishes) {
  const auto ma0 =
      SceneryModel::causal_ma_explicit({1.0}, InnovationDist::Gaussian);
  for (long long j = 1; j <= 5; ++j) {
    EXPECT_DOUBLE_EQ(theta_bound_ma(ma0, ThetaOrder::Theta12, j), 0.0);
    EXPECT_DOUBLE_EQ(theta_bound_ma(ma0, ThetaOrder::Theta11, j), 0.0);
  }
}

TEST(ThetaBoundMa, RejectsNonMaModelsAndBadLags) {
  const auto iid = SceneryModel::iid(InnovationDist::Gaussian);
  EXPECT_THROW(theta_bound_ma(iid, ThetaOrder::Theta12, 1),
               std::invalid_argument);
  EXPECT_THROW(theta_bound_ma(geometric_ma(0.5), ThetaOrder::Theta12, 0),
               std::invalid_argument);
}

TEST(ThetaBoundMa, Theta11UsesL1Norm) {
  const auto model = geometric_ma(0.5);
  const double l1 = std::sqrt(2.0 / M_PI);  // E|N(0,1)|
  EXPECT_NEAR(theta_bound_ma(model, ThetaOrder::Theta11, 1), l1, 1e-12);
}

TEST(ThetaBound, MonotoneAndVanishing) {
  for (double rho : {0.3, 0.6, 0.9}) {
    const ThetaBound bound{geometric_ma(rho), ThetaOrder::Theta12};
    double prev = bound.at(1);
    for (long long j = 2; j <= 60; ++j) {
      const double cur = bound.at(j);
      EXPECT_LE(cur, prev) << "rho=" << rho << " j=" << j;
      prev = cur;
    }
    EXPECT_LT(bound.at(500), 1e-10);
    EXPECT_TRUE(bound.summable());
  }
  // Independent models vanish beyond lag zero.
  const ThetaBound iid{SceneryModel::iid(InnovationDist::Gaussian),
                       ThetaOrder::Theta12};
  EXPECT_DOUBLE_EQ(iid.at(1), 0.0);
  EXPECT_GT(iid.at(0), 0.0);
}

TEST(Summability, GeometricClosedForm) {
  const ThetaBound bound{geometric_ma(0.5), ThetaOrder::Theta12};
  const auto res = summability_check(bound, 1e-12);
  ASSERT_TRUE(res.converged);
  // sum_j rho^j/(1-rho) = 1/(1-rho)^2 = 4.
  EXPECT_NEAR(res.limit, 4.0, 1e-10);
  // Partial sums are the cumulative bounds.
  EXPECT_NEAR(res.partial_sums[0], 2.0, 1e-12);
  EXPECT_NEAR(res.partial_sums[1], 3.0, 1e-12);
}

TEST(Summability, MaZeroKeepsOnlyLagZero) {
  const auto ma0 =
      SceneryModel::causal_ma_explicit({1.0}, InnovationDist::Gaussian);
  const auto res =
      summability_check(ThetaBound{ma0, ThetaOrder::Theta12}, 1e-12);
  ASSERT_TRUE(res.converged);
  EXPECT_DOUBLE_EQ(res.limit, 1.0);
}

TEST(Summability, ExplicitQuadraticCoefficients) {
  // a_k = 1/(k+1)^2 truncated; finite lists always converge, and the limit
  // matches an independent double sum.
  std::vector<double> coeffs(200);
  for (std::size_t k = 0; k < coeffs.size(); ++k) {
    coeffs[k] = 1.0 / ((k + 1.0) * (k + 1.0));
  }
  const auto model = SceneryModel::causal_ma_explicit(
      std::move(coeffs), InnovationDist::Gaussian);
  const ThetaBound bound{model, ThetaOrder::Theta12};
  const auto res = summability_check(bound, 1e-15, 500);
  ASSERT_TRUE(res.converged);

  double expected = 0.0;
  for (long long j = 0; j < 220; ++j) expected += model.coeff_abs_tail(j);
  EXPECT_NEAR(res.limit, expected, 1e-10);
}

TEST(Summability, ReportsNonConvergenceAtCap) {
  const ThetaBound bound{geometric_ma(0.999999), ThetaOrder::Theta12};
  const auto res = summability_check(bound, 1e-12, 10);
  EXPECT_FALSE(res.converged);
  EXPECT_EQ(res.lags_used, 11);
}

TEST(CovarianceCheck, IidStaysNearZero) {
  const auto model = SceneryModel::iid(InnovationDist::Gaussian);
  const auto rows = covariance_bound_check(model, {1, 2, 3, 4, 5}, 8000, 91,
                                           default_probe_sites(model));
  for (const auto& row : rows) {
    EXPECT_LE(row.empirical_max_abs_cov, row.bound + 3.0 * row.standard_error)
        << "lag " << row.lag;
    EXPECT_DOUBLE_EQ(row.bound, 0.0);
  }
}

TEST(CovarianceCheck, GeometricMaMatchesClosedForm) {
  // Cov(xi_i, xi_{i+1}) = rho/(1-rho^2) = 2/3 at rho = 0.5 (unit sigma).
  const auto model = geometric_ma(0.5);
  const auto rows = covariance_bound_check(model, {1, 2}, 40000, 12,
                                           default_probe_sites(model));
  EXPECT_NEAR(rows[0].empirical_max_abs_cov, 2.0 / 3.0,
              4.0 * rows[0].standard_error);
  EXPECT_NEAR(rows[1].empirical_max_abs_cov, 1.0 / 3.0,
              4.0 * rows[1].standard_error);
}

TEST(CovarianceCheck, BoundColumnIsInternallyConsistent) {
  const auto model = SceneryModel::causal_ma(
      0.5, InnovationDist::CenteredExp, Profile::zero(),
      Profile::periodic(0.25, 3, 1.0));
  const ThetaBound theta{model, ThetaOrder::Theta12};
  const double sup_std = std::sqrt(model.sup_variance());
  const auto rows = covariance_bound_check(model, {1, 3, 7}, 4000, 8,
                                           default_probe_sites(model));
  for (const auto& row : rows) {
    EXPECT_DOUBLE_EQ(row.bound, sup_std * theta.at(row.lag));
  }
}

TEST(CovarianceCheck, RespectedAcrossLagsForShippedModels) {
  const SceneryModel models[] = {
      SceneryModel::iid(InnovationDist::Gaussian),
      SceneryModel::iid(InnovationDist::Rademacher),
      geometric_ma(0.5),
      SceneryModel::causal_ma(0.5, InnovationDist::CenteredExp,
                              Profile::periodic(1.0, 7),
                              Profile::periodic(0.25, 3, 1.0)),
  };
  std::vector<long long> lags;
  for (long long j = 1; j <= 20; ++j) lags.push_back(j);
  for (const auto& model : models) {
    const auto rows = covariance_bound_check(model, lags, 12000, 57,
                                             default_probe_sites(model));
    for (const auto& row : rows) {
      EXPECT_LE(row.empirical_max_abs_cov,
                row.bound + 3.0 * row.standard_error)
          << "lag " << row.lag;
    }
  }
}

TEST(CovarianceCheck, LipschitzTransformsRespectSameBound) {
  // Positive and negative parts of the centered field are 1-Lipschitz
  // images; their covariances obey the untransformed bound.
  const auto model = geometric_ma(0.5);
  const ThetaBound theta{model, ThetaOrder::Theta12};
  const double sup_std = std::sqrt(model.sup_variance());
  const int samples = 20000;
  const long long max_lag = 6;

  std::vector<double> sum_p(max_lag + 1, 0.0), sum_m(max_lag + 1, 0.0);
  std::vector<double> mean_p(max_lag + 1, 0.0), mean_m(max_lag + 1, 0.0);
  std::vector<std::vector<double>> plus(static_cast<std::size_t>(samples)),
      minus(static_cast<std::size_t>(samples));
  for (int r = 0; r < samples; ++r) {
    const auto s = gen_scenery(model, 0, max_lag,
                               derive_seed(71, seed_domain::diagnostic, r));
    plus[r].resize(max_lag + 1);
    minus[r].resize(max_lag + 1);
    for (long long i = 0; i <= max_lag; ++i) {
      const double centered = s.at(i) - model.mean_at(i);
      plus[r][i] = std::max(0.0, centered);
      minus[r][i] = std::max(0.0, -centered);
      mean_p[i] += plus[r][i];
      mean_m[i] += minus[r][i];
    }
  }
  for (long long i = 0; i <= max_lag; ++i) {
    mean_p[i] /= samples;
    mean_m[i] /= samples;
  }
  for (long long j = 1; j <= max_lag; ++j) {
    double cov_p = 0.0, cov_m = 0.0, var_term = 0.0;
    for (int r = 0; r < samples; ++r) {
      cov_p += (plus[r][0] - mean_p[0]) * (plus[r][j] - mean_p[j]);
      cov_m += (minus[r][0] - mean_m[0]) * (minus[r][j] - mean_m[j]);
      const double pr = (plus[r][0] - mean_p[0]) * (plus[r][j] - mean_p[j]);
      var_term += pr * pr;
    }
    cov_p /= samples;
    cov_m /= samples;
    var_term /= samples;
    const double se =
        std::sqrt(std::max(var_term - cov_p * cov_p, 0.0) / samples);
    const double bound = sup_std * theta.at(j);
    EXPECT_LE(std::abs(cov_p), bound + 4.0 * se) << "lag " << j;
    EXPECT_LE(std::abs(cov_m), bound + 4.0 * se) << "lag " << j;
  }
}
