#include <gtest/gtest.h>

#include <cmath>

#include "rwrs/rng.hpp"
#include "rwrs/scenery.hpp"

using namespace rwrs;

TEST(Profile, PeriodicValues) {
  const Profile p = Profile::periodic(1.0, 2);
  EXPECT_DOUBLE_EQ(p.at(0), 1.0);
  EXPECT_DOUBLE_EQ(p.at(1), -1.0);
  // Bitwise periodic, including negative sites.
  const Profile q = Profile::periodic(0.7, 7, 0.3);
  for (long long i = -21; i <= 21; ++i) {
    EXPECT_EQ(q.at(i), q.at(i + 7)) << i;
  }
}

TEST(Profile, Extremes) {
  const Profile p = Profile::periodic(0.25, 3, 1.0);
  EXPECT_GT(p.min_value(), 0.7);
  EXPECT_LE(p.max_value(), 1.25);
  EXPECT_DOUBLE_EQ(Profile::constant(-2.0).min_value(), -2.0);
  EXPECT_DOUBLE_EQ(Profile::zero().max_abs(), 0.0);
}

TEST(Scenery, DegenerateInnovationGivesConstantField) {
  const auto model = SceneryModel::iid(InnovationDist::DegenerateOne);
  const auto s = gen_scenery(model, -5, 5, 99);
  for (double v : s.values) EXPECT_DOUBLE_EQ(v, 1.0);
}

TEST(Scenery, MaZeroReducesToIid) {
  const auto iid = SceneryModel::iid(InnovationDist::Gaussian);
  const auto ma0 = SceneryModel::causal_ma(0.0, InnovationDist::Gaussian);
  const auto a = gen_scenery(iid, -10, 10, 7);
  const auto b = gen_scenery(ma0, -10, 10, 7);
  EXPECT_EQ(a.values, b.values);

  const auto ma0_explicit = SceneryModel::causal_ma_explicit(
      {1.0}, InnovationDist::Gaussian);
  const auto c = gen_scenery(ma0_explicit, -10, 10, 7);
  EXPECT_EQ(a.values, c.values);
}

TEST(Scenery, WindowGrowthConsistency) {
  const auto model = SceneryModel::causal_ma(
      0.5, InnovationDist::Gaussian, Profile::periodic(1.0, 7),
      Profile::periodic(0.25, 3, 1.0));
  const auto small = gen_scenery(model, -4, 4, 2024);
  const auto large = gen_scenery(model, -8, 8, 2024);
  for (long long i = -4; i <= 4; ++i) {
    EXPECT_EQ(small.at(i), large.at(i)) << "site " << i;
  }
}

TEST(Scenery, IndependentOfWalkSeedDomain) {
  // Same numeric seed put through the walk domain must not influence values.
  const auto model = SceneryModel::iid(InnovationDist::Gaussian);
  const auto a = gen_scenery(model, -3, 3, 5);
  const auto b = gen_scenery(model, -3, 3, 5);
  EXPECT_EQ(a.values, b.values);
}

TEST(Scenery, MeanShiftCommutesExactly) {
  // Zero -> Constant(c): both paths evaluate fl(c + noise).
  const auto base = SceneryModel::causal_ma(0.5, InnovationDist::Gaussian);
  auto shifted_model = base;
  shifted_model.mu = Profile::constant(1.75);
  const auto plain = gen_scenery(base, -20, 20, 3);
  const auto shifted = gen_scenery(shifted_model, -20, 20, 3);
  for (std::size_t i = 0; i < plain.values.size(); ++i) {
    EXPECT_EQ(shifted.values[i], 1.75 + plain.values[i]);
  }

  // Dyadic configuration: every quantity is exactly representable, so the
  // shift is exact from any constant baseline.
  const auto dyadic_a = SceneryModel::causal_ma(
      0.5, InnovationDist::Rademacher, Profile::constant(0.25));
  auto dyadic_b = dyadic_a;
  dyadic_b.mu = Profile::constant(0.75);
  const auto a = gen_scenery(dyadic_a, -16, 16, 11);
  const auto b = gen_scenery(dyadic_b, -16, 16, 11);
  for (std::size_t i = 0; i < a.values.size(); ++i) {
    EXPECT_EQ(b.values[i], a.values[i] + 0.5);
  }
}

TEST(SceneryMean, ClosedForm) {
  const auto gauss3 =
      SceneryModel::iid(InnovationDist::Gaussian, Profile::constant(3.0));
  EXPECT_DOUBLE_EQ(gauss3.mean_at(0), 3.0);
  EXPECT_DOUBLE_EQ(gauss3.mean_at(-17), 3.0);

  const auto centered = SceneryModel::iid(InnovationDist::Gaussian);
  EXPECT_DOUBLE_EQ(centered.mean_at(12), 0.0);

  const auto periodic = SceneryModel::iid(InnovationDist::CenteredExp,
                                          Profile::periodic(1.0, 2));
  EXPECT_DOUBLE_EQ(periodic.mean_at(0), 1.0);
  EXPECT_DOUBLE_EQ(periodic.mean_at(1), -1.0);

  // Non-centered innovation picks up the coefficient sum.
  const auto degen = SceneryModel::causal_ma_explicit(
      {1.0, 0.5}, InnovationDist::DegenerateOne, Profile::constant(2.0));
  EXPECT_DOUBLE_EQ(degen.mean_at(4), 2.0 + 1.5);
}

TEST(SceneryMean, MatchesEmpiricalForMa) {
  const auto model = SceneryModel::causal_ma(
      0.5, InnovationDist::Gaussian, Profile::periodic(1.0, 7));
  double sum = 0.0;
  const int replicas = 20000;
  for (int r = 0; r < replicas; ++r) {
    const auto s = gen_scenery(model, 3, 3,
                               derive_seed(17, seed_domain::scenery, r));
    sum += s.at(3);
  }
  const double sd = std::sqrt(model.variance_at(3));
  EXPECT_NEAR(sum / replicas, model.mean_at(3),
              4.0 * sd / std::sqrt(static_cast<double>(replicas)));
}

TEST(SceneryVariance, GeometricMaClosedForm) {
  // Var = sigma^2 / (1 - rho^2) for unit-variance innovations.
  const auto model = SceneryModel::causal_ma(0.5, InnovationDist::Gaussian);
  EXPECT_NEAR(model.variance_at(0), 1.0 / (1.0 - 0.25), 1e-10);

  double sum = 0.0, sum_sq = 0.0;
  const int replicas = 100000;
  for (int r = 0; r < replicas; ++r) {
    const auto s = gen_scenery(model, 0, 0,
                               derive_seed(23, seed_domain::scenery, r));
    sum += s.at(0);
    sum_sq += s.at(0) * s.at(0);
  }
  const double mean = sum / replicas;
  const double var = sum_sq / replicas - mean * mean;
  // Relative concentration of a sample variance at 1e5 draws.
  const double rel_se = std::sqrt(2.0 / static_cast<double>(replicas));
  EXPECT_NEAR(var, model.variance_at(0), 3.0 * rel_se * model.variance_at(0));
}

TEST(SceneryCoefficients, GeometricTruncationTailMass) {
  for (double rho : {0.3, 0.5, 0.9}) {
    const auto model = SceneryModel::causal_ma(rho, InnovationDist::Gaussian);
    const auto coeffs = model.coefficients();
    const double tail =
        std::pow(rho, static_cast<double>(coeffs.size())) / (1.0 - rho);
    EXPECT_LE(tail, 1e-12) << "rho=" << rho;
    EXPECT_DOUBLE_EQ(coeffs[0], 1.0);
    EXPECT_DOUBLE_EQ(coeffs[1], rho);
  }
}

TEST(SceneryValidation, RejectsInvalidModels) {
  EXPECT_THROW(SceneryModel::heavy_tail_pareto(1.0).validate(),
               std::invalid_argument);
  EXPECT_THROW(SceneryModel::heavy_tail_pareto(0.5).validate(),
               std::invalid_argument);

  auto bad_sigma = SceneryModel::iid(InnovationDist::Gaussian);
  bad_sigma.sigma = Profile::constant(0.0);
  EXPECT_THROW(bad_sigma.validate(), std::invalid_argument);
  bad_sigma.sigma = Profile::periodic(2.0, 3, 1.0);  // dips below zero
  EXPECT_THROW(bad_sigma.validate(), std::invalid_argument);

  auto heavy_ma = SceneryModel::causal_ma(0.5, InnovationDist::ParetoCentered);
  EXPECT_THROW(heavy_ma.validate(), std::invalid_argument);

  auto periodic_heavy = SceneryModel::heavy_tail_pareto(1.5);
  periodic_heavy.mu = Profile::periodic(1.0, 2);
  EXPECT_THROW(periodic_heavy.validate(), std::invalid_argument);

  EXPECT_THROW(gen_scenery(SceneryModel::iid(InnovationDist::Gaussian), 4, 2, 0),
               std::invalid_argument);
}

TEST(SceneryHeavyTail, TailProbability) {
  const auto model = SceneryModel::heavy_tail_pareto(1.5);
  // xi = X - 3 with X Pareto(1.5): P(xi >= x) = (x+3)^{-1.5} for x+3 >= 1.
  EXPECT_NEAR(model.tail_prob_geq(1021.0), std::pow(1024.0, -1.5), 1e-18);
  EXPECT_DOUBLE_EQ(model.tail_prob_geq(-5.0), 1.0);
  EXPECT_THROW(SceneryModel::iid(InnovationDist::Gaussian).tail_prob_geq(1.0),
               std::domain_error);

  // Empirical tail at a desk threshold.
  const double x = 5.0;
  int hits = 0;
  const int replicas = 200000;
  for (int r = 0; r < replicas; ++r) {
    const auto s = gen_scenery(model, 0, 0,
                               derive_seed(31, seed_domain::scenery, r));
    if (s.at(0) >= x) ++hits;
  }
  const double p = model.tail_prob_geq(x);
  EXPECT_NEAR(static_cast<double>(hits) / replicas, p,
              4.0 * std::sqrt(p * (1 - p) / replicas));
}

TEST(UniformIntegrability, DegenerateAndGaussian) {
  const auto degenerate = SceneryModel::iid(InnovationDist::DegenerateOne);
  const auto rows_d = uniform_integrability_diagnostic(
      degenerate, -2, 2, {2.0}, 2000, 1);
  EXPECT_DOUBLE_EQ(rows_d[0].worst_truncated_second_moment, 0.0);

  const auto gaussian = SceneryModel::iid(InnovationDist::Gaussian);
  const auto rows_g = uniform_integrability_diagnostic(
      gaussian, -2, 2, {0.0, 1.0, 2.0, 4.0}, 20000, 2);
  // Threshold 0 keeps the full second moment (E xi^2 = 1, Var(xi^2) = 2);
  // the max over 5 sites sits slightly above 1, within a few SE.
  const double se = std::sqrt(2.0 / 20000.0);
  EXPECT_NEAR(rows_g[0].worst_truncated_second_moment, 1.0, 4.0 * se);
  // Non-increasing in the threshold, vanishing for large M.
  for (std::size_t t = 1; t < rows_g.size(); ++t) {
    EXPECT_LE(rows_g[t].worst_truncated_second_moment,
              rows_g[t - 1].worst_truncated_second_moment);
  }
  EXPECT_LT(rows_g.back().worst_truncated_second_moment, 0.05);
}
