#pragma once

#include <cstdint>
#include <vector>

#include "rwrs/rng.hpp"

namespace rwrs {

enum class SceneryKind { Iid, CausalMA, HeavyTailIdent };

enum class InnovationDist {
  Gaussian,        // N(0,1)
  Rademacher,      // +-1
  CenteredExp,     // Exp(1) - 1
  ParetoCentered,  // Pareto(tail_index) - tail_index/(tail_index-1)
  DegenerateOne,   // constant 1 (diagnostics)
};

// Bounded deterministic site profile.  Periodic uses
// value + amplitude*cos(2*pi*i/period), which is bitwise periodic in i.
struct Profile {
  enum class Kind { Zero, Constant, Periodic };

  Kind kind = Kind::Zero;
  double value = 0.0;
  double amplitude = 0.0;
  long long period = 1;

  static Profile zero() { return {}; }
  static Profile constant(double v) {
    Profile p;
    p.kind = Kind::Constant;
    p.value = v;
    return p;
  }
  static Profile periodic(double amplitude, long long period,
                          double baseline = 0.0) {
    Profile p;
    p.kind = Kind::Periodic;
    p.amplitude = amplitude;
    p.period = period;
    p.value = baseline;
    return p;
  }

  double at(long long i) const;
  double max_abs() const;   // sup_i |profile(i)|
  double min_value() const; // inf_i profile(i), over one period
  double max_value() const;

  bool operator==(const Profile&) const = default;
};

enum class MaCoeffRule { Geometric, Explicit };

// Generative description of the scenery (xi_i):
//   Iid            xi_i = mu_i + sigma_i * eps_i
//   CausalMA       xi_i = mu_i + sigma_i * sum_{k=0..K} a_k eps_{i-k}
//   HeavyTailIdent xi_i = mu_i + eps_i  (identically distributed, sigma == 1)
// Innovations eps are keyed by absolute site index, so realized values do
// not depend on the requested window.
struct SceneryModel {
  SceneryKind kind = SceneryKind::Iid;
  InnovationDist innovation = InnovationDist::Gaussian;
  double pareto_index = 1.5;  // ParetoCentered only

  MaCoeffRule coeff_rule = MaCoeffRule::Geometric;
  double rho = 0.0;                    // Geometric: a_k = rho^k
  std::vector<double> explicit_coeffs; // Explicit rule

  Profile mu = Profile::zero();
  Profile sigma = Profile::constant(1.0);

  static SceneryModel iid(InnovationDist innovation,
                          Profile mu = Profile::zero(),
                          Profile sigma = Profile::constant(1.0));
  static SceneryModel causal_ma(double rho, InnovationDist innovation,
                                Profile mu = Profile::zero(),
                                Profile sigma = Profile::constant(1.0));
  static SceneryModel causal_ma_explicit(std::vector<double> coeffs,
                                         InnovationDist innovation,
                                         Profile mu = Profile::zero(),
                                         Profile sigma = Profile::constant(1.0));
  static SceneryModel heavy_tail_pareto(double tail_index,
                                        double mean_shift = 0.0);

  void validate() const;

  // Truncated coefficient list a_0..a_K with sum_{k>K}|a_k| <= 1e-12.
  // Iid and HeavyTailIdent reduce to {1}.
  std::vector<double> coefficients() const;

  // sum_{k>=j} |a_k| in closed form where the rule allows.
  double coeff_abs_tail(long long j) const;

  double innovation_mean() const;
  double innovation_variance() const;  // +inf for ParetoCentered with index<=2
  double innovation_l1() const;        // E|eps - E eps|
  double innovation_l2() const;        // sqrt(E eps^2), +inf if undefined

  // E xi_i = mu_i + sigma_i * (sum a_k) * E eps, in closed form.
  double mean_at(long long i) const;
  // Var xi_i = sigma_i^2 * (sum a_k^2) * Var eps; throws if infinite.
  double variance_at(long long i) const;
  double sup_variance() const;
  double sup_sigma() const;

  // Marginal law independent of the site index?
  bool identically_distributed() const;
  // P(xi_0 >= x), available in closed form for heavy-tail models.
  double tail_prob_geq(double x) const;

  bool operator==(const SceneryModel&) const = default;
};

struct Scenery {
  long long lo = 0;
  long long hi = -1;  // inclusive window [lo, hi]
  std::vector<double> values;
  SceneryModel model;

  bool covers(long long a, long long b) const { return lo <= a && b <= hi; }
  double at(long long i) const {
    return values[static_cast<std::size_t>(i - lo)];
  }
};

Scenery gen_scenery(const SceneryModel& model, long long lo, long long hi,
                    std::uint64_t seed);

// Worst-site truncated second moment sup_i E[xi_i^2 1{|xi_i| > M}] estimated
// by Monte Carlo, one row per threshold.
struct UniformIntegrabilityRow {
  double threshold;
  double worst_truncated_second_moment;
  long long worst_site;
};

std::vector<UniformIntegrabilityRow> uniform_integrability_diagnostic(
    const SceneryModel& model, long long lo, long long hi,
    const std::vector<double>& thresholds, long long samples,
    std::uint64_t seed);

}  // namespace rwrs
