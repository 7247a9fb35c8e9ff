#include "rwrs/scenery.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rwrs {

namespace {

constexpr double kPi = 3.141592653589793238462643383279502884;
constexpr double kCoeffTailMass = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

double draw_innovation(Rng& rng, InnovationDist dist, double pareto_index) {
  switch (dist) {
    case InnovationDist::Gaussian:
      return rng.normal();
    case InnovationDist::Rademacher:
      return rng.coin() ? 1.0 : -1.0;
    case InnovationDist::CenteredExp:
      return rng.exponential() - 1.0;
    case InnovationDist::ParetoCentered:
      return rng.pareto(pareto_index) -
             pareto_index / (pareto_index - 1.0);
    case InnovationDist::DegenerateOne:
      return 1.0;
  }
  return 0.0;
}

double innovation_at_site(const SceneryModel& model, long long site,
                          std::uint64_t seed) {
  Rng rng(derive_seed(seed, seed_domain::site, zigzag64(site)));
  return draw_innovation(rng, model.innovation, model.pareto_index);
}

}  // namespace

double Profile::at(long long i) const {
  switch (kind) {
    case Kind::Zero:
      return 0.0;
    case Kind::Constant:
      return value;
    case Kind::Periodic: {
      const long long r = ((i % period) + period) % period;
      return value + amplitude * std::cos(2.0 * kPi * static_cast<double>(r) /
                                          static_cast<double>(period));
    }
  }
  return 0.0;
}

double Profile::max_abs() const {
  double m = 0.0;
  if (kind == Kind::Periodic) {
    for (long long r = 0; r < period; ++r) m = std::max(m, std::abs(at(r)));
    return m;
  }
  return std::abs(value);
}

double Profile::min_value() const {
  if (kind == Kind::Zero) return 0.0;
  if (kind == Kind::Constant) return value;
  double m = at(0);
  for (long long r = 1; r < period; ++r) m = std::min(m, at(r));
  return m;
}

double Profile::max_value() const {
  if (kind == Kind::Zero) return 0.0;
  if (kind == Kind::Constant) return value;
  double m = at(0);
  for (long long r = 1; r < period; ++r) m = std::max(m, at(r));
  return m;
}

SceneryModel SceneryModel::iid(InnovationDist innovation, Profile mu,
                               Profile sigma) {
  SceneryModel m;
  m.kind = SceneryKind::Iid;
  m.innovation = innovation;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

SceneryModel SceneryModel::causal_ma(double rho, InnovationDist innovation,
                                     Profile mu, Profile sigma) {
  SceneryModel m;
  m.kind = SceneryKind::CausalMA;
  m.coeff_rule = MaCoeffRule::Geometric;
  m.rho = rho;
  m.innovation = innovation;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

SceneryModel SceneryModel::causal_ma_explicit(std::vector<double> coeffs,
                                              InnovationDist innovation,
                                              Profile mu, Profile sigma) {
  SceneryModel m;
  m.kind = SceneryKind::CausalMA;
  m.coeff_rule = MaCoeffRule::Explicit;
  m.explicit_coeffs = std::move(coeffs);
  m.innovation = innovation;
  m.mu = mu;
  m.sigma = sigma;
  return m;
}

SceneryModel SceneryModel::heavy_tail_pareto(double tail_index,
                                             double mean_shift) {
  SceneryModel m;
  m.kind = SceneryKind::HeavyTailIdent;
  m.innovation = InnovationDist::ParetoCentered;
  m.pareto_index = tail_index;
  m.mu = mean_shift == 0.0 ? Profile::zero() : Profile::constant(mean_shift);
  m.sigma = Profile::constant(1.0);
  return m;
}

void SceneryModel::validate() const {
  if (!std::isfinite(mu.max_abs())) {
    throw std::invalid_argument("SceneryModel: mu profile must be bounded");
  }
  if (!(sigma.min_value() > 0.0) || !std::isfinite(sigma.max_value())) {
    throw std::invalid_argument(
        "SceneryModel: sigma profile must satisfy 0 < sigma_min <= sigma_max < inf");
  }
  if (innovation == InnovationDist::ParetoCentered && !(pareto_index > 1.0)) {
    throw std::invalid_argument(
        "SceneryModel: Pareto tail index must be > 1 (finite mean)");
  }
  switch (kind) {
    case SceneryKind::Iid:
      break;
    case SceneryKind::CausalMA:
      if (innovation == InnovationDist::ParetoCentered) {
        throw std::invalid_argument(
            "SceneryModel: CausalMA requires finite-variance innovations");
      }
      if (coeff_rule == MaCoeffRule::Geometric &&
          !(rho >= 0.0 && rho < 1.0)) {
        throw std::invalid_argument("SceneryModel: rho must lie in [0,1)");
      }
      if (coeff_rule == MaCoeffRule::Explicit && explicit_coeffs.empty()) {
        throw std::invalid_argument("SceneryModel: empty coefficient list");
      }
      break;
    case SceneryKind::HeavyTailIdent:
      if (!(pareto_index > 1.0)) {
        throw std::invalid_argument(
            "SceneryModel: heavy-tail index must be > 1 (finite mean)");
      }
      if (mu.kind == Profile::Kind::Periodic ||
          sigma.kind != Profile::Kind::Constant || sigma.value != 1.0) {
        throw std::invalid_argument(
            "SceneryModel: HeavyTailIdent must be identically distributed "
            "(constant mu, sigma == 1)");
      }
      break;
  }
}

std::vector<double> SceneryModel::coefficients() const {
  if (kind != SceneryKind::CausalMA) return {1.0};
  if (coeff_rule == MaCoeffRule::Explicit) return explicit_coeffs;
  if (rho == 0.0) return {1.0};
  // Smallest K with rho^{K+1}/(1-rho) <= tail mass.
  const long long k_max = static_cast<long long>(std::ceil(
      std::log(kCoeffTailMass * (1.0 - rho)) / std::log(rho))) - 1;
  std::vector<double> a(static_cast<std::size_t>(std::max(k_max, 0LL)) + 1);
  double p = 1.0;
  for (auto& c : a) {
    c = p;
    p *= rho;
  }
  return a;
}

double SceneryModel::coeff_abs_tail(long long j) const {
  if (j < 0) j = 0;
  if (kind != SceneryKind::CausalMA) return j == 0 ? 1.0 : 0.0;
  if (coeff_rule == MaCoeffRule::Geometric) {
    if (rho == 0.0) return j == 0 ? 1.0 : 0.0;
    return std::pow(rho, static_cast<double>(j)) / (1.0 - rho);
  }
  double s = 0.0;
  for (std::size_t k = static_cast<std::size_t>(j);
       k < explicit_coeffs.size(); ++k) {
    s += std::abs(explicit_coeffs[k]);
  }
  return s;
}

double SceneryModel::innovation_mean() const {
  return innovation == InnovationDist::DegenerateOne ? 1.0 : 0.0;
}

double SceneryModel::innovation_variance() const {
  switch (innovation) {
    case InnovationDist::Gaussian:
    case InnovationDist::Rademacher:
    case InnovationDist::CenteredExp:
      return 1.0;
    case InnovationDist::DegenerateOne:
      return 0.0;
    case InnovationDist::ParetoCentered: {
      const double b = pareto_index;
      if (b <= 2.0) return kInf;
      return b / ((b - 1.0) * (b - 1.0) * (b - 2.0));
    }
  }
  return 0.0;
}

double SceneryModel::innovation_l1() const {
  switch (innovation) {
    case InnovationDist::Gaussian:
      return std::sqrt(2.0 / kPi);
    case InnovationDist::Rademacher:
      return 1.0;
    case InnovationDist::CenteredExp:
      return 2.0 / std::exp(1.0);
    case InnovationDist::DegenerateOne:
      return 0.0;
    case InnovationDist::ParetoCentered: {
      // E|X - m| = 2 m^{1-b}/(b-1) for X Pareto(b), m = b/(b-1).
      const double b = pareto_index;
      const double m = b / (b - 1.0);
      return 2.0 * std::pow(m, 1.0 - b) / (b - 1.0);
    }
  }
  return 0.0;
}

double SceneryModel::innovation_l2() const {
  const double v = innovation_variance();
  const double m = innovation_mean();
  return std::isfinite(v) ? std::sqrt(v + m * m) : kInf;
}

double SceneryModel::mean_at(long long i) const {
  const double e = innovation_mean();
  if (e == 0.0) return mu.at(i);
  double coeff_sum = 0.0;
  for (double a : coefficients()) coeff_sum += a;
  return mu.at(i) + sigma.at(i) * coeff_sum * e;
}

double SceneryModel::variance_at(long long i) const {
  const double v = innovation_variance();
  if (!std::isfinite(v)) {
    throw std::domain_error("SceneryModel: variance is infinite");
  }
  double sq = 0.0;
  for (double a : coefficients()) sq += a * a;
  const double s = sigma.at(i);
  return s * s * sq * v;
}

double SceneryModel::sup_variance() const {
  const double v = innovation_variance();
  if (!std::isfinite(v)) {
    throw std::domain_error("SceneryModel: variance is infinite");
  }
  double sq = 0.0;
  for (double a : coefficients()) sq += a * a;
  const double s = sup_sigma();
  return s * s * sq * v;
}

double SceneryModel::sup_sigma() const { return sigma.max_value(); }

bool SceneryModel::identically_distributed() const {
  const bool mu_const = mu.kind != Profile::Kind::Periodic;
  const bool sigma_const = sigma.kind != Profile::Kind::Periodic;
  return mu_const && sigma_const;
}

double SceneryModel::tail_prob_geq(double x) const {
  if (kind != SceneryKind::HeavyTailIdent) {
    throw std::domain_error(
        "SceneryModel: closed-form tail only for heavy-tail models");
  }
  const double b = pareto_index;
  const double m = b / (b - 1.0);
  // xi = mu + (X - m), X Pareto(b) with support [1, inf).
  const double t = x + m - mu.at(0);
  if (t <= 1.0) return 1.0;
  return std::pow(t, -b);
}

Scenery gen_scenery(const SceneryModel& model, long long lo, long long hi,
                    std::uint64_t seed) {
  model.validate();
  if (lo > hi) throw std::invalid_argument("gen_scenery: empty window");

  Scenery s;
  s.lo = lo;
  s.hi = hi;
  s.model = model;
  s.values.resize(static_cast<std::size_t>(hi - lo + 1));

  if (model.kind == SceneryKind::HeavyTailIdent) {
    for (long long i = lo; i <= hi; ++i) {
      s.values[static_cast<std::size_t>(i - lo)] =
          model.mu.at(i) + innovation_at_site(model, i, seed);
    }
    return s;
  }

  const std::vector<double> a = model.coefficients();
  const long long k_max = static_cast<long long>(a.size()) - 1;

  // Innovations over [lo - K, hi], keyed by absolute site.
  std::vector<double> eps(static_cast<std::size_t>(hi - (lo - k_max) + 1));
  for (long long i = lo - k_max; i <= hi; ++i) {
    eps[static_cast<std::size_t>(i - (lo - k_max))] =
        innovation_at_site(model, i, seed);
  }

  for (long long i = lo; i <= hi; ++i) {
    double conv = 0.0;
    for (long long k = 0; k <= k_max; ++k) {
      conv += a[static_cast<std::size_t>(k)] *
              eps[static_cast<std::size_t>(i - k - (lo - k_max))];
    }
    s.values[static_cast<std::size_t>(i - lo)] =
        model.mu.at(i) + model.sigma.at(i) * conv;
  }
  return s;
}

std::vector<UniformIntegrabilityRow> uniform_integrability_diagnostic(
    const SceneryModel& model, long long lo, long long hi,
    const std::vector<double>& thresholds, long long samples,
    std::uint64_t seed) {
  model.validate();
  if (samples < 1) {
    throw std::invalid_argument("uniform_integrability_diagnostic: samples >= 1");
  }

  const std::size_t width = static_cast<std::size_t>(hi - lo + 1);
  // acc[t][site]: running sum of xi^2 1{|xi| > M_t}.
  std::vector<std::vector<double>> acc(
      thresholds.size(), std::vector<double>(width, 0.0));

  for (long long r = 0; r < samples; ++r) {
    const Scenery s = gen_scenery(
        model, lo, hi, derive_seed(seed, seed_domain::diagnostic, r));
    for (std::size_t w = 0; w < width; ++w) {
      const double x = s.values[w];
      const double x2 = x * x;
      for (std::size_t t = 0; t < thresholds.size(); ++t) {
        if (std::abs(x) > thresholds[t]) acc[t][w] += x2;
      }
    }
  }

  std::vector<UniformIntegrabilityRow> rows;
  rows.reserve(thresholds.size());
  for (std::size_t t = 0; t < thresholds.size(); ++t) {
    UniformIntegrabilityRow row{thresholds[t], 0.0, lo};
    for (std::size_t w = 0; w < width; ++w) {
      const double est = acc[t][w] / static_cast<double>(samples);
      if (est > row.worst_truncated_second_moment) {
        row.worst_truncated_second_moment = est;
        row.worst_site = lo + static_cast<long long>(w);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace rwrs
