#include "rwrs/walk.hpp"

#include <bit>
#include <cmath>
#include <complex>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "rwrs/fft.hpp"

namespace rwrs {

WalkModel WalkModel::rademacher() {
  WalkModel m;
  m.kind = WalkKind::IidLattice;
  m.increment_dist = IncrementDist::Rademacher;
  m.sigma2 = 1.0;
  return m;
}

WalkModel WalkModel::lazy_rademacher(double p_stay) {
  WalkModel m;
  m.kind = WalkKind::IidLattice;
  m.increment_dist = IncrementDist::LazyRademacher;
  m.p_stay = p_stay;
  m.sigma2 = 1.0 - p_stay;
  return m;
}

WalkModel WalkModel::uniform_lattice(std::vector<int> support) {
  WalkModel m;
  m.kind = WalkKind::IidLattice;
  m.increment_dist = IncrementDist::UniformLattice;
  double sq = 0.0;
  for (int v : support) sq += static_cast<double>(v) * v;
  m.sigma2 = support.empty() ? 0.0 : sq / static_cast<double>(support.size());
  m.support = std::move(support);
  return m;
}

WalkModel WalkModel::fgn(double hurst) {
  WalkModel m;
  m.kind = WalkKind::FgnGaussian;
  m.hurst = hurst;
  m.sigma2 = 1.0;  // r(0) = 1
  return m;
}

void WalkModel::validate() const {
  if (kind == WalkKind::FgnGaussian) {
    if (!(hurst > 0.0 && hurst < 1.0)) {
      throw std::invalid_argument("WalkModel: hurst must lie in (0,1)");
    }
    return;
  }
  switch (increment_dist) {
    case IncrementDist::Rademacher:
      break;
    case IncrementDist::LazyRademacher:
      if (!(p_stay >= 0.0 && p_stay < 1.0)) {
        throw std::invalid_argument("WalkModel: p_stay must lie in [0,1)");
      }
      break;
    case IncrementDist::UniformLattice: {
      if (support.empty()) {
        throw std::invalid_argument("WalkModel: empty lattice support");
      }
      long long sum = std::accumulate(support.begin(), support.end(), 0LL);
      if (sum != 0) {
        throw std::invalid_argument(
            "WalkModel: lattice increments must have mean zero");
      }
      break;
    }
  }
  if (!(sigma2 > 0.0)) {
    throw std::invalid_argument("WalkModel: increment variance must be > 0");
  }
}

double WalkModel::partial_sum_variance(long long n) const {
  if (n <= 0) return 0.0;
  if (kind == WalkKind::FgnGaussian) {
    return std::pow(static_cast<double>(n), 2.0 * hurst);
  }
  return sigma2 * static_cast<double>(n);
}

long long WalkModel::max_step() const {
  switch (kind) {
    case WalkKind::FgnGaussian:
      return 0;
    case WalkKind::IidLattice:
      switch (increment_dist) {
        case IncrementDist::Rademacher:
        case IncrementDist::LazyRademacher:
          return 1;
        case IncrementDist::UniformLattice: {
          long long m = 0;
          for (int v : support) m = std::max<long long>(m, std::llabs(v));
          return m;
        }
      }
  }
  return 0;
}

WalkPath gen_iid_walk(const WalkModel& model, long long n, std::uint64_t seed) {
  model.validate();
  if (model.kind != WalkKind::IidLattice) {
    throw std::invalid_argument("gen_iid_walk: model is not IidLattice");
  }
  if (n < 0) throw std::invalid_argument("gen_iid_walk: n must be >= 0");

  WalkPath path;
  path.sites.resize(static_cast<std::size_t>(n) + 1);
  path.sites[0] = 0;

  Rng rng(seed);
  long long pos = 0;
  for (long long k = 1; k <= n; ++k) {
    long long step = 0;
    switch (model.increment_dist) {
      case IncrementDist::Rademacher:
        step = rng.coin() ? 1 : -1;
        break;
      case IncrementDist::LazyRademacher:
        if (rng.uniform01() < model.p_stay) {
          step = 0;
        } else {
          step = rng.coin() ? 1 : -1;
        }
        break;
      case IncrementDist::UniformLattice:
        step = model.support[rng.bounded(model.support.size())];
        break;
    }
    pos += step;
    path.sites[static_cast<std::size_t>(k)] = pos;
  }
  return path;
}

double fgn_autocovariance(double hurst, long long lag) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::domain_error("fgn_autocovariance: hurst must lie in (0,1)");
  }
  if (lag < 0) lag = -lag;
  const double h2 = 2.0 * hurst;
  const double k = static_cast<double>(lag);
  return 0.5 * (std::pow(k + 1.0, h2) - 2.0 * std::pow(k, h2) +
                std::pow(std::abs(k - 1.0), h2));
}

FgnSampler::FgnSampler(double hurst, long long n_increments)
    : hurst_(hurst), n_(n_increments) {
  if (!(hurst > 0.0 && hurst < 1.0)) {
    throw std::domain_error("FgnSampler: hurst must lie in (0,1)");
  }
  if (n_ < 1) throw std::invalid_argument("FgnSampler: need n >= 1");

  ring_ = std::bit_ceil(static_cast<std::size_t>(2 * n_));
  const std::size_t half = ring_ / 2;

  // First row of the circulant extension of the covariance sequence.
  std::vector<std::complex<double>> spec(ring_);
  for (std::size_t j = 0; j <= half; ++j) {
    spec[j] = fgn_autocovariance(hurst_, static_cast<long long>(j));
  }
  for (std::size_t j = half + 1; j < ring_; ++j) {
    spec[j] = spec[ring_ - j];
  }
  fft_radix2(spec, false);

  min_eigenvalue_ = spec[0].real();
  for (std::size_t j = 0; j < ring_; ++j) {
    min_eigenvalue_ = std::min(min_eigenvalue_, spec[j].real());
  }
  if (min_eigenvalue_ < -kEigTolerance) {
    std::ostringstream msg;
    msg << "FgnSampler: circulant embedding failed (min eigenvalue "
        << min_eigenvalue_ << " < -" << kEigTolerance << " at H=" << hurst_
        << ", n=" << n_ << ", ring=" << ring_ << ")";
    throw std::runtime_error(msg.str());
  }

  amplitude_.resize(ring_);
  const double inv_sqrt_ring = 1.0 / std::sqrt(static_cast<double>(ring_));
  for (std::size_t j = 0; j < ring_; ++j) {
    const double lambda = std::max(spec[j].real(), 0.0);
    // Interior frequencies split variance between real and imaginary parts.
    const double scale = (j == 0 || j == half) ? 1.0 : 0.5;
    amplitude_[j] = std::sqrt(lambda * scale) * inv_sqrt_ring;
  }
}

std::vector<double> FgnSampler::increments(std::uint64_t seed) const {
  const std::size_t half = ring_ / 2;
  std::vector<std::complex<double>> spec(ring_);

  Rng rng(seed);
  spec[0] = amplitude_[0] * rng.normal();
  for (std::size_t j = 1; j < half; ++j) {
    const auto [u, v] = rng.normal_pair();
    spec[j] = std::complex<double>(amplitude_[j] * u, amplitude_[j] * v);
    spec[ring_ - j] = std::conj(spec[j]);
  }
  spec[half] = amplitude_[half] * rng.normal();

  fft_radix2(spec, false);

  std::vector<double> x(static_cast<std::size_t>(n_));
  for (std::size_t k = 0; k < x.size(); ++k) x[k] = spec[k].real();
  return x;
}

WalkPath FgnSampler::path(std::uint64_t seed) const {
  const std::vector<double> x = increments(seed);
  WalkPath p;
  p.raw.resize(x.size() + 1);
  p.sites.resize(x.size() + 1);
  p.raw[0] = 0.0;
  p.sites[0] = 0;
  double s = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    s += x[k];
    p.raw[k + 1] = s;
    p.sites[k + 1] = static_cast<long long>(std::floor(s));
  }
  return p;
}

WalkPath gen_fgn_walk(const WalkModel& model, long long n, std::uint64_t seed) {
  model.validate();
  if (model.kind != WalkKind::FgnGaussian) {
    throw std::invalid_argument("gen_fgn_walk: model is not FgnGaussian");
  }
  if (n < 1) throw std::invalid_argument("gen_fgn_walk: n must be >= 1");
  return FgnSampler(model.hurst, n).path(seed);
}

double iterated_log(long long n) {
  const double m = static_cast<double>(std::max<long long>(n, 16));
  return std::log(std::log(m));
}

double lil_envelope(const WalkModel& model, long long n) {
  return std::sqrt(2.0 * model.partial_sum_variance(n) * iterated_log(n));
}

}  // namespace rwrs
