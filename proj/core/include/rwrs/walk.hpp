#pragma once

#include <cstdint>
#include <vector>

#include "rwrs/rng.hpp"

namespace rwrs {

enum class WalkKind { IidLattice, FgnGaussian };
enum class IncrementDist { Rademacher, LazyRademacher, UniformLattice };

// Description of the random-walk increment law.  IidLattice walks take
// zero-mean integer steps; FgnGaussian walks have stationary Gaussian
// increments with the fractional-Gaussian-noise covariance, so
// Var(S_n) = n^{2H} exactly for every n.
struct WalkModel {
  WalkKind kind = WalkKind::IidLattice;
  IncrementDist increment_dist = IncrementDist::Rademacher;
  double p_stay = 0.0;            // LazyRademacher only
  std::vector<int> support;       // UniformLattice only
  double hurst = 0.5;             // FgnGaussian only
  double sigma2 = 1.0;            // variance of one increment

  static WalkModel rademacher();
  static WalkModel lazy_rademacher(double p_stay);
  static WalkModel uniform_lattice(std::vector<int> support);
  static WalkModel fgn(double hurst);

  bool operator==(const WalkModel&) const = default;

  void validate() const;

  // Var(S_n): sigma2 * n for lattice walks, n^{2H} for fGn walks.
  double partial_sum_variance(long long n) const;

  // Largest possible |step|; 0 for Gaussian walks (unbounded).
  long long max_step() const;
};

// A realized trajectory S_0..S_n on the integer lattice.  Gaussian walks
// retain the real-valued partial sums; sites are their floors.
struct WalkPath {
  std::vector<long long> sites;  // length n+1, sites[0] == 0
  std::vector<double> raw;       // FgnGaussian only; raw[0] == 0

  long long n() const { return static_cast<long long>(sites.size()) - 1; }
};

WalkPath gen_iid_walk(const WalkModel& model, long long n, std::uint64_t seed);

// r(k) = (|k+1|^{2H} - 2|k|^{2H} + |k-1|^{2H}) / 2.
double fgn_autocovariance(double hurst, long long lag);

// Exact stationary-Gaussian sampler via circulant embedding on a
// power-of-two ring of length >= 2n.  Construction is the expensive part
// (one FFT for the eigenvalues); sampling one path costs one more FFT.
class FgnSampler {
 public:
  FgnSampler(double hurst, long long n_increments);

  std::vector<double> increments(std::uint64_t seed) const;
  WalkPath path(std::uint64_t seed) const;

  double min_eigenvalue() const { return min_eigenvalue_; }
  long long n_increments() const { return n_; }

  // Eigenvalues below -kEigTolerance abort construction; small negatives
  // from roundoff are clamped to zero.
  static constexpr double kEigTolerance = 1e-8;

 private:
  double hurst_;
  long long n_;
  std::size_t ring_;
  std::vector<double> amplitude_;  // per-frequency draw scale
  double min_eigenvalue_;
};

WalkPath gen_fgn_walk(const WalkModel& model, long long n, std::uint64_t seed);

// log log n clamped below at n = 16 so the envelope is usable at desk sizes.
double iterated_log(long long n);

// sqrt(2 Var(S_n) log log n): the law-of-iterated-logarithm scale for the
// running maximum of |S_k|, k <= n.
double lil_envelope(const WalkModel& model, long long n);

}  // namespace rwrs
