#pragma once

#include <unordered_map>
#include <vector>

#include "rwrs/scenery.hpp"
#include "rwrs/walk.hpp"

namespace rwrs {

// Occupation counts N_n(i) of a trajectory.  Lattice walks stay within
// ~sqrt(n) of the origin, so a dense array over the visited range is the
// fast path; pathologically spread-out trajectories fall back to a hash map.
class LocalTimeProfile {
 public:
  static constexpr long long kDenseLimit = 1LL << 22;

  static LocalTimeProfile from_path(const WalkPath& path);

  long long n() const { return n_; }
  long long count(long long site) const;
  long long total_mass() const;  // == n + 1
  long long min_site() const { return lo_; }
  long long max_site() const { return hi_; }
  bool dense() const { return dense_mode_; }

  // Visited (site, count) pairs in ascending site order.
  std::vector<std::pair<long long, long long>> items() const;

 private:
  long long n_ = 0;
  long long lo_ = 0, hi_ = 0;  // visited range
  bool dense_mode_ = true;
  std::vector<long long> dense_;
  std::unordered_map<long long, long long> sparse_;
};

LocalTimeProfile local_time(const WalkPath& path);

// alpha(n,0) = sum_i N_n(i)^2.
long long self_intersection(const LocalTimeProfile& profile);

// alpha(n,i) = sum_x N_n(x) N_n(x-i); equals the pair double sum
// #{(k,j): S_k - S_j = i}.
long long intersection(const LocalTimeProfile& profile, long long i);

// Z_n summed in time order (the definition).
double z_statistic(const WalkPath& path, const Scenery& scenery);

// All prefixes Z_0..Z_n in one pass.
std::vector<double> z_prefixes(const WalkPath& path, const Scenery& scenery);

// Z_n summed in site order through the occupation counts (the site
// representation); agrees with z_statistic.
double z_from_profile(const LocalTimeProfile& profile, const Scenery& scenery);

}  // namespace rwrs
