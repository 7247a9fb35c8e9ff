#include "rwrs/localtime.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace rwrs {

namespace {

void check_coverage(const WalkPath& path, const Scenery& scenery) {
  for (long long s : path.sites) {
    if (s < scenery.lo || s > scenery.hi) {
      std::ostringstream msg;
      msg << "scenery window [" << scenery.lo << "," << scenery.hi
          << "] does not cover visited site " << s;
      throw std::out_of_range(msg.str());
    }
  }
}

}  // namespace

LocalTimeProfile LocalTimeProfile::from_path(const WalkPath& path) {
  if (path.sites.empty()) {
    throw std::invalid_argument("LocalTimeProfile: empty path");
  }
  LocalTimeProfile p;
  p.n_ = path.n();
  const auto [lo_it, hi_it] =
      std::minmax_element(path.sites.begin(), path.sites.end());
  p.lo_ = *lo_it;
  p.hi_ = *hi_it;

  const long long range = p.hi_ - p.lo_ + 1;
  p.dense_mode_ = range <= kDenseLimit;
  if (p.dense_mode_) {
    p.dense_.assign(static_cast<std::size_t>(range), 0);
    for (long long s : path.sites) {
      ++p.dense_[static_cast<std::size_t>(s - p.lo_)];
    }
  } else {
    p.sparse_.reserve(path.sites.size());
    for (long long s : path.sites) ++p.sparse_[s];
  }
  return p;
}

long long LocalTimeProfile::count(long long site) const {
  if (site < lo_ || site > hi_) return 0;
  if (dense_mode_) return dense_[static_cast<std::size_t>(site - lo_)];
  const auto it = sparse_.find(site);
  return it == sparse_.end() ? 0 : it->second;
}

long long LocalTimeProfile::total_mass() const { return n_ + 1; }

std::vector<std::pair<long long, long long>> LocalTimeProfile::items() const {
  std::vector<std::pair<long long, long long>> out;
  if (dense_mode_) {
    for (std::size_t w = 0; w < dense_.size(); ++w) {
      if (dense_[w] != 0) {
        out.emplace_back(lo_ + static_cast<long long>(w), dense_[w]);
      }
    }
  } else {
    out.assign(sparse_.begin(), sparse_.end());
    std::sort(out.begin(), out.end());
  }
  return out;
}

LocalTimeProfile local_time(const WalkPath& path) {
  return LocalTimeProfile::from_path(path);
}

long long self_intersection(const LocalTimeProfile& profile) {
  long long total = 0;
  for (const auto& [site, c] : profile.items()) total += c * c;
  return total;
}

long long intersection(const LocalTimeProfile& profile, long long i) {
  long long total = 0;
  for (const auto& [site, c] : profile.items()) {
    total += c * profile.count(site - i);
  }
  return total;
}

double z_statistic(const WalkPath& path, const Scenery& scenery) {
  check_coverage(path, scenery);
  double z = 0.0;
  for (long long s : path.sites) z += scenery.at(s);
  return z;
}

std::vector<double> z_prefixes(const WalkPath& path, const Scenery& scenery) {
  check_coverage(path, scenery);
  std::vector<double> z(path.sites.size());
  double acc = 0.0;
  for (std::size_t k = 0; k < path.sites.size(); ++k) {
    acc += scenery.at(path.sites[k]);
    z[k] = acc;
  }
  return z;
}

double z_from_profile(const LocalTimeProfile& profile, const Scenery& scenery) {
  if (!scenery.covers(profile.min_site(), profile.max_site())) {
    std::ostringstream msg;
    msg << "scenery window [" << scenery.lo << "," << scenery.hi
        << "] does not cover visited range [" << profile.min_site() << ","
        << profile.max_site() << "]";
    throw std::out_of_range(msg.str());
  }
  double z = 0.0;
  for (const auto& [site, c] : profile.items()) {
    z += static_cast<double>(c) * scenery.at(site);
  }
  return z;
}

}  // namespace rwrs
