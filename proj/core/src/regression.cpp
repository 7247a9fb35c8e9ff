#include "rwrs/regression.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rwrs {

SlopeFit fit_line(const std::vector<std::pair<double, double>>& xy) {
  const std::size_t m = xy.size();
  if (m < 2) throw std::invalid_argument("fit_line: need at least two points");

  double mx = 0.0, my = 0.0;
  for (const auto& [x, y] : xy) {
    mx += x;
    my += y;
  }
  mx /= static_cast<double>(m);
  my /= static_cast<double>(m);

  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (const auto& [x, y] : xy) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
    syy += (y - my) * (y - my);
  }
  if (sxx == 0.0) throw std::invalid_argument("fit_line: degenerate abscissae");

  SlopeFit fit;
  fit.points = static_cast<long long>(m);
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;

  double ss_res = 0.0;
  for (const auto& [x, y] : xy) {
    const double r = y - (fit.intercept + fit.slope * x);
    ss_res += r * r;
  }
  fit.r2 = syy == 0.0 ? 1.0 : 1.0 - ss_res / syy;
  fit.stderr_slope =
      m > 2 ? std::sqrt(ss_res / static_cast<double>(m - 2) / sxx) : 0.0;
  return fit;
}

SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& xy) {
  std::vector<std::pair<double, double>> logxy;
  logxy.reserve(xy.size());
  for (const auto& [x, y] : xy) {
    if (!(x > 0.0) || !(y > 0.0)) {
      throw std::invalid_argument("fit_loglog: points must be positive");
    }
    logxy.emplace_back(std::log(x), std::log(y));
  }
  return fit_line(logxy);
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw std::invalid_argument("quantile: empty sample");
  if (!(p >= 0.0 && p <= 1.0)) {
    throw std::invalid_argument("quantile: p must lie in [0,1]");
  }
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

}  // namespace rwrs
