#pragma once

#include <utility>
#include <vector>

namespace rwrs {

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double stderr_slope = 0.0;
  double r2 = 0.0;
  long long points = 0;
};

// Ordinary least squares y = intercept + slope * x.
SlopeFit fit_line(const std::vector<std::pair<double, double>>& xy);

// Least-squares slope of log y against log x; every y must be positive.
SlopeFit fit_loglog(const std::vector<std::pair<double, double>>& xy);

// Deterministic linear-interpolation quantile of an unsorted sample.
double quantile(std::vector<double> values, double p);

}  // namespace rwrs
