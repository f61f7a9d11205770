#include "rispace/common.hpp"

#include <algorithm>
#include <cmath>

namespace rispace {

double fitted_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const std::size_t n = std::min(x.size(), y.size());
  if (n < 2) return 0.0;
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  return (n * sxy - sx * sy) / denom;
}

double log2_slope_tail(const std::vector<double>& values, std::size_t window) {
  if (values.size() < 2) return 0.0;
  const std::size_t n = std::min(window, values.size());
  std::vector<double> xs, ys;
  xs.reserve(n);
  ys.reserve(n);
  for (std::size_t i = values.size() - n; i < values.size(); ++i) {
    if (!(values[i] > 0.0) || !std::isfinite(values[i])) continue;
    xs.push_back(static_cast<double>(i));
    ys.push_back(std::log2(values[i]));
  }
  return fitted_slope(xs, ys);
}

bool tail_nonincreasing(const std::vector<double>& values, std::size_t window,
                        double tol) {
  if (values.size() < 2) return false;
  const std::size_t n = std::min(window, values.size());
  for (std::size_t i = values.size() - n + 1; i < values.size(); ++i)
    if (values[i] > values[i - 1] + tol) return false;
  return true;
}

bool tail_nondecreasing(const std::vector<double>& values, std::size_t window,
                        double tol) {
  if (values.size() < 2) return false;
  const std::size_t n = std::min(window, values.size());
  for (std::size_t i = values.size() - n + 1; i < values.size(); ++i)
    if (values[i] < values[i - 1] - tol) return false;
  return true;
}

double safe_pow(double base, double exponent) {
  if (base < 0.0) return std::nan("");
  if (base == 0.0) {
    if (exponent > 0.0) return 0.0;
    if (exponent == 0.0) return 1.0;
    return kInf;
  }
  if (exponent == 0.0) return 1.0;
  const double l = exponent * std::log2(base);
  if (l > 1075.0) return kInf;
  if (l < -1075.0) return 0.0;
  return std::exp2(l);
}

}  // namespace rispace
