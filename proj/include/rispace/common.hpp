#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace rispace {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared numeric protocol: geometric grids run over octaves 2^-k (toward 0)
// or 2^k (toward infinity), k = 1..kMaxOctaves.
inline constexpr int kMaxOctaves = 60;

// A truncated quantity is declared divergent once it crosses this value.
inline constexpr double kDivergenceThreshold = 1e12;

// Per-cell adaptive quadrature relative tolerance.
inline constexpr double kQuadRelTol = 1e-9;

// Luxemburg-style bisection: relative bracket width / step cap / scale cap.
inline constexpr double kBisectRelTol = 1e-10;
inline constexpr int kBisectMaxSteps = 60;
inline constexpr double kScaleCap = 1e12;

struct OverlapError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConcavityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ConvexityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct MonotonicityViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct PreconditionFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DescriptorError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct UnsupportedForm : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Ordinary least squares slope of y against x.
double fitted_slope(const std::vector<double>& x, const std::vector<double>& y);

// Slope of log2(values) against their index over the trailing `window`
// entries; entries must be positive.
double log2_slope_tail(const std::vector<double>& values, std::size_t window);

// True when the trailing `window` entries are nonincreasing (tol slack).
bool tail_nonincreasing(const std::vector<double>& values, std::size_t window,
                        double tol = 0.0);
bool tail_nondecreasing(const std::vector<double>& values, std::size_t window,
                        double tol = 0.0);

// pow that routes through exp2/log2 to survive extreme magnitudes; returns
// +inf on overflow and 0 on underflow.
double safe_pow(double base, double exponent);

// Bisection for a continuous monotone function on [lo, hi] with f(lo), f(hi)
// bracketing target. Returns the abscissa where f crosses `target`.
template <typename F>
double bisect_monotone(F&& f, double lo, double hi, double target,
                       int steps = 100) {
  double flo = f(lo) - target;
  double fhi = f(hi) - target;
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo > 0) == (fhi > 0))
    throw std::invalid_argument("bisect_monotone: endpoints do not bracket");
  for (int i = 0; i < steps; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    const double fm = f(mid) - target;
    if (fm == 0.0) return mid;
    if ((fm > 0) == (flo > 0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

}  // namespace rispace
