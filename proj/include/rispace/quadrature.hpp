#pragma once

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "rispace/common.hpp"

namespace rispace {

enum class CertStatus { Converged, Diverged, Inconclusive };

inline const char* to_string(CertStatus s) {
  switch (s) {
    case CertStatus::Converged: return "converged";
    case CertStatus::Diverged: return "diverged";
    default: return "inconclusive";
  }
}

// A pointwise-evaluable integrand on an interval, with the structural hints
// the geometric subdivision needs: interior breakpoints (integration panels
// split there) and singular points (approached by dyadic cells, never hit).
struct Integrand {
  std::function<double(double)> eval;
  std::vector<double> breakpoints;
  std::vector<double> singularities;
};

struct QuadratureOptions {
  double relTol = kQuadRelTol;
  int maxOctaves = kMaxOctaves;
  double divergenceThreshold = kDivergenceThreshold;
};

// Truncated values T_k at cutoffs eps_k = 2^-k together with the verdict.
struct IntegralCertificate {
  double value = 0.0;
  double absError = 0.0;
  CertStatus status = CertStatus::Inconclusive;
  std::vector<std::pair<double, double>> evidence;  // (cutoff, truncated value)
  double fittedSlope = 0.0;      // log2 T_k per octave, trailing window
  double incrementSlope = 0.0;   // log2 (T_k - T_{k-1}) per octave
  std::string note;
};

IntegralCertificate integrate_certified(const Integrand& g, double lo,
                                        double hi,
                                        const QuadratureOptions& opts = {});

// Certify a monotone partial-sum sequence (series route): same dichotomy as
// the integral certificates. `tailBound`, when nonnegative, is a certified
// bound on the remainder past the last partial sum.
IntegralCertificate certify_partial_sums(
    const std::vector<std::pair<double, double>>& evidence, double tailBound,
    const QuadratureOptions& opts = {});

// Prefix integrals t -> int_lo^t of a fixed integrand, with cached dyadic
// cells toward the singular points.
class CumulativeIntegral {
 public:
  CumulativeIntegral(Integrand g, double lo, double hi,
                     QuadratureOptions opts = {});

  // int_lo^t; for t below the deepest resolved cell the unresolved lower tail
  // estimate is included.
  double upTo(double t) const;
  const IntegralCertificate& total() const { return total_; }

 private:
  Integrand g_;
  double lo_, hi_;
  QuadratureOptions opts_;
  std::vector<double> cuts_;     // cell boundaries, ascending
  std::vector<double> prefix_;   // prefix_[i] = int_lo^cuts_[i]
  std::vector<bool> sliver_;     // interval i abuts a singular left endpoint
  IntegralCertificate total_;
};

// Adaptive Simpson on [a,b]; returns +inf when the integrand is not finite on
// the sample set.
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double relTol);

}  // namespace rispace
