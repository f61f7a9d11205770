#pragma once

#include <functional>
#include <vector>

#include "rispace/segment.hpp"

namespace rispace {

// A measurable function on (0,1]: finitely many analytic segments on pairwise
// disjoint half-open intervals, identically 0 elsewhere.
class PiecewiseFunction {
 public:
  PiecewiseFunction() = default;
  explicit PiecewiseFunction(std::vector<Segment> segments);

  static PiecewiseFunction zero() { return PiecewiseFunction(); }
  static PiecewiseFunction constant(double c, double lo = 0.0, double hi = 1.0);
  static PiecewiseFunction indicator(double lo, double hi) {
    return constant(1.0, lo, hi);
  }
  // c*(t-shift)^exponent on (lo,hi]
  static PiecewiseFunction power(double coef, double shift, double exponent,
                                 double lo = 0.0, double hi = 1.0);

  const std::vector<Segment>& segments() const { return segments_; }
  bool isZero() const;
  double evaluate(double t) const;  // 0 off the segments; t in (0,1]
  double supportMeasure() const;

  std::vector<double> breakpoints() const;    // interval endpoints in (0,1)
  std::vector<double> singularPoints() const; // endpoints with |value|->inf
  std::vector<MonotonePiece> monotonePieces() const;

  PiecewiseFunction scaled(double c) const;
  PiecewiseFunction restrictedTo(double lo, double hi) const;

 private:
  std::vector<Segment> segments_;  // sorted by lo, disjoint
};

// A piecewise function certified nonincreasing on (0,1].
class MonotoneFunction {
 public:
  MonotoneFunction() = default;
  MonotoneFunction(PiecewiseFunction f, bool degenerate);

  const PiecewiseFunction& fn() const { return fn_; }
  bool degenerate() const { return degenerate_; }
  double evaluate(double t) const { return fn_.evaluate(t); }

 private:
  PiecewiseFunction fn_;
  bool degenerate_ = false;
};

// lambda_x(s) = lambda{t in [0,1] : |x(t)| > s}, exact per monotone piece.
double distribution_function(const PiecewiseFunction& f, double s);

// x*(t) = inf{s >= 0 : lambda_x(s) <= t}. Closed-form segments wherever a
// single source piece is active on a level band; exact generalized inverses
// (LevelInverseForm) on bands where several pieces overlap.
MonotoneFunction decreasing_rearrangement(const PiecewiseFunction& f);

// T_{a,r}(x)(t) = x((t-a)/r) restricted to (a, a+r].
PiecewiseFunction translate_dilate(const PiecewiseFunction& f, double a,
                                   double r);

// Pointwise sum of coeffs[i]*fs[i] for functions with disjoint supports.
PiecewiseFunction disjoint_sum(const std::vector<PiecewiseFunction>& fs,
                               const std::vector<double>& coeffs);

}  // namespace rispace
