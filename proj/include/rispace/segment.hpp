#pragma once

#include <memory>
#include <optional>
#include <variant>
#include <vector>

#include "rispace/common.hpp"

namespace rispace {

// Analytic forms for measurable functions on subintervals of (0,1].
// Positions enter through u = t - shift (or shift - t when mirrored), so a
// form may blow up only as u -> 0, i.e. at one designated interval endpoint.

struct ConstantForm {
  double c = 0.0;
};

struct PowerForm {
  double coef = 1.0;
  double shift = 0.0;
  double exponent = 1.0;
  bool mirrored = false;  // u = shift - t instead of t - shift
};

// value = u^powerExp * sum_i terms[i].coef * z^terms[i].exp, z = logOffset - ln u.
// The default logOffset = 1 realizes ln(e/u). Non-integer exponents require
// z > 0 over the whole interval; small integer exponents tolerate z <= 0.
struct LogTerm {
  double coef = 0.0;
  double exp = 0.0;
};

struct LogPowerForm {
  double shift = 0.0;
  bool mirrored = false;
  double powerExp = 0.0;
  double logOffset = 1.0;
  std::vector<LogTerm> terms;
};

struct MonotonePiece;

// Value s solving tOffset + tScale*(baseMeasure + sum_i m_i(s)) = t, scaled by
// `scale`, where m_i(s) is the measure of {|piece_i| > s}. This is the exact
// generalized inverse used for decreasing rearrangements on level bands where
// several source pieces are simultaneously active.
struct LevelInverseForm {
  double sLo = 0.0;
  double sHi = kInf;  // open upper band edge; +inf for the top band
  double scale = 1.0;
  double tOffset = 0.0;
  double tScale = 1.0;
  double baseMeasure = 0.0;
  std::shared_ptr<const std::vector<MonotonePiece>> pieces;

  // baseMeasure + sum_i m_i(s), decreasing in s on [sLo, sHi).
  double bandMeasure(double s) const;
  double invert(double t) const;  // solve for s given the pre-map measure t
};

using SegmentForm =
    std::variant<ConstantForm, PowerForm, LogPowerForm, LevelInverseForm>;

// A maximal subinterval where |value| is monotone and the sign is constant.
struct MonotonePiece {
  double tLo = 0.0;
  double tHi = 0.0;
  SegmentForm form;
  double sign = 1.0;
  bool absIncreasing = false;
  double vAtLo = 0.0;  // limit of |value| as t -> tLo+ (may be +inf)
  double vAtHi = 0.0;  // |value| at t = tHi

  double length() const { return tHi - tLo; }
  double vMin() const { return absIncreasing ? vAtLo : vAtHi; }
  double vMax() const { return absIncreasing ? vAtHi : vAtLo; }
  double absValue(double t) const;
  // Lebesgue measure of {t in (tLo,tHi] : |value(t)| > s}, exact up to the
  // root solve (closed form for constant/power, log-domain bisection else).
  double measureAbove(double s) const;
  // abscissa with |value| = s, for s strictly inside the value range
  double solveAbs(double s) const;
};

struct Segment {
  double lo = 0.0;  // interval (lo, hi]
  double hi = 0.0;
  SegmentForm form;

  double length() const { return hi - lo; }
  bool contains(double t) const { return t > lo && t <= hi; }
  double value(double t) const;  // exact; finite for all t in (lo, hi]
  bool isZero() const;

  // Splits |value| into monotone constant-sign pieces.
  std::vector<MonotonePiece> monotonePieces() const;

  // Endpoint (if any) where |value| tends to +inf.
  std::optional<double> singularEndpoint() const;

  Segment scaled(double c) const;
  // Image under t -> a + r*t (the translate-dilate substitution).
  Segment translatedDilated(double a, double r) const;
  Segment restricted(double newLo, double newHi) const;

  void validate() const;  // throws on malformed parameters
};

double evalForm(const SegmentForm& form, double t);

// value_new(t) = value_old(t + delta)
SegmentForm translateForm(const SegmentForm& form, double delta);
// value_new(t) = value_old(reflectAt - t)
SegmentForm reflectForm(const SegmentForm& form, double reflectAt);
SegmentForm scaleForm(const SegmentForm& form, double c);

// z^e allowing small-integer exponents of negative bases.
double zpow(double z, double e);

}  // namespace rispace
