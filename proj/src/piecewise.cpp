#include "rispace/piecewise.hpp"

#include <algorithm>
#include <cmath>
#include <map>

namespace rispace {

PiecewiseFunction::PiecewiseFunction(std::vector<Segment> segments) {
  for (auto& s : segments) s.validate();
  std::sort(segments.begin(), segments.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i + 1 < segments.size(); ++i)
    if (segments[i + 1].lo < segments[i].hi - 1e-15)
      throw OverlapError("segment intervals overlap");
  segments_ = std::move(segments);
}

PiecewiseFunction PiecewiseFunction::constant(double c, double lo, double hi) {
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.form = ConstantForm{c};
  return PiecewiseFunction({s});
}

PiecewiseFunction PiecewiseFunction::power(double coef, double shift,
                                           double exponent, double lo,
                                           double hi) {
  Segment s;
  s.lo = lo;
  s.hi = hi;
  s.form = PowerForm{coef, shift, exponent, false};
  return PiecewiseFunction({s});
}

bool PiecewiseFunction::isZero() const {
  for (const auto& s : segments_)
    if (!s.isZero()) return false;
  return true;
}

double PiecewiseFunction::evaluate(double t) const {
  if (!(t > 0.0) || t > 1.0 + 1e-12)
    throw std::invalid_argument("evaluation point must lie in (0,1]");
  // segments are sorted and disjoint
  auto it = std::upper_bound(
      segments_.begin(), segments_.end(), t,
      [](double v, const Segment& s) { return v < s.hi; });
  if (it != segments_.end() && it->contains(t)) return it->value(t);
  // t may coincide with the closed right endpoint of the previous segment
  if (it != segments_.begin()) {
    auto prev = std::prev(it);
    if (prev->contains(t)) return prev->value(t);
  }
  return 0.0;
}

double PiecewiseFunction::supportMeasure() const {
  double m = 0.0;
  for (const auto& s : segments_)
    if (!s.isZero()) m += s.length();
  return m;
}

std::vector<double> PiecewiseFunction::breakpoints() const {
  std::vector<double> bp;
  for (const auto& s : segments_) {
    if (s.lo > 0.0 && s.lo < 1.0) bp.push_back(s.lo);
    if (s.hi > 0.0 && s.hi < 1.0) bp.push_back(s.hi);
  }
  std::sort(bp.begin(), bp.end());
  bp.erase(std::unique(bp.begin(), bp.end()), bp.end());
  return bp;
}

std::vector<double> PiecewiseFunction::singularPoints() const {
  std::vector<double> pts;
  for (const auto& s : segments_)
    if (auto p = s.singularEndpoint()) pts.push_back(*p);
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

std::vector<MonotonePiece> PiecewiseFunction::monotonePieces() const {
  std::vector<MonotonePiece> out;
  for (const auto& s : segments_) {
    auto ps = s.monotonePieces();
    out.insert(out.end(), ps.begin(), ps.end());
  }
  return out;
}

PiecewiseFunction PiecewiseFunction::scaled(double c) const {
  std::vector<Segment> segs;
  segs.reserve(segments_.size());
  for (const auto& s : segments_) segs.push_back(s.scaled(c));
  return PiecewiseFunction(std::move(segs));
}

PiecewiseFunction PiecewiseFunction::restrictedTo(double lo, double hi) const {
  std::vector<Segment> segs;
  for (const auto& s : segments_) {
    if (s.hi <= lo || s.lo >= hi) continue;
    segs.push_back(s.restricted(lo, hi));
  }
  return PiecewiseFunction(std::move(segs));
}

MonotoneFunction::MonotoneFunction(PiecewiseFunction f, bool degenerate)
    : fn_(std::move(f)), degenerate_(degenerate) {}

double distribution_function(const PiecewiseFunction& f, double s) {
  if (s < 0.0) throw std::invalid_argument("level must be nonnegative");
  double m = 0.0;
  for (const auto& p : f.monotonePieces()) m += p.measureAbove(s);
  return m;
}

namespace {

struct Stretch {
  double tLo, tHi;
  SegmentForm form;
};

// measure{|f| > s} over a fixed piece set
double lambdaOf(const std::vector<MonotonePiece>& pieces, double s) {
  double m = 0.0;
  for (const auto& p : pieces) m += p.measureAbove(s);
  return m;
}

}  // namespace

MonotoneFunction decreasing_rearrangement(const PiecewiseFunction& f) {
  std::vector<MonotonePiece> pieces;
  for (const auto& p : f.monotonePieces())
    if (p.vMax() > 0.0) pieces.push_back(p);
  if (pieces.empty())
    return MonotoneFunction(PiecewiseFunction::zero(), /*degenerate=*/true);

  // Critical levels: piece range endpoints (finite) and constant values.
  std::vector<double> levels{0.0};
  bool unbounded = false;
  for (const auto& p : pieces) {
    if (std::isfinite(p.vMin())) levels.push_back(p.vMin());
    if (std::isfinite(p.vMax()))
      levels.push_back(p.vMax());
    else
      unbounded = true;
  }
  std::sort(levels.begin(), levels.end());
  levels.erase(std::unique(levels.begin(), levels.end(),
                           [](double a, double b) {
                             return std::abs(a - b) <=
                                    1e-14 * std::max(1.0, std::abs(a));
                           }),
               levels.end());

  std::vector<Stretch> stretches;

  auto emitBand = [&](double A, double B) {
    // open band (A, B); B may be +inf
    // piece value ranges align with critical levels, so a piece either covers
    // the band or misses it
    std::vector<MonotonePiece> active;
    double base = 0.0;
    const double tol = 1e-14 * std::max(1.0, std::abs(A));
    for (const auto& p : pieces) {
      if (std::get_if<ConstantForm>(&p.form)) continue;
      const bool coversTop = std::isfinite(B) ? p.vMax() >= B - tol
                                              : !std::isfinite(p.vMax());
      if (p.vMin() <= A + tol && coversTop) active.push_back(p);
    }
    if (active.empty()) return;
    const double lamB = std::isfinite(B) ? lambdaOf(pieces, B) : 0.0;
    double activeAtB = 0.0;
    if (std::isfinite(B))
      for (const auto& p : active) activeAtB += p.measureAbove(B);
    base = lamB - activeAtB;
    const double tTop = lamB;
    const double tBot = base + [&] {
      double m = 0.0;
      for (const auto& p : active) m += p.measureAbove(A);
      return m;
    }();
    if (tBot - tTop <= 1e-300) return;

    if (active.size() == 1) {
      const MonotonePiece& p = active.front();
      SegmentForm form;
      if (p.absIncreasing) {
        // x*(t) = |value|(tHi_piece + base - t)
        form = reflectForm(scaleForm(p.form, p.sign), p.tHi + base);
      } else {
        // x*(t) = |value|(t + tLo_piece - base)
        form = translateForm(scaleForm(p.form, p.sign), p.tLo - base);
      }
      stretches.push_back({tTop, tBot, form});
    } else {
      LevelInverseForm li;
      li.sLo = A;
      li.sHi = B;
      li.scale = 1.0;
      li.tOffset = 0.0;
      li.tScale = 1.0;
      li.baseMeasure = base;
      li.pieces = std::make_shared<const std::vector<MonotonePiece>>(active);
      stretches.push_back({tTop, tBot, SegmentForm{li}});
    }
  };

  auto emitAtom = [&](double level) {
    if (level <= 0.0) return;
    double jump = 0.0;
    for (const auto& p : pieces) {
      auto* cf = std::get_if<ConstantForm>(&p.form);
      if (cf && std::abs(std::abs(cf->c) - level) <=
                    1e-14 * std::max(1.0, level))
        jump += p.length();
    }
    if (jump <= 0.0) return;
    const double tLo = lambdaOf(pieces, level);
    stretches.push_back({tLo, tLo + jump, SegmentForm{ConstantForm{level}}});
  };

  if (unbounded) emitBand(levels.back(), kInf);
  for (std::size_t j = levels.size(); j-- > 1;) {
    emitAtom(levels[j]);
    emitBand(levels[j - 1], levels[j]);
  }

  std::sort(stretches.begin(), stretches.end(),
            [](const Stretch& a, const Stretch& b) { return a.tLo < b.tLo; });

  std::vector<Segment> segs;
  double cursor = 0.0;
  for (const auto& st : stretches) {
    double lo = std::max(st.tLo, cursor);
    double hi = st.tHi;
    if (hi - lo <= 1e-300) continue;
    Segment s;
    s.lo = lo;
    s.hi = std::min(hi, 1.0);
    s.form = st.form;
    if (s.hi - s.lo > 1e-300) segs.push_back(s);
    cursor = std::max(cursor, hi);
  }
  return MonotoneFunction(PiecewiseFunction(std::move(segs)),
                          /*degenerate=*/false);
}

PiecewiseFunction translate_dilate(const PiecewiseFunction& f, double a,
                                   double r) {
  if (!(a >= 0.0) || a >= 1.0 || !(r > 0.0) || r > 1.0 - a + 1e-15)
    throw std::invalid_argument(
        "translate_dilate requires 0 <= a < 1 and 0 < r <= 1-a");
  std::vector<Segment> segs;
  segs.reserve(f.segments().size());
  for (const auto& s : f.segments()) segs.push_back(s.translatedDilated(a, r));
  return PiecewiseFunction(std::move(segs));
}

PiecewiseFunction disjoint_sum(const std::vector<PiecewiseFunction>& fs,
                               const std::vector<double>& coeffs) {
  if (fs.size() != coeffs.size())
    throw std::invalid_argument("disjoint_sum: size mismatch");
  std::vector<Segment> segs;
  for (std::size_t i = 0; i < fs.size(); ++i)
    for (const auto& s : fs[i].segments()) segs.push_back(s.scaled(coeffs[i]));
  std::sort(segs.begin(), segs.end(),
            [](const Segment& a, const Segment& b) { return a.lo < b.lo; });
  for (std::size_t i = 0; i + 1 < segs.size(); ++i)
    if (segs[i + 1].lo < segs[i].hi - 1e-15)
      throw OverlapError("disjoint_sum: supports intersect in positive measure");
  return PiecewiseFunction(std::move(segs));
}

}  // namespace rispace
