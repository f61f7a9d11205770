#include "rispace/segment.hpp"

#include <algorithm>
#include <cmath>

namespace rispace {

namespace {

bool isSmallInteger(double e) {
  return std::abs(e - std::round(e)) < 1e-9 && std::abs(e) <= 8.5;
}

double ipow(double z, long n) {
  double r = 1.0;
  const bool neg = n < 0;
  unsigned long k = neg ? static_cast<unsigned long>(-n) : static_cast<unsigned long>(n);
  double b = z;
  while (k) {
    if (k & 1UL) r *= b;
    b *= b;
    k >>= 1UL;
  }
  return neg ? 1.0 / r : r;
}

double uOf(double t, double shift, bool mirrored) {
  return mirrored ? shift - t : t - shift;
}

double powerAtU(const PowerForm& f, double u) {
  if (u <= 0.0) return f.exponent < 0 ? std::copysign(kInf, f.coef)
                                      : (f.exponent == 0 ? f.coef : 0.0);
  return f.coef * safe_pow(u, f.exponent);
}

double logPolyAtZ(const LogPowerForm& f, double z) {
  double s = 0.0;
  for (const auto& tm : f.terms) s += tm.coef * zpow(z, tm.exp);
  return s;
}

double logPowerAtU(const LogPowerForm& f, double u) {
  if (u <= 0.0) return std::nan("");
  const double z = f.logOffset - std::log(u);
  return safe_pow(u, f.powerExp) * logPolyAtZ(f, z);
}

// |value| limit as u -> 0+ together with the sign of the approach.
double logPowerLimitAtZero(const LogPowerForm& f, double* signOut) {
  // z -> +inf; the leading term is the one with the largest exponent.
  const LogTerm* lead = nullptr;
  for (const auto& tm : f.terms)
    if (tm.coef != 0.0 && (!lead || tm.exp > lead->exp)) lead = &tm;
  if (!lead) {
    if (signOut) *signOut = 1.0;
    return 0.0;
  }
  if (signOut) *signOut = lead->coef > 0 ? 1.0 : -1.0;
  if (f.powerExp < 0) return kInf;
  if (f.powerExp > 0) return 0.0;
  if (lead->exp > 0) return kInf;
  if (lead->exp < 0) return 0.0;
  return std::abs(lead->coef);
}

}  // namespace

double zpow(double z, double e) {
  if (e == 0.0) return 1.0;
  if (isSmallInteger(e)) return ipow(z, static_cast<long>(std::llround(e)));
  return safe_pow(z, e);
}

double evalForm(const SegmentForm& form, double t) {
  return std::visit(
      [t](const auto& f) -> double {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, ConstantForm>) {
          return f.c;
        } else if constexpr (std::is_same_v<T, PowerForm>) {
          return powerAtU(f, uOf(t, f.shift, f.mirrored));
        } else if constexpr (std::is_same_v<T, LogPowerForm>) {
          return logPowerAtU(f, uOf(t, f.shift, f.mirrored));
        } else {
          const LevelInverseForm& li = f;
          const double m = (t - li.tOffset) / li.tScale;
          return li.scale * li.invert(m);
        }
      },
      form);
}

double LevelInverseForm::bandMeasure(double s) const {
  double m = baseMeasure;
  if (pieces)
    for (const auto& p : *pieces) m += p.measureAbove(s);
  return m;
}

double LevelInverseForm::invert(double t) const {
  double lo = sLo;
  double hi = sHi;
  if (!std::isfinite(hi)) {
    hi = std::max(2.0 * std::max(lo, 1e-300), 1.0);
    int guard = 0;
    while (bandMeasure(hi) > t && guard++ < 2200) hi *= 2.0;
  }
  if (bandMeasure(lo) <= t) return lo;
  // geometric bisection for relative accuracy across wide bands
  for (int i = 0; i < 200; ++i) {
    double mid = (lo > 0 && hi / std::max(lo, 1e-300) > 4.0)
                     ? std::sqrt(lo * hi)
                     : 0.5 * (lo + hi);
    if (!(mid > lo) || !(mid < hi)) break;
    if (bandMeasure(mid) > t)
      lo = mid;
    else
      hi = mid;
  }
  return 0.5 * (lo + hi);
}

double MonotonePiece::absValue(double t) const {
  if (auto* li = std::get_if<LevelInverseForm>(&form))
    return li->scale <= 0 ? 0.0 : std::abs(evalForm(form, t));
  return sign * evalForm(form, t);
}

double MonotonePiece::solveAbs(double s) const {
  if (auto* pf = std::get_if<PowerForm>(&form)) {
    const double u = safe_pow(s / std::abs(pf->coef), 1.0 / pf->exponent);
    return pf->mirrored ? pf->shift - u : pf->shift + u;
  }
  if (auto* lf = std::get_if<LogPowerForm>(&form)) {
    // bisection in w = ln u; |value| is monotone in u on the piece
    const double shift = lf->shift;
    const bool mir = lf->mirrored;
    auto absAtW = [&](double w) {
      return sign * logPowerAtU(*lf, std::exp(w));
    };
    const double uA = uOf(mir ? tHi : tLo, shift, mir);
    const double uB = uOf(mir ? tLo : tHi, shift, mir);
    // u in (uA, uB] (uA may be 0)
    double wHi = std::log(uB);
    double wLo;
    if (uA > 0) {
      wLo = std::log(uA);
    } else {
      wLo = wHi - 4.0;
      const bool below = absAtW(wHi) < s;  // searching toward u -> 0
      int guard = 0;
      while (guard++ < 300 && wLo > -745.0) {
        const double v = absAtW(wLo);
        if ((below && v >= s) || (!below && v <= s)) break;
        wLo -= 4.0;
      }
    }
    const double w = bisect_monotone(absAtW, wLo, wHi, s, 120);
    const double u = std::exp(w);
    return mir ? shift - u : shift + u;
  }
  if (auto* li = std::get_if<LevelInverseForm>(&form)) {
    // direct: measure above level s equals the band measure map
    return li->tOffset + li->tScale * li->bandMeasure(s / li->scale);
  }
  return tLo;  // constants never reach here
}

double MonotonePiece::measureAbove(double s) const {
  const double len = tHi - tLo;
  if (auto* cf = std::get_if<ConstantForm>(&form))
    return std::abs(cf->c) > s ? len : 0.0;
  const double mn = vMin();
  const double mx = vMax();
  if (s >= mx) return 0.0;
  if (s < mn) return len;
  if (std::get_if<LevelInverseForm>(&form)) {
    const double tStar = solveAbs(s);
    return std::clamp(tStar - tLo, 0.0, len);
  }
  const double tStar = solveAbs(s);
  const double m = absIncreasing ? tHi - tStar : tStar - tLo;
  return std::clamp(m, 0.0, len);
}

double Segment::value(double t) const { return evalForm(form, t); }

bool Segment::isZero() const {
  if (auto* cf = std::get_if<ConstantForm>(&form)) return cf->c == 0.0;
  if (auto* pf = std::get_if<PowerForm>(&form)) return pf->coef == 0.0;
  if (auto* lf = std::get_if<LogPowerForm>(&form)) {
    for (const auto& tm : lf->terms)
      if (tm.coef != 0.0) return false;
    return true;
  }
  if (auto* li = std::get_if<LevelInverseForm>(&form)) return li->scale == 0.0;
  return false;
}

std::optional<double> Segment::singularEndpoint() const {
  if (auto* pf = std::get_if<PowerForm>(&form)) {
    if (pf->exponent >= 0) return std::nullopt;
    const double endpoint = pf->shift;
    if (!pf->mirrored && std::abs(endpoint - lo) <= 1e-14) return lo;
    if (pf->mirrored && std::abs(endpoint - hi) <= 1e-14) return hi;
    return std::nullopt;
  }
  if (auto* lf = std::get_if<LogPowerForm>(&form)) {
    double sgn;
    if (!std::isinf(logPowerLimitAtZero(*lf, &sgn))) return std::nullopt;
    const double endpoint = lf->shift;
    if (!lf->mirrored && std::abs(endpoint - lo) <= 1e-14) return lo;
    if (lf->mirrored && std::abs(endpoint - hi) <= 1e-14) return hi;
    return std::nullopt;
  }
  if (auto* li = std::get_if<LevelInverseForm>(&form)) {
    if (std::isfinite(li->sHi)) return std::nullopt;
    return lo;  // level inverses are nonincreasing
  }
  return std::nullopt;
}

namespace {

// Candidate split positions (t values) interior to (lo, hi) where the sign or
// the monotonicity of a log-power value can change. Roots are closed-form:
// the value factors through polynomials in z of degree <= 2 for the forms the
// library constructs (single terms and one-derivative results).
std::vector<double> logPowerSplitPoints(const LogPowerForm& f, double lo,
                                        double hi) {
  std::vector<double> zRoots;
  auto addQuadraticRoots = [&](double c2, double c1, double c0) {
    if (std::abs(c2) < 1e-300) {
      if (std::abs(c1) > 1e-300) zRoots.push_back(-c0 / c1);
      return;
    }
    const double disc = c1 * c1 - 4 * c2 * c0;
    if (disc < 0) return;
    const double r = std::sqrt(disc);
    zRoots.push_back((-c1 + r) / (2 * c2));
    zRoots.push_back((-c1 - r) / (2 * c2));
  };

  std::vector<LogTerm> terms;
  for (const auto& tm : f.terms)
    if (tm.coef != 0.0) terms.push_back(tm);
  if (terms.empty()) return {};
  std::sort(terms.begin(), terms.end(),
            [](const LogTerm& a, const LogTerm& b) { return a.exp > b.exp; });
  if (terms.size() > 2)
    throw UnsupportedForm("log-power forms support at most two terms");

  const double a = f.powerExp;
  if (terms.size() == 1) {
    // value zero only at z = 0; derivative root at z = exp/a
    if (terms[0].exp != 0.0) zRoots.push_back(0.0);
    if (a != 0.0) zRoots.push_back(terms[0].exp / a);
  } else {
    const double b = terms[0].exp;
    if (std::abs(terms[0].exp - terms[1].exp - 1.0) > 1e-9)
      throw UnsupportedForm("two-term log-power requires consecutive exponents");
    // value: z^{b-1}(c0 z + c1); derivative polynomial is quadratic in z
    if (b - 1.0 != 0.0) zRoots.push_back(0.0);
    zRoots.push_back(-terms[1].coef / terms[0].coef);
    addQuadraticRoots(a * terms[0].coef, a * terms[1].coef - b * terms[0].coef,
                      -terms[1].coef * (b - 1.0));
  }

  std::vector<double> ts;
  for (double z : zRoots) {
    const double u = std::exp(f.logOffset - z);
    const double t = f.mirrored ? f.shift - u : f.shift + u;
    if (t > lo * (1 + 1e-14) + 1e-300 && t < hi * (1 - 1e-14)) ts.push_back(t);
  }
  std::sort(ts.begin(), ts.end());
  ts.erase(std::unique(ts.begin(), ts.end(),
                       [](double x, double y) { return std::abs(x - y) < 1e-15; }),
           ts.end());
  return ts;
}

MonotonePiece makePiece(const SegmentForm& form, double lo, double hi) {
  MonotonePiece p;
  p.tLo = lo;
  p.tHi = hi;
  p.form = form;
  if (auto* cf = std::get_if<ConstantForm>(&form)) {
    p.sign = cf->c < 0 ? -1.0 : 1.0;
    p.absIncreasing = false;
    p.vAtLo = p.vAtHi = std::abs(cf->c);
    return p;
  }
  if (auto* li = std::get_if<LevelInverseForm>(&form)) {
    p.sign = 1.0;
    p.absIncreasing = false;
    p.vAtLo = li->scale * li->sHi;
    p.vAtHi = li->scale * evalForm(form, hi);
    return p;
  }

  // open-end limit of the value as t -> lo+ / attained value at hi
  auto rawAt = [&](double t) { return evalForm(form, t); };
  double atHi = rawAt(hi);
  double atLo;
  bool loSingular = false;
  if (auto* pf = std::get_if<PowerForm>(&form)) {
    const double uAtLo = uOf(lo, pf->shift, pf->mirrored);
    if (uAtLo <= 1e-300 && !pf->mirrored) {
      loSingular = true;
      atLo = pf->exponent < 0   ? std::copysign(kInf, pf->coef)
             : pf->exponent > 0 ? 0.0
                                : pf->coef;
    } else {
      atLo = rawAt(lo);
    }
  } else {
    auto* lf = std::get_if<LogPowerForm>(&form);
    const double uAtLo = uOf(lo, lf->shift, lf->mirrored);
    if (uAtLo <= 1e-300 && !lf->mirrored) {
      loSingular = true;
      double sgn;
      const double mag = logPowerLimitAtZero(*lf, &sgn);
      atLo = sgn * mag;
    } else {
      atLo = rawAt(lo);
    }
  }
  // the sign is constant on a monotone piece; sample the midpoint
  const double mid = loSingular ? lo + 0.25 * (hi - lo) : 0.5 * (lo + hi);
  const double vm = rawAt(mid);
  p.sign = (vm < 0 || (vm == 0 && atHi < 0)) ? -1.0 : 1.0;
  p.vAtLo = std::abs(atLo);
  p.vAtHi = std::abs(atHi);
  if (p.vAtLo == p.vAtHi) {
    p.absIncreasing = std::abs(vm) > p.vAtLo;  // ties are flat; direction moot
  } else {
    p.absIncreasing = p.vAtLo < p.vAtHi;
  }
  return p;
}

}  // namespace

std::vector<MonotonePiece> Segment::monotonePieces() const {
  std::vector<MonotonePiece> out;
  if (isZero()) return out;
  std::vector<double> cuts{lo};
  if (auto* lf = std::get_if<LogPowerForm>(&form)) {
    for (double t : logPowerSplitPoints(*lf, lo, hi)) cuts.push_back(t);
  }
  cuts.push_back(hi);
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    if (cuts[i + 1] - cuts[i] <= 1e-300) continue;
    out.push_back(makePiece(form, cuts[i], cuts[i + 1]));
  }
  return out;
}

SegmentForm translateForm(const SegmentForm& form, double delta) {
  SegmentForm f = form;
  if (auto* pf = std::get_if<PowerForm>(&f)) {
    pf->shift -= delta;
  } else if (auto* lf = std::get_if<LogPowerForm>(&f)) {
    lf->shift -= delta;
  } else if (auto* li = std::get_if<LevelInverseForm>(&f)) {
    li->tOffset -= delta;
  }
  return f;
}

SegmentForm reflectForm(const SegmentForm& form, double reflectAt) {
  SegmentForm f = form;
  if (auto* pf = std::get_if<PowerForm>(&f)) {
    pf->shift = reflectAt - pf->shift;
    pf->mirrored = !pf->mirrored;
  } else if (auto* lf = std::get_if<LogPowerForm>(&f)) {
    lf->shift = reflectAt - lf->shift;
    lf->mirrored = !lf->mirrored;
  } else if (std::get_if<LevelInverseForm>(&f)) {
    throw UnsupportedForm("level inverses cannot be reflected");
  }
  return f;
}

SegmentForm scaleForm(const SegmentForm& form, double c) {
  SegmentForm f = form;
  if (auto* cf = std::get_if<ConstantForm>(&f)) {
    cf->c *= c;
  } else if (auto* pf = std::get_if<PowerForm>(&f)) {
    pf->coef *= c;
  } else if (auto* lf = std::get_if<LogPowerForm>(&f)) {
    for (auto& tm : lf->terms) tm.coef *= c;
  } else if (auto* li = std::get_if<LevelInverseForm>(&f)) {
    li->scale *= c;
  }
  return f;
}

Segment Segment::scaled(double c) const {
  Segment s = *this;
  s.form = scaleForm(form, c);
  return s;
}

Segment Segment::translatedDilated(double a, double r) const {
  Segment s;
  s.lo = a + r * lo;
  s.hi = a + r * hi;
  SegmentForm f = form;
  if (auto* pf = std::get_if<PowerForm>(&f)) {
    pf->coef *= safe_pow(r, -pf->exponent);
    pf->shift = a + r * pf->shift;
  } else if (auto* lf = std::get_if<LogPowerForm>(&f)) {
    const double cs = safe_pow(r, -lf->powerExp);
    for (auto& tm : lf->terms) tm.coef *= cs;
    lf->shift = a + r * lf->shift;
    lf->logOffset += std::log(r);
  } else if (auto* li = std::get_if<LevelInverseForm>(&f)) {
    li->tOffset = a + r * li->tOffset;
    li->tScale *= r;
  }
  s.form = f;
  return s;
}

Segment Segment::restricted(double newLo, double newHi) const {
  Segment s = *this;
  s.lo = std::max(lo, newLo);
  s.hi = std::min(hi, newHi);
  if (s.lo >= s.hi) throw std::invalid_argument("empty segment restriction");
  return s;
}

void Segment::validate() const {
  if (!(hi > lo) || lo < 0.0 || hi > 1.0 + 1e-12)
    throw std::invalid_argument("segment interval must be nonempty in (0,1]");
  if (auto* pf = std::get_if<PowerForm>(&form)) {
    if (!std::isfinite(pf->coef) || !std::isfinite(pf->exponent))
      throw std::invalid_argument("power segment parameters must be finite");
    if (!pf->mirrored && pf->shift > lo + 1e-15)
      throw std::invalid_argument("power shift must sit left of the interval");
    if (pf->mirrored && pf->shift < hi - 1e-15)
      throw std::invalid_argument("mirrored power shift must sit right of the interval");
  } else if (auto* lf = std::get_if<LogPowerForm>(&form)) {
    if (!lf->mirrored && lf->shift > lo + 1e-15)
      throw std::invalid_argument("log-power shift must sit left of the interval");
    if (lf->mirrored && lf->shift < hi - 1e-15)
      throw std::invalid_argument("mirrored log-power shift must sit right of the interval");
    const double uMax =
        lf->mirrored ? lf->shift - lo : hi - lf->shift;
    bool needPositiveZ = false;
    for (const auto& tm : lf->terms)
      if (!isSmallInteger(tm.exp)) needPositiveZ = true;
    if (needPositiveZ && lf->logOffset - std::log(uMax) <= 0.0)
      throw std::invalid_argument(
          "log factor must stay positive for fractional log exponents");
  }
}

}  // namespace rispace
