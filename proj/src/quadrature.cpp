#include "rispace/quadrature.hpp"

#include <algorithm>
#include <cmath>

namespace rispace {

namespace {

double simpsonStep(double a, double b, double fa, double fm, double fb) {
  return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

double adaptiveRec(const std::function<double(double)>& f, double a, double b,
                   double fa, double fm, double fb, double whole, double tol,
                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) return kInf;
  const double left = simpsonStep(f, a, m, fa, flm, fm);
  const double right = simpsonStep(f, m, b, fm, frm, fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol)
    return left + right + delta / 15.0;
  return adaptiveRec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptiveRec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double relTol) {
  if (b <= a) return 0.0;
  const double fa = f(a);
  const double fb = f(b);
  const double fm = f(0.5 * (a + b));
  if (!std::isfinite(fa) || !std::isfinite(fb) || !std::isfinite(fm))
    return kInf;
  const double whole = simpsonStep(f, a, b, fa, fm, fb);
  const double scale = std::max({std::abs(whole), (b - a) * std::abs(fm), 1e-300});
  return adaptiveRec(f, a, b, fa, fm, fb, whole, relTol * scale, 26);
}

namespace {

struct Panel {
  double a, b;
  bool singularLeft = false;
  bool singularRight = false;
  std::vector<double> cells;  // per-octave contributions (k = 1..K)
  double full = 0.0;          // used when no singular end
  bool resolved = false;      // no dyadic tail pending
};

// Geometric tail extrapolation from trailing cell ratios. Returns false when
// the decay is not consistently geometric.
bool geometricTail(const std::vector<double>& cells, double* tail,
                   double* err) {
  const std::size_t n = cells.size();
  if (n < 10) return false;
  double rmax = 0.0, rmin = kInf;
  for (std::size_t i = n - 6; i < n; ++i) {
    const double denom = std::abs(cells[i - 1]);
    if (denom < 1e-300) {
      rmax = std::max(rmax, 0.0);
      rmin = std::min(rmin, 0.0);
      continue;
    }
    const double r = std::abs(cells[i]) / denom;
    rmax = std::max(rmax, r);
    rmin = std::min(rmin, r);
  }
  if (!(rmax < 0.995)) return false;
  const double rho = rmax;
  const double last = std::abs(cells.back());
  const double t = last * rho / (1.0 - rho);
  const double spread = rmax - rmin;
  if (spread > 0.05 * (1.0 - rho) && t > 1e-14) return false;
  *tail = t;
  *err = std::max(last * spread / ((1.0 - rho) * (1.0 - rho)), 1e-18 * t);
  return true;
}

}  // namespace

IntegralCertificate certify_partial_sums(
    const std::vector<std::pair<double, double>>& evidence, double tailBound,
    const QuadratureOptions& opts) {
  IntegralCertificate cert;
  cert.evidence = evidence;
  if (evidence.empty()) {
    cert.status = CertStatus::Converged;
    cert.note = "empty";
    return cert;
  }
  std::vector<double> partials;
  partials.reserve(evidence.size());
  for (const auto& e : evidence) partials.push_back(e.second);
  const double last = partials.back();
  cert.fittedSlope = log2_slope_tail(partials, 10);

  if (!std::isfinite(last) || last >= opts.divergenceThreshold) {
    cert.status = CertStatus::Diverged;
    cert.value = kInf;
    cert.note = "truncations exceed the divergence threshold";
    return cert;
  }

  std::vector<double> increments;
  for (std::size_t i = 1; i < partials.size(); ++i)
    increments.push_back(partials[i] - partials[i - 1]);
  if (increments.size() >= 10) {
    bool allPos = true;
    for (std::size_t i = increments.size() - 10; i < increments.size(); ++i)
      if (!(increments[i] > 0)) allPos = false;
    if (allPos && increments.back() >= 1e-9 * std::max(1.0, last)) {
      const double islope = log2_slope_tail(increments, 10);
      cert.incrementSlope = islope;
      if (islope >= -0.02) {
        cert.status = CertStatus::Diverged;
        cert.value = kInf;
        cert.note = "truncated values grow with non-vanishing increments";
        return cert;
      }
    } else {
      cert.incrementSlope = log2_slope_tail(increments, 10);
    }
  }

  if (tailBound >= 0.0) {
    cert.status = CertStatus::Converged;
    cert.value = last + 0.5 * tailBound;
    cert.absError = 0.5 * tailBound + 1e-15 * std::abs(last);
    return cert;
  }
  // no certified tail: fall back to geometric extrapolation of increments
  double tail = 0.0, err = 0.0;
  if (geometricTail(increments, &tail, &err)) {
    cert.status = CertStatus::Converged;
    cert.value = last + tail;
    cert.absError = err + 1e-15 * std::abs(last);
    return cert;
  }
  cert.status = CertStatus::Inconclusive;
  cert.value = last;
  cert.note = "no convergence or divergence certificate reached";
  return cert;
}

IntegralCertificate integrate_certified(const Integrand& g, double lo,
                                        double hi,
                                        const QuadratureOptions& opts) {
  IntegralCertificate cert;
  if (hi <= lo) {
    cert.status = CertStatus::Converged;
    return cert;
  }

  std::vector<double> cuts{lo, hi};
  for (double b : g.breakpoints)
    if (b > lo + 1e-300 && b < hi - 1e-300) cuts.push_back(b);
  for (double s : g.singularities)
    if (s > lo + 1e-300 && s < hi - 1e-300) cuts.push_back(s);
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end(),
                         [](double a, double b) { return b - a < 1e-300; }),
             cuts.end());

  auto isSingular = [&](double t) {
    if (t == lo) return true;  // the origin panel is always approached dyadically
    for (double s : g.singularities)
      if (std::abs(s - t) <= 1e-15 * std::max(1.0, std::abs(t))) return true;
    return false;
  };

  std::vector<Panel> panels;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double a = cuts[i];
    const double b = cuts[i + 1];
    const bool sl = isSingular(a);
    const bool sr = isSingular(b);
    if (sl && sr) {
      const double m = 0.5 * (a + b);
      panels.push_back({a, m, true, false});
      panels.push_back({m, b, false, true});
    } else {
      panels.push_back({a, b, sl, sr});
    }
  }

  const int K = opts.maxOctaves;
  double running = 0.0;
  bool overflow = false;
  for (auto& p : panels) {
    if (!p.singularLeft && !p.singularRight) {
      p.full = adaptive_simpson(g.eval, p.a, p.b, opts.relTol);
      p.resolved = true;
      running += p.full;
      if (!std::isfinite(running) ||
          running > 100.0 * opts.divergenceThreshold)
        overflow = true;
      continue;
    }
    const double h = p.b - p.a;
    p.cells.reserve(K);
    for (int k = 1; k <= K && !overflow; ++k) {
      double ca, cb;
      if (p.singularLeft) {
        ca = p.a + h * std::exp2(-static_cast<double>(k));
        cb = p.a + h * std::exp2(-static_cast<double>(k - 1));
      } else {
        ca = p.b - h * std::exp2(-static_cast<double>(k - 1));
        cb = p.b - h * std::exp2(-static_cast<double>(k));
      }
      const double v = adaptive_simpson(g.eval, ca, cb, opts.relTol);
      p.cells.push_back(v);
      running += v;
      if (!std::isfinite(running) ||
          running > 100.0 * opts.divergenceThreshold)
        overflow = true;
    }
  }

  // octave-truncated values: resolved panels enter at k=1
  std::vector<double> partials(static_cast<std::size_t>(K), 0.0);
  double resolvedSum = 0.0;
  for (const auto& p : panels)
    if (p.resolved) resolvedSum += p.full;
  for (int k = 1; k <= K; ++k) {
    double t = resolvedSum;
    for (const auto& p : panels) {
      if (p.resolved) continue;
      for (int j = 0; j < std::min<std::size_t>(p.cells.size(),
                                                static_cast<std::size_t>(k));
           ++j)
        t += p.cells[static_cast<std::size_t>(j)];
    }
    partials[static_cast<std::size_t>(k - 1)] = t;
  }
  cert.evidence.reserve(static_cast<std::size_t>(K));
  for (int k = 1; k <= K; ++k)
    cert.evidence.emplace_back(std::exp2(-static_cast<double>(k)),
                               partials[static_cast<std::size_t>(k - 1)]);
  cert.fittedSlope = log2_slope_tail(partials, 10);

  const double last = partials.back();
  if (overflow || !std::isfinite(last) || last >= opts.divergenceThreshold) {
    cert.status = CertStatus::Diverged;
    cert.value = kInf;
    cert.note = "truncations exceed the divergence threshold";
    return cert;
  }

  // convergence: every dyadic panel tail must extrapolate geometrically
  double tailSum = 0.0, tailErr = 0.0;
  bool allTails = true;
  for (const auto& p : panels) {
    if (p.resolved) continue;
    double t = 0.0, e = 0.0;
    if (!geometricTail(p.cells, &t, &e)) {
      // a fully decayed tail (cells at zero) is converged as well
      double lastCells = 0.0;
      for (std::size_t j = p.cells.size() >= 3 ? p.cells.size() - 3 : 0;
           j < p.cells.size(); ++j)
        lastCells += std::abs(p.cells[j]);
      if (lastCells <= 1e-300) {
        t = 0.0;
        e = 0.0;
      } else {
        allTails = false;
      }
    }
    tailSum += t;
    tailErr += e;
  }
  if (allTails) {
    cert.status = CertStatus::Converged;
    cert.value = last + tailSum;
    cert.absError =
        tailErr + std::max(std::abs(cert.value), 1.0) * 10.0 * opts.relTol;
    return cert;
  }

  std::vector<double> increments;
  for (std::size_t i = 1; i < partials.size(); ++i)
    increments.push_back(partials[i] - partials[i - 1]);
  bool allPos = increments.size() >= 10;
  if (allPos)
    for (std::size_t i = increments.size() - 10; i < increments.size(); ++i)
      if (!(increments[i] > 0)) allPos = false;
  if (allPos && increments.back() >= 1e-9 * std::max(1.0, last)) {
    cert.incrementSlope = log2_slope_tail(increments, 10);
    if (cert.incrementSlope >= -0.02) {
      cert.status = CertStatus::Diverged;
      cert.value = kInf;
      cert.note = "truncated values grow with non-vanishing increments";
      return cert;
    }
  }

  cert.status = CertStatus::Inconclusive;
  cert.value = last;
  cert.note = "no convergence or divergence certificate reached by the horizon";
  return cert;
}

CumulativeIntegral::CumulativeIntegral(Integrand g, double lo, double hi,
                                       QuadratureOptions opts)
    : g_(std::move(g)), lo_(lo), hi_(hi), opts_(opts) {
  total_ = integrate_certified(g_, lo_, hi_, opts_);

  std::vector<double> cutset{lo_, hi_};
  for (double b : g_.breakpoints)
    if (b > lo_ && b < hi_) cutset.push_back(b);
  std::vector<double> sing{lo_};
  for (double s : g_.singularities)
    if (s >= lo_ && s < hi_) sing.push_back(s);
  std::sort(sing.begin(), sing.end());
  sing.erase(std::unique(sing.begin(), sing.end()), sing.end());
  for (double s : sing) {
    // dyadic ladder to the right of each singular point
    double span = hi_ - s;
    for (double b : cutset)
      if (b > s) span = std::min(span, b - s);
    for (int k = 0; k <= opts_.maxOctaves; ++k)
      cutset.push_back(s + span * std::exp2(-static_cast<double>(k)));
  }
  std::sort(cutset.begin(), cutset.end());
  cutset.erase(std::unique(cutset.begin(), cutset.end(),
                           [](double a, double b) { return b - a < 1e-300; }),
               cutset.end());
  cuts_ = cutset;

  // per-interval integrals; intervals whose left endpoint is singular get a
  // geometric extrapolation from the two dyadic cells just above them
  const std::size_t n = cuts_.size();
  std::vector<double> vals(n > 0 ? n - 1 : 0, 0.0);
  sliver_.assign(vals.size(), false);
  auto singularAt = [&](double t) {
    for (double s : sing)
      if (std::abs(s - t) <= 1e-15 * std::max(1.0, std::abs(t))) return true;
    return false;
  };
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (singularAt(cuts_[i]))
      sliver_[i] = true;
    else
      vals[i] = adaptive_simpson(g_.eval, cuts_[i], cuts_[i + 1], opts_.relTol);
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (!sliver_[i]) continue;
    double est = 0.0;
    if (i + 2 < vals.size() && std::isfinite(vals[i + 1]) &&
        std::isfinite(vals[i + 2]) && std::abs(vals[i + 2]) > 1e-300) {
      const double rho = std::abs(vals[i + 1]) / std::abs(vals[i + 2]);
      if (rho < 0.995) est = std::abs(vals[i + 1]) * rho / (1.0 - rho);
    }
    vals[i] = est;
  }
  prefix_.assign(n, 0.0);
  for (std::size_t i = 0; i + 1 < n; ++i) prefix_[i + 1] = prefix_[i] + vals[i];
}

double CumulativeIntegral::upTo(double t) const {
  if (cuts_.empty() || t <= cuts_.front()) return 0.0;
  t = std::min(t, cuts_.back());
  auto it = std::upper_bound(cuts_.begin(), cuts_.end(), t);
  const std::size_t i = static_cast<std::size_t>(it - cuts_.begin()) - 1;
  double v = prefix_[i];
  if (t > cuts_[i] && i + 1 < cuts_.size()) {
    if (sliver_[i]) {
      // proportional share; slivers sit far below any accuracy-critical scale
      v += (prefix_[i + 1] - prefix_[i]) * (t - cuts_[i]) /
           (cuts_[i + 1] - cuts_[i]);
    } else {
      v += adaptive_simpson(g_.eval, cuts_[i], t, opts_.relTol);
    }
  }
  return v;
}

}  // namespace rispace
