#include "zk/stabilization.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zk/calculus.hpp"
#include "zk/error.hpp"

namespace zk::stabilization {

namespace {

void require_positive(double v, const char* name) {
  if (!std::isfinite(v) || v <= 0.0) throw DomainError(std::string(name) + " must be finite and positive");
}

void require_admissible(const DecayTheory& theory) {
  if (!theory.admissible) throw DomainError("decay theory is not admissible for this geometry");
}

}  // namespace

DecayTheory decay_theory(int alpha, const DecayGeometry& geometry) {
  if (alpha != 0 && alpha != 1) throw DomainError("alpha must be 0 or 1");
  const double L = geometry.L;
  require_positive(L, "L");
  if (geometry.B) require_positive(*geometry.B, "B");

  DecayTheory t;
  t.alpha = alpha;
  t.geometry = geometry;
  const double L2 = L * L;
  const double transverse = geometry.B ? 2.0 / (*geometry.B * *geometry.B) : 0.0;
  t.A_sq = 0.5 * (24.0 / L2 + transverse - alpha);
  t.admissible = t.A_sq > 0.0;
  if (!t.admissible) {
    t.A_sq = 0.0;
    return t;
  }
  t.delta = 0.5 * t.A_sq;
  t.eps_small = t.A_sq / (2.0 * (8.0 / L2 + transverse));

  if (geometry.B) {
    const double B = *geometry.B;
    const double B2 = B * B;
    const double s = 3.0 * t.A_sq * L * B;
    t.threshold = s * s / (32.0 * (4.0 * B2 + L2));
    t.rate = alpha == 1 ? t.A_sq / (1.0 + L) : (12.0 * B2 + L2) / (B2 * L2 * (1.0 + L));
  } else if (alpha == 1) {
    const double d = 24.0 - L2;
    t.threshold = 9.0 * d * d / (512.0 * L2);
    t.rate = d / (2.0 * L2 * (1.0 + L));
  } else {
    t.threshold = 81.0 / (8.0 * L2);
    t.rate = 12.0 / (L2 * (1.0 + L));
  }
  return t;
}

double threshold_alternate_form(double A_sq, double L, double B) {
  return 9.0 * A_sq * A_sq / (16.0 * (8.0 / (L * L) + 2.0 / (B * B)));
}

SmallnessCheck check_smallness(const Field& u0, const DecayTheory& theory) {
  require_admissible(theory);
  SmallnessCheck out;
  out.weighted = calculus::weighted_l2_sq(u0);
  out.ok = out.weighted < theory.threshold;
  return out;
}

LyapunovReport lyapunov_monitor(const EnergyTrace& trace, const DecayTheory& theory) {
  require_admissible(theory);
  const auto& s = trace.samples;
  if (s.size() < 3) throw DomainError("trace too short for the Lyapunov monitor (need 3 samples)");

  LyapunovReport out;
  out.residuals.resize(s.size());
  const double bound = 9.0 * theory.eps_small * theory.delta / 4.0;
  const std::size_t n = s.size();
  for (std::size_t k = 0; k < n; ++k) {
    double dw;
    if (k == 0) {
      dw = (s[1].weighted - s[0].weighted) / (s[1].t - s[0].t);
    } else if (k + 1 == n) {
      dw = (s[k].weighted - s[k - 1].weighted) / (s[k].t - s[k - 1].t);
    } else {
      dw = (s[k + 1].weighted - s[k - 1].weighted) / (s[k + 1].t - s[k - 1].t);
    }
    const double bracket = theory.eps_small - 4.0 * s[k].weighted / (9.0 * theory.delta);
    out.residuals[k] = dw + theory.A_sq * s[k].l2_sq + bracket * (s[k].grad_x_sq + s[k].grad_y_sq);
    out.max_excursion = std::max(out.max_excursion, out.residuals[k]);
    out.max_weighted = std::max(out.max_weighted, s[k].weighted);
  }
  const double w0 = s.front().weighted;
  out.relative_excursion = w0 > 0.0 ? out.max_excursion / w0 : out.max_excursion;
  out.persistence_ok = out.max_weighted < bound;
  return out;
}

RateFit fit_decay_rate(const EnergyTrace& trace, double t_lo, double t_hi) {
  if (!(t_hi > t_lo)) throw DomainError("fit window needs t_hi > t_lo");
  std::vector<double> ts, ys;
  for (const auto& smp : trace.samples) {
    if (smp.t < t_lo || smp.t > t_hi) continue;
    if (!(smp.weighted > kEnergyFloor))
      throw DomainError("weighted energy below the 1e-14 floor inside the fit window");
    ts.push_back(smp.t);
    ys.push_back(-std::log(smp.weighted));
  }
  if (ts.size() < 5) throw DomainError("fewer than 5 samples in the fit window");

  const double n = static_cast<double>(ts.size());
  double mt = 0.0, my = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    mt += ts[k];
    my += ys[k];
  }
  mt /= n;
  my /= n;
  double stt = 0.0, sty = 0.0, syy = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    stt += (ts[k] - mt) * (ts[k] - mt);
    sty += (ts[k] - mt) * (ys[k] - my);
    syy += (ys[k] - my) * (ys[k] - my);
  }
  RateFit fit;
  fit.rate = sty / stt;
  double sres = 0.0;
  for (std::size_t k = 0; k < ts.size(); ++k) {
    const double r = ys[k] - my - fit.rate * (ts[k] - mt);
    sres += r * r;
  }
  fit.r_squared = syy > 0.0 ? 1.0 - sres / syy : 1.0;
  return fit;
}

DecayVerdict verdict(const EnergyTrace& trace, const DecayTheory& theory, double tolerance) {
  const auto& s = trace.samples;
  if (s.empty()) throw DomainError("empty trace");
  DecayVerdict v;
  v.theory = theory;
  v.initial_weighted = s.front().weighted;
  v.smallness_ok = theory.admissible && v.initial_weighted < theory.threshold;

  double t_f = s.front().t;
  for (const auto& smp : s)
    if (smp.weighted > kEnergyFloor) t_f = smp.t;
  v.fit_t_hi = t_f;
  v.fit_t_lo = s.front().t + 0.5 * (t_f - s.front().t);
  if (t_f > s.front().t) {
    const RateFit fit = fit_decay_rate(trace, v.fit_t_lo, v.fit_t_hi);
    v.fitted_rate = fit.rate;
    v.r_squared = fit.r_squared;
  }

  if (!theory.admissible) return v;

  bool inside = true;
  for (const auto& smp : s) {
    const double envelope = v.initial_weighted * std::exp(-theory.rate * (smp.t - s.front().t));
    if (envelope > 0.0) v.worst_envelope_ratio = std::max(v.worst_envelope_ratio, smp.weighted / envelope);
    if (smp.weighted > envelope * (1.0 + tolerance)) inside = false;
  }
  v.margin = v.fitted_rate / theory.rate;
  v.envelope_ok = inside && v.fitted_rate >= theory.rate * (1.0 - tolerance);
  return v;
}

}  // namespace zk::stabilization
