#include "zk/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>
#include <tuple>

#include "zk/error.hpp"

namespace zk::spectral {

namespace {

using std::numbers::pi;
using cplx = std::complex<double>;

double cubic_value(double s, double p, double q) { return (s * s + p) * s + q; }

// One Newton correction, kept only if it lowers the residual.
double polish(double s, double p, double q) {
  const double f = cubic_value(s, p, q);
  const double df = 3.0 * s * s + p;
  if (df == 0.0) return s;
  const double t = s - f / df;
  return std::abs(cubic_value(t, p, q)) < std::abs(f) ? t : s;
}

void require_index(int v, const char* name) {
  if (v < 1) throw DomainError(std::string(name) + " must be a positive integer");
}

}  // namespace

double mode_xi(int n, double B) {
  require_index(n, "n");
  if (!(B > 0.0)) throw DomainError("B must be positive");
  const double r = pi * n / (2.0 * B);
  return r * r;
}

std::array<cplx, 3> cubic_roots(double xi, double beta) {
  // Depressed form s^3 + p s + q = 0.
  const double p = -(1.0 - xi);
  const double q = beta;
  if (!std::isfinite(p) || !std::isfinite(q)) throw DomainError("cubic coefficients must be finite");

  if (p == 0.0 && q == 0.0) return {cplx(0.0), cplx(0.0), cplx(0.0)};

  const double disc = -(4.0 * p * p * p + 27.0 * q * q);
  if (p < 0.0 && disc >= 0.0) {
    // Three real roots: trigonometric form.
    const double m = 2.0 * std::sqrt(-p / 3.0);
    double arg = 3.0 * q / (p * m);
    arg = std::clamp(arg, -1.0, 1.0);
    const double phi = std::acos(arg) / 3.0;
    std::array<double, 3> r{};
    for (int k = 0; k < 3; ++k) r[k] = polish(m * std::cos(phi - 2.0 * pi * k / 3.0), p, q);
    std::sort(r.begin(), r.end());
    return {cplx(r[0]), cplx(r[1]), cplx(r[2])};
  }

  // One real root: Cardano with the cancellation-free branch.
  const double d = q * q / 4.0 + p * p * p / 27.0;
  const double sq = std::sqrt(std::max(d, 0.0));
  const double a = -std::cbrt(q / 2.0 + std::copysign(sq, q));
  const double b = a != 0.0 ? -p / (3.0 * a) : 0.0;
  const double r = polish(a + b, p, q);
  const double im = std::sqrt(std::max(0.75 * r * r + p, 0.0));
  return {cplx(r), cplx(-0.5 * r, im), cplx(-0.5 * r, -im)};
}

CriticalLength critical_length(int k, int l, double xi) {
  require_index(k, "k");
  require_index(l, "l");
  if (!(xi < 1.0)) throw DomainError("no critical length for xi >= 1");
  if (xi < 0.0) throw DomainError("xi must be non-negative");
  const double m = static_cast<double>(k * k + k * l + l * l);
  const double L = 2.0 * pi / std::sqrt(3.0) * std::sqrt(m / (1.0 - xi));
  return {L, -2.0 * pi / (3.0 * L) * (2.0 * k + l)};
}

ResonantTriple resonant_family(int k, int l, int n, double B) {
  const double xi = mode_xi(n, B);
  if (!(xi < 1.0)) throw DomainError("transverse mode too stiff: mode_xi(n, B) >= 1");
  const CriticalLength cl = critical_length(k, l, xi);
  ResonantTriple t;
  t.k = k;
  t.l = l;
  t.xi = xi;
  t.L = cl.L;
  const double unit = 2.0 * pi / (3.0 * cl.L);
  // Written over a common denominator so s1 + s2 + s3 cancels exactly.
  t.s1 = -unit * (2.0 * k + l);
  t.s2 = unit * (k - l);
  t.s3 = unit * (k + 2.0 * l);
  t.beta = -t.s1 * t.s2 * t.s3;
  return t;
}

std::array<double, 6> triple_residuals(const ResonantTriple& t) {
  const double gap = 2.0 * pi / t.L;
  const double p = -(1.0 - t.xi);
  double cubic = 0.0;
  for (double s : {t.s1, t.s2, t.s3}) cubic = std::max(cubic, std::abs(cubic_value(s, p, t.beta)));
  return {std::abs(t.s1 + t.s2 + t.s3),
          std::abs(t.s1 * t.s2 + t.s1 * t.s3 + t.s2 * t.s3 + (1.0 - t.xi)),
          std::abs(t.s1 * t.s2 * t.s3 + t.beta),
          std::abs(t.s2 - t.s1 - gap * t.k),
          std::abs(t.s3 - t.s2 - gap * t.l),
          cubic};
}

double critical_residual(double L, double B, int k, int l, int n) {
  if (!(L > 0.0) || !(B > 0.0)) throw DomainError("L and B must be positive");
  require_index(k, "k");
  require_index(l, "l");
  require_index(n, "n");
  const double a = 2.0 * pi / (L * std::sqrt(3.0)) * std::sqrt(static_cast<double>(k * k + k * l + l * l));
  const double b = pi * n / (2.0 * B);
  return a * a + b * b - 1.0;
}

std::vector<double> default_b_samples(double B_max) {
  std::vector<double> out;
  for (int m = 1;; ++m) {
    const double b = m * pi / 8.0;
    if (b > B_max) break;
    out.push_back(b);
  }
  return out;
}

std::vector<CriticalRectangle> enumerate_critical(double L_max, double B_max, int k_max, int l_max,
                                                  int n_max, int alpha) {
  if (!(B_max > 0.0)) throw DomainError("B_max must be positive");
  const std::vector<double> b = default_b_samples(B_max);
  return enumerate_critical(L_max, b, k_max, l_max, n_max, alpha);
}

std::vector<CriticalRectangle> enumerate_critical(double L_max, std::span<const double> b_samples,
                                                  int k_max, int l_max, int n_max, int alpha) {
  if (!(L_max > 0.0)) throw DomainError("L_max must be positive");
  require_index(k_max, "k_max");
  require_index(l_max, "l_max");
  require_index(n_max, "n_max");
  if (alpha != 0 && alpha != 1) throw DomainError("alpha must be 0 or 1");
  std::vector<CriticalRectangle> out;
  // Without the transport term the resonance cubic is s^3 + beta = 0 and no
  // equally spaced real triple exists.
  if (alpha == 0) return out;
  for (double B : b_samples) {
    if (!(B > 0.0)) throw DomainError("B samples must be positive");
    for (int n = 1; n <= n_max; ++n) {
      const double xi = mode_xi(n, B);
      if (!(xi < 1.0)) continue;
      for (int k = 1; k <= k_max; ++k)
        for (int l = 1; l <= l_max; ++l) {
          const double L = critical_length(k, l, xi).L;
          if (L > L_max) continue;
          out.push_back({L, B, k, l, n, critical_residual(L, B, k, l, n)});
        }
    }
  }
  std::sort(out.begin(), out.end(), [](const CriticalRectangle& a, const CriticalRectangle& b) {
    return std::tie(a.L, a.B, a.k, a.l, a.n) < std::tie(b.L, b.B, b.k, b.l, b.n);
  });
  return out;
}

double minimal_critical_rectangle(double B) {
  if (!(B > pi / 2.0)) throw DomainError("no critical length exists for B <= pi/2");
  return 2.0 * pi / std::sqrt(1.0 - pi * pi / (4.0 * B * B));
}

std::vector<double> kdv_critical_set(int k_max, int l_max) {
  require_index(k_max, "k_max");
  require_index(l_max, "l_max");
  std::set<int> m;
  for (int k = 1; k <= k_max; ++k)
    for (int l = 1; l <= l_max; ++l) m.insert(k * k + k * l + l * l);
  std::vector<double> out;
  for (int v : m) out.push_back(2.0 * pi / std::sqrt(3.0) * std::sqrt(static_cast<double>(v)));
  return out;
}

Profile::Profile(const ResonantTriple& t) : s_{t.s1, t.s2, t.s3}, L_(t.L) {
  const double spread = std::max(std::abs(t.s1), std::abs(t.s3));
  if (!(t.s1 < t.s2 && t.s2 < t.s3) || (t.s2 - t.s1) <= 1e-12 * spread ||
      (t.s3 - t.s2) <= 1e-12 * spread)
    throw DomainError("degenerate profile: resonance roots must be distinct");
  const cplx i(0.0, 1.0);
  const std::array<cplx, 3> mu{i * s_[0], i * s_[1], i * s_[2]};
  for (int j = 0; j < 3; ++j) c_[j] = mu[(j + 1) % 3] - mu[(j + 2) % 3];

  // Normalise: locate max |p| on a fine sample, refine by golden section.
  const int samples = 4096;
  double best_x = 0.0;
  double best = -1.0;
  for (int m = 0; m <= samples; ++m) {
    const double x = L_ * m / samples;
    const double v = std::abs((*this)(x));
    if (v > best) {
      best = v;
      best_x = x;
    }
  }
  double a = std::max(0.0, best_x - L_ / samples);
  double b = std::min(L_, best_x + L_ / samples);
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double x1 = b - g * (b - a);
    const double x2 = a + g * (b - a);
    if (std::abs((*this)(x1)) > std::abs((*this)(x2)))
      b = x2;
    else
      a = x1;
  }
  const cplx peak = (*this)(0.5 * (a + b));
  const cplx scale = std::conj(peak) / (std::abs(peak) * std::abs(peak));
  for (auto& c : c_) c *= scale;
}

std::complex<double> Profile::operator()(double x) const {
  cplx sum = 0.0;
  for (int j = 0; j < 3; ++j) sum += c_[j] * std::exp(cplx(0.0, s_[j] * x));
  return sum;
}

std::complex<double> Profile::derivative(double x) const {
  cplx sum = 0.0;
  for (int j = 0; j < 3; ++j) sum += c_[j] * cplx(0.0, s_[j]) * std::exp(cplx(0.0, s_[j] * x));
  return sum;
}

Profile build_profile(const ResonantTriple& triple) { return Profile(triple); }

StationaryMode::StationaryMode(int k, int l, int n, double B)
    : triple_(resonant_family(k, l, n, B)), profile_(triple_), n_(n), B_(B) {}

double StationaryMode::transverse(double y) const {
  const double arg = pi * n_ * y / (2.0 * B_);
  return (n_ % 2 == 1) ? std::cos(arg) : std::sin(arg);
}

double StationaryMode::operator()(double x, double y) const {
  return profile_(x).real() * transverse(y);
}

StationaryMode stationary_mode(int k, int l, int n, double B) { return StationaryMode(k, l, n, B); }

}  // namespace zk::spectral
