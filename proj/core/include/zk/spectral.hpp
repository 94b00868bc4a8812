#pragma once

// Closed-form spectral data of the linearized operator v_x + v_xxx + v_xyy
// on (0,L) x (-B,B): transverse eigenvalues, the resonance cubic
// s^3 - (1 - xi) s + beta = 0, critical lengths and rectangles, the KdV
// critical set, and the non-decaying eigenmodes built from them.

#include <array>
#include <cmath>
#include <complex>
#include <functional>
#include <span>
#include <vector>

namespace zk::spectral {

// Tolerance on |critical_residual| for flagging a rectangle critical.
inline constexpr double kCriticalTolerance = 1e-9;

// (pi n / (2B))^2, the n-th Dirichlet eigenvalue of -d^2/dy^2 on (-B,B).
double mode_xi(int n, double B);

// Roots of s^3 - (1 - xi) s + beta = 0. Real roots come first in ascending
// order with exactly zero imaginary part; a complex pair follows as (a+ib, a-ib).
std::array<std::complex<double>, 3> cubic_roots(double xi, double beta);

struct CriticalLength {
  double L;
  double s1;  // smallest root of the resonant triple, -(2 pi / 3L)(2k + l)
};

// L = (2 pi / sqrt 3) sqrt((k^2 + k l + l^2) / (1 - xi)). Throws DomainError
// for xi >= 1 or k, l < 1.
CriticalLength critical_length(int k, int l, double xi);

// Three real roots s1 < s2 < s3 of the resonance cubic whose exponentials
// e^{i s_j L} coincide.
struct ResonantTriple {
  double s1 = 0.0;
  double s2 = 0.0;
  double s3 = 0.0;
  double beta = 0.0;
  double xi = 0.0;
  int k = 0;
  int l = 0;
  double L = 0.0;
};

// Throws DomainError when mode_xi(n, B) >= 1 or an index is < 1.
ResonantTriple resonant_family(int k, int l, int n, double B);

// Absolute residuals of the invariants of a triple, in this order:
// sum, pairwise sum + (1 - xi), product + beta, spacing k, spacing l,
// and the largest cubic residual over the three roots.
std::array<double, 6> triple_residuals(const ResonantTriple& t);

// (2 pi sqrt(k^2+kl+l^2) / (L sqrt 3))^2 + (pi n / 2B)^2 - 1.
double critical_residual(double L, double B, int k, int l, int n);

struct CriticalRectangle {
  double L = 0.0;
  double B = 0.0;
  int k = 0;
  int l = 0;
  int n = 0;
  double residual = 0.0;
  bool critical() const noexcept { return std::abs(residual) <= kCriticalTolerance; }
};

// Default B-sampling used by enumerate_critical: B_m = m pi / 8, m >= 1.
std::vector<double> default_b_samples(double B_max);

// For alpha = 1, every (k, l, n) within bounds and every sampled B with
// mode_xi(n, B) < 1 and critical_length <= L_max, sorted by (L, B).
// For alpha = 0 the list is always empty.
std::vector<CriticalRectangle> enumerate_critical(double L_max, double B_max, int k_max,
                                                  int l_max, int n_max, int alpha);
std::vector<CriticalRectangle> enumerate_critical(double L_max, std::span<const double> b_samples,
                                                  int k_max, int l_max, int n_max, int alpha);

// L* = 2 pi / sqrt(1 - pi^2 / (4 B^2)); throws DomainError for B <= pi/2.
double minimal_critical_rectangle(double B);

// Distinct values (2 pi / sqrt 3) sqrt(k^2 + k l + l^2), ascending.
std::vector<double> kdv_critical_set(int k_max, int l_max);

// p(x) = scale * sum_j C_j e^{i s_j x} with C_j = mu_{j+1} - mu_{j+2} (cyclic,
// mu_j = i s_j). The scale normalises max |p| = 1 on [0, L] and rotates the
// phase so that p is real and positive at its maximum.
class Profile {
 public:
  explicit Profile(const ResonantTriple& triple);

  std::complex<double> operator()(double x) const;
  std::complex<double> derivative(double x) const;
  double length() const noexcept { return L_; }
  const std::array<std::complex<double>, 3>& coefficients() const noexcept { return c_; }
  const std::array<double, 3>& wavenumbers() const noexcept { return s_; }

 private:
  std::array<double, 3> s_;
  std::array<std::complex<double>, 3> c_;
  double L_;
};

// Throws DomainError when the roots are not strictly increasing.
Profile build_profile(const ResonantTriple& triple);

// v(x, y) = Re p(x) * q(y) with q = cos(pi n y / 2B) for odd n and
// sin(pi n y / 2B) for even n.
class StationaryMode {
 public:
  StationaryMode(int k, int l, int n, double B);

  double operator()(double x, double y) const;
  double transverse(double y) const;
  const ResonantTriple& triple() const noexcept { return triple_; }
  const Profile& profile() const noexcept { return profile_; }
  double length() const noexcept { return triple_.L; }
  double half_width() const noexcept { return B_; }

 private:
  ResonantTriple triple_;
  Profile profile_;
  int n_;
  double B_;
};

StationaryMode stationary_mode(int k, int l, int n, double B);

}  // namespace zk::spectral
