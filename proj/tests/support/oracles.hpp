#pragma once

// Independent reference computations for the tests. Nothing here calls into
// the code under test except where a test needs a library object as input.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace oracle {

using std::numbers::pi;

// Real roots of s^3 - (1 - xi) s + beta by scanning for sign changes and
// bisecting in long double. Double roots (tangencies) are not found.
inline std::vector<double> cubic_real_roots(double xi, double beta) {
  using LD = long double;
  const LD a = 1.0L - xi;
  auto f = [&](LD s) { return s * s * s - a * s + static_cast<LD>(beta); };
  const LD R = 2.0L + std::abs(a) + std::abs(static_cast<LD>(beta));
  constexpr int kCells = 200000;
  std::vector<double> roots;
  LD prev_s = -R, prev_f = f(-R);
  for (int k = 1; k <= kCells; ++k) {
    const LD s = -R + 2.0L * R * k / kCells;
    const LD fs = f(s);
    if (fs == 0.0L) {
      roots.push_back(static_cast<double>(s));
    } else if ((prev_f < 0.0L) != (fs < 0.0L) && prev_f != 0.0L) {
      LD lo = prev_s, hi = s;
      for (int it = 0; it < 200; ++it) {
        const LD mid = 0.5L * (lo + hi);
        if ((f(lo) < 0.0L) == (f(mid) < 0.0L))
          lo = mid;
        else
          hi = mid;
      }
      roots.push_back(static_cast<double>(0.5L * (lo + hi)));
    }
    prev_s = s;
    prev_f = fs;
  }
  return roots;
}

// Gaussian elimination with partial pivoting, row-major n x n.
inline std::vector<double> dense_solve(std::vector<long double> A, std::vector<long double> b) {
  const std::size_t n = b.size();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    for (std::size_t r = c + 1; r < n; ++r)
      if (std::abs(A[r * n + c]) > std::abs(A[p * n + c])) p = r;
    if (A[p * n + c] == 0.0L) throw std::runtime_error("singular");
    if (p != c) {
      for (std::size_t k = 0; k < n; ++k) std::swap(A[p * n + k], A[c * n + k]);
      std::swap(b[p], b[c]);
    }
    for (std::size_t r = c + 1; r < n; ++r) {
      const long double m = A[r * n + c] / A[c * n + c];
      if (m == 0.0L) continue;
      for (std::size_t k = c; k < n; ++k) A[r * n + k] -= m * A[c * n + k];
      b[r] -= m * b[c];
    }
  }
  std::vector<double> x(n);
  for (std::size_t r = n; r-- > 0;) {
    long double s = b[r];
    for (std::size_t k = r + 1; k < n; ++k) s -= A[r * n + k] * x[k];
    x[r] = static_cast<double>(s / A[r * n + r]);
  }
  return x;
}

// Exact fractions for the closed-form theory constants.
struct Fraction {
  std::int64_t num;
  std::int64_t den;

  Fraction(std::int64_t n = 0, std::int64_t d = 1) : num(n), den(d) { normalise(); }
  void normalise() {
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }
  double value() const { return static_cast<double>(num) / static_cast<double>(den); }
  friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(Fraction a, Fraction b) { return a.num == b.num && a.den == b.den; }
};

// The counterexample mode on (0, 4 pi / sqrt 3) x (-pi, pi), unnormalised.
inline double counterexample(double x, double y) {
  return std::cos(0.5 * y) * (1.0 - std::cos(0.5 * std::sqrt(3.0) * x));
}

// Log-log slope between successive errors under mesh halving.
inline double halving_ratio(double coarse, double fine) { return coarse / fine; }

// Ordinary least squares slope of y against x.
inline double ols_slope(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
  const double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < x.size(); ++k) {
    sxx += (x[k] - mx) * (x[k] - mx);
    sxy += (x[k] - mx) * (y[k] - my);
  }
  return sxy / sxx;
}

}  // namespace oracle
