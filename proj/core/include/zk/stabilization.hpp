#pragma once

// Small-data exponential stabilization: admissibility, smallness thresholds,
// theoretical rates, and checks of simulated energy traces against them.
//
// All four cases share one construction. With
//   2 A^2 = 24/L^2 + 2/B^2 - alpha      (the 2/B^2 term is absent on strips)
// and delta = A^2/2, eps = A^2 / (2 (8/L^2 + 2/B^2)), a datum with
// ((1+x), u0^2) < 9 eps delta / 4 has weighted energy decaying at least like
// exp(-A^2 t / (1+L)). The thresholds and rates below are evaluated in the
// closed forms specific to each case; the shared construction is checked
// against them in the tests.

#include <optional>
#include <utility>
#include <vector>

#include "zk/dynamics.hpp"
#include "zk/geometry.hpp"

namespace zk::stabilization {

using dynamics::EnergyTrace;
using geometry::Field;

inline constexpr double kEnvelopeTolerance = 0.05;
inline constexpr double kEnergyFloor = 1e-14;

// A rectangle (0,L) x (-B,B) when B is set, the half strip (0,L) x R otherwise.
struct DecayGeometry {
  double L = 0.0;
  std::optional<double> B;

  bool is_strip() const noexcept { return !B.has_value(); }
};

struct DecayTheory {
  int alpha = 1;
  DecayGeometry geometry;
  bool admissible = false;
  double A_sq = 0.0;
  double threshold = 0.0;  // bound on ((1+x), u0^2)
  double rate = 0.0;
  double delta = 0.0;
  double eps_small = 0.0;
};

// Throws DomainError on non-positive or non-finite dimensions or alpha not in
// {0, 1}. An alpha = 1 geometry failing 24/L^2 + 2/B^2 > 1 comes back with
// admissible = false and zero threshold and rate.
DecayTheory decay_theory(int alpha, const DecayGeometry& geometry);

// 9 A^4 / (16 (8/L^2 + 2/B^2)), the second printed form of the rectangle
// threshold. Used to cross-check decay_theory.
double threshold_alternate_form(double A_sq, double L, double B);

struct SmallnessCheck {
  double weighted = 0.0;
  bool ok = false;
};

// Throws DomainError if the theory is not admissible.
SmallnessCheck check_smallness(const Field& u0, const DecayTheory& theory);

struct LyapunovReport {
  // d/dt w + A^2 |u|^2 + (eps - 4 w / (9 delta)) |grad u|^2 per sample.
  std::vector<double> residuals;
  double max_excursion = 0.0;       // max(0, max residual)
  double relative_excursion = 0.0;  // max_excursion / weighted(0)
  double max_weighted = 0.0;
  bool persistence_ok = false;      // weighted(t) < 9 eps delta / 4 throughout
};

// Time derivatives by central differences (one-sided at the ends). Throws
// DomainError on fewer than 3 samples or an inadmissible theory.
LyapunovReport lyapunov_monitor(const EnergyTrace& trace, const DecayTheory& theory);

struct RateFit {
  double rate = 0.0;
  double r_squared = 0.0;
};

// Least-squares slope of -log(weighted) over samples with t in [t_lo, t_hi].
// Throws DomainError when t_hi <= t_lo, fewer than 5 samples fall in the
// window, or any of them is at or below kEnergyFloor.
RateFit fit_decay_rate(const EnergyTrace& trace, double t_lo, double t_hi);

struct DecayVerdict {
  DecayTheory theory;
  double initial_weighted = 0.0;
  bool smallness_ok = false;
  bool envelope_ok = false;
  double fitted_rate = 0.0;
  double r_squared = 0.0;
  double margin = 0.0;  // fitted_rate / rate, 0 when inadmissible
  double fit_t_lo = 0.0;
  double fit_t_hi = 0.0;
  double worst_envelope_ratio = 0.0;  // max weighted(t) / (weighted(0) e^{-rate t})
};

// The fit uses [t_f/2, t_f] where t_f is the last sample time with weighted
// above kEnergyFloor (normally the end of the run). An inadmissible theory
// gives envelope_ok = false rather than an error.
DecayVerdict verdict(const EnergyTrace& trace, const DecayTheory& theory,
                     double tolerance = kEnvelopeTolerance);

}  // namespace zk::stabilization
