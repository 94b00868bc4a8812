#include <cmath>
#include <numbers>
#include <random>

#include "zk/calculus.hpp"
#include "zk/error.hpp"
#include "zk/harness.hpp"
#include "zk/spectral.hpp"
#include "zk/stabilization.hpp"

namespace zk::harness {

namespace {

using std::numbers::pi;

constexpr double kInequalitySlack = 1.05;
constexpr double kTripleTolerance = 1e-12;
constexpr double kBalanceTolerance = 0.01;

std::string describe(const char* what, int sample, double value) {
  return std::string(what) + " sample " + std::to_string(sample) + ": " + std::to_string(value);
}

// Smooth clean field from a handful of random sine modes.
geometry::Field random_clean_field(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> grid_n(16, 48);
  std::uniform_real_distribution<double> len(0.5, 6.0);
  std::uniform_real_distribution<double> half(0.25, 3.0);
  std::normal_distribution<double> normal(0.0, 1.0);
  const geometry::Grid grid(len(rng), half(rng), grid_n(rng), grid_n(rng));
  const double L = grid.length();
  const double B = grid.half_width();
  constexpr int kModes = 4;
  std::vector<double> c;
  for (int k = 0; k < kModes * kModes; ++k) c.push_back(normal(rng));
  auto f = [&](double x, double y) {
    double s = 0.0;
    for (int k = 1; k <= kModes; ++k)
      for (int m = 1; m <= kModes; ++m)
        s += c[(k - 1) * kModes + (m - 1)] / (k * m) * std::sin(k * pi * x / L) *
             std::sin(m * pi * (y + B) / (2.0 * B));
    return s;
  };
  return geometry::enforce_dirichlet(geometry::sample_field(grid, f));
}

void run_inequalities(SuiteResult& r, int samples, std::mt19937_64& rng) {
  for (int s = 0; s < samples; ++s) {
    const geometry::Field u = random_clean_field(rng);
    const double ratios[] = {calculus::check_gn(u, 3), calculus::check_gn(u, 4), calculus::check_sup_bound(u),
                             calculus::check_poincare(u, calculus::Axis::x),
                             calculus::check_poincare(u, calculus::Axis::y)};
    const char* names[] = {"gn3", "gn4", "sup", "poincare_x", "poincare_y"};
    for (int k = 0; k < 5; ++k) {
      r.worst = std::max(r.worst, ratios[k]);
      if (ratios[k] <= kInequalitySlack) {
        ++r.passed;
      } else {
        ++r.failed;
        r.failures.push_back(describe(names[k], s, ratios[k]));
      }
    }
  }
}

void run_spectral(SuiteResult& r, int samples, std::mt19937_64& rng) {
  std::uniform_int_distribution<int> kl(1, 6);
  std::uniform_int_distribution<int> nn(1, 4);
  std::uniform_real_distribution<double> stretch(1.01, 12.0);
  for (int s = 0; s < samples; ++s) {
    const int k = kl(rng), l = kl(rng), n = nn(rng);
    const double B = 0.5 * pi * n * stretch(rng);  // mode_xi(n, B) < 1
    const auto t = spectral::resonant_family(k, l, n, B);
    double worst = 0.0;
    for (double v : spectral::triple_residuals(t)) worst = std::max(worst, v);
    r.worst = std::max(r.worst, worst);
    if (worst <= kTripleTolerance) {
      ++r.passed;
    } else {
      ++r.failed;
      r.failures.push_back(describe("triple", s, worst));
    }
  }
}

void run_conservation(SuiteResult& r, int samples, std::mt19937_64& rng) {
  for (int s = 0; s < samples; ++s) {
    dynamics::SimConfig c;
    c.alpha = 1;
    c.linear = true;
    c.nx = c.ny = 63;
    c.dt = 1e-4;  // resolves the early boundary-layer transient of k = 3 modes
    c.t_end = 0.5;
    c.trace_stride = 1;
    c.snapshot_stride = 1000;
    c.initial.kind = "random_modes";
    c.initial.seed = rng();
    const auto traj = dynamics::simulate(c);
    const BalanceCheck b = energy_balance(traj.trace);
    r.worst = std::max(r.worst, b.max_relative_defect);
    if (b.max_relative_defect <= kBalanceTolerance && b.non_increasing) {
      ++r.passed;
    } else {
      ++r.failed;
      r.failures.push_back(describe(b.non_increasing ? "balance" : "monotonicity", s, b.max_relative_defect));
    }
  }
}

}  // namespace

BalanceCheck energy_balance(const dynamics::EnergyTrace& trace) {
  const auto& s = trace.samples;
  if (s.size() < 2) throw DomainError("energy balance needs at least two samples");
  BalanceCheck out;
  out.non_increasing = true;
  const double e0 = s.front().l2_sq;
  const double scale = e0 > 0.0 ? e0 : 1.0;
  const double floor = stabilization::kEnergyFloor * e0;
  double dissipated = 0.0;
  for (std::size_t k = 1; k < s.size(); ++k) {
    dissipated += 0.5 * (s[k].flux0 + s[k - 1].flux0) * (s[k].t - s[k - 1].t);
    const double defect = std::abs(s[k].l2_sq + dissipated - e0) / scale;
    out.max_relative_defect = std::max(out.max_relative_defect, defect);
    if (s[k].l2_sq <= s[k - 1].l2_sq) continue;
    if (s[k - 1].l2_sq > floor)
      out.non_increasing = false;
    else
      ++out.unresolved_increases;
  }
  return out;
}

SuiteResult verify_suite(const std::string& suite, int samples, std::uint64_t seed) {
  if (samples < 1) throw DomainError("samples must be >= 1");
  std::mt19937_64 rng(seed);
  SuiteResult r;
  if (suite == "inequalities")
    run_inequalities(r, samples, rng);
  else if (suite == "spectral")
    run_spectral(r, samples, rng);
  else if (suite == "conservation")
    run_conservation(r, samples, rng);
  else
    throw DomainError("unknown suite '" + suite + "'");
  return r;
}

}  // namespace zk::harness
