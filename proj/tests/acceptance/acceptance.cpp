// Acceptance checks, one PASS/FAIL line per criterion.
//
//   zk_acceptance            run all eleven
//   zk_acceptance --only N   run criterion N
//
// Exit status is 0 when every selected criterion passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "zk/calculus.hpp"
#include "zk/dynamics.hpp"
#include "zk/error.hpp"
#include "zk/harness.hpp"
#include "zk/spectral.hpp"
#include "zk/stabilization.hpp"

namespace {

using namespace zk;
using std::numbers::pi;

struct Outcome {
  bool pass;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

const double kSqrt3 = std::sqrt(3.0);

Outcome spectral_golden() {
  const double a = std::abs(spectral::critical_length(1, 1, 0.0).L - 2 * pi);
  const double b = std::abs(spectral::critical_length(1, 1, 0.25).L - 4 * pi / kSqrt3);
  const double c = std::abs(spectral::critical_residual(4 * pi / kSqrt3, pi, 1, 1, 1));
  return {a <= 1e-12 && b <= 1e-12 && c <= 1e-12, fmt("|dL(1,1,0)|=%.2e |dL(1,1,1/4)|=%.2e |res|=%.2e", a, b, c)};
}

Outcome viete_suite() {
  std::mt19937_64 rng(20240501);
  std::uniform_int_distribution<int> kl(1, 8), nn(1, 5);
  std::uniform_real_distribution<double> stretch(1.001, 20.0);
  double worst = 0.0;
  for (int s = 0; s < 500; ++s) {
    const int n = nn(rng);
    const auto t = spectral::resonant_family(kl(rng), kl(rng), n, 0.5 * pi * n * stretch(rng));
    const auto r = spectral::triple_residuals(t);
    // The five identities; the sixth entry is the cubic residual (1e-10 bound).
    for (int k = 0; k < 5; ++k) worst = std::max(worst, r[k]);
    if (r[5] > 1e-10) return {false, fmt("cubic residual %.2e at sample %d", r[5], s)};
  }
  return {worst <= 1e-12, fmt("500 tuples, worst identity residual %.2e", worst)};
}

Outcome stationary_residual() {
  std::vector<double> res;
  for (int n : {63, 127, 255}) {
    dynamics::SimConfig c;
    c.L = 4 * pi / kSqrt3;
    c.B = pi;
    c.nx = c.ny = n;
    c.initial.kind = "stationary_mode";
    const auto u = dynamics::make_initial(c);
    res.push_back(dynamics::assemble_linear_part(c.grid(), 1, 0.0).apply(u).max_abs());
  }
  const double r1 = res[0] / res[1], r2 = res[1] / res[2];
  return {std::abs(r1 - 4) <= 1 && std::abs(r2 - 4) <= 1,
          fmt("residuals %.3e %.3e %.3e, ratios %.3f %.3f", res[0], res[1], res[2], r1, r2)};
}

Outcome critical_non_decay() {
  dynamics::SimConfig c;
  c.alpha = 1;
  c.linear = true;
  c.L = 4 * pi / kSqrt3;
  c.B = pi;
  c.nx = c.ny = 127;
  c.dt = 1e-3;
  c.t_end = 20.0;
  c.trace_stride = 50;
  c.snapshot_stride = 100000;
  c.initial.kind = "stationary_mode";
  const auto traj = dynamics::simulate(c);
  if (traj.aborted()) return {false, "run aborted: " + traj.abort_reason};
  const auto& s = traj.trace.samples;
  double drift = 0.0;
  for (const auto& x : s) drift = std::max(drift, std::abs(x.weighted / s.front().weighted - 1.0));
  const double rate = stabilization::fit_decay_rate(traj.trace, 10.0, 20.0).rate;
  return {drift <= 0.02 && rate <= 0.01, fmt("max |w/w0-1|=%.3e, fitted rate %.3e", drift, rate)};
}

Outcome decay_run(int alpha, double rate_expected, double threshold_expected) {
  dynamics::SimConfig c;
  c.alpha = alpha;
  c.L = 2.0;
  c.B = 1.0;
  c.nx = c.ny = 63;
  c.dt = 1e-3;
  c.t_end = 8.0;
  c.trace_stride = 10;
  c.snapshot_stride = 100000;
  const auto theory = harness::theory_for(c);
  if (std::abs(theory.rate - rate_expected) > 1e-12 || std::abs(theory.threshold - threshold_expected) > 1e-12)
    return {false, fmt("theory mismatch: rate %.15g threshold %.15g", theory.rate, theory.threshold)};
  c.initial.target_weighted = 0.5 * theory.threshold;
  const auto traj = dynamics::simulate(c);
  if (traj.aborted()) return {false, "run aborted: " + traj.abort_reason};
  const auto v = stabilization::verdict(traj.trace, theory);
  const bool pass = v.smallness_ok && v.envelope_ok && v.fitted_rate >= 0.95 * theory.rate;
  return {pass, fmt("w0=%.6g worst w/envelope=%.4f fitted %.4f vs rate %.4f (margin %.2f, window [%.2f, %.2f])",
                    v.initial_weighted, v.worst_envelope_ratio, v.fitted_rate, theory.rate, v.margin, v.fit_t_lo,
                    v.fit_t_hi)};
}

Outcome strip_proxy() {
  dynamics::SimConfig c;
  c.alpha = 1;
  c.L = 2.0;
  c.B = 2.0;  // truncation half-width, 4x the datum support radius
  c.domain = geometry::DomainKind::truncated_strip;
  c.nx = 63;
  c.ny = 127;  // hy = 1/32, as on the unit rectangle
  c.dt = 1e-3;
  c.t_end = 8.0;
  c.trace_stride = 10;
  c.snapshot_stride = 100000;
  c.initial.kind = "strip_bump";
  c.initial.support_radius = 0.5;
  const auto theory = harness::theory_for(c);
  if (std::abs(theory.rate - 5.0 / 6.0) > 1e-12) return {false, fmt("strip rate %.15g", theory.rate)};
  c.initial.target_weighted = 0.5 * theory.threshold;
  const auto check = dynamics::strip_truncation_check(c);
  const auto v = stabilization::verdict(check.base.trace, theory);
  return {check.ok && v.envelope_ok,
          fmt("truncation sensitivity %.3e, envelope_ok=%d fitted %.4f vs rate %.4f", check.relative_change,
              v.envelope_ok, v.fitted_rate, theory.rate)};
}

Outcome conservation() {
  dynamics::SimConfig c;
  c.alpha = 1;
  c.linear = true;
  c.epsilon = 0.0;
  c.L = 2.0;
  c.B = 1.0;
  c.nx = c.ny = 63;
  c.dt = 1e-3;
  c.t_end = 10.0;
  c.trace_stride = 1;
  c.snapshot_stride = 100000;
  const auto traj = dynamics::simulate(c);
  if (traj.aborted()) return {false, "run aborted: " + traj.abort_reason};
  const auto b = harness::energy_balance(traj.trace);
  return {b.max_relative_defect <= 0.01 && b.non_increasing,
          fmt("max balance defect %.3e, non-increasing=%d over %zu samples (%d growth steps below the 1e-14 floor)",
              b.max_relative_defect, b.non_increasing, traj.trace.size(), b.unresolved_increases)};
}

Outcome inequalities() {
  const auto r = harness::verify_suite("inequalities", 100, 7);
  return {r.failed == 0, fmt("%d checks passed, %d failed, worst ratio %.4f", r.passed, r.failed, r.worst)};
}

Outcome regularization_limit() {
  dynamics::SimConfig c;
  c.alpha = 1;
  c.L = 2.0;
  c.B = 1.0;
  c.nx = c.ny = 63;
  c.dt = 1e-3;
  c.t_end = 1.0;
  c.trace_stride = 100;
  c.snapshot_stride = 100000;
  c.initial.target_weighted = 0.5 * 441.0 / 256.0;
  const double eps[] = {1e-2, 5e-3, 2.5e-3, 0.0};
  const auto s = dynamics::simulate_regularized_sweep(c, eps);
  bool decreasing = true;
  for (std::size_t k = 1; k < s.consecutive.size(); ++k) decreasing = decreasing && s.consecutive[k] < s.consecutive[k - 1];
  return {decreasing, fmt("consecutive d = %.4e, %.4e, %.4e; to eps=0: %.4e, %.4e, %.4e", s.consecutive[0],
                          s.consecutive[1], s.consecutive[2], s.to_last[0], s.to_last[1], s.to_last[2])};
}

Outcome thresholds() {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.1, 10.0);
  int checked = 0;
  double worst_form = 0.0, worst_identity = 0.0;
  while (checked < 1000) {
    const double L = u(rng), B = u(rng);
    const auto t = stabilization::decay_theory(1, {L, B});
    if (!t.admissible) continue;
    ++checked;
    const double scale = std::max(1.0, t.threshold);
    worst_form = std::max(worst_form, std::abs(stabilization::threshold_alternate_form(t.A_sq, L, B) - t.threshold) / scale);
    worst_identity = std::max(worst_identity, std::abs(9 * t.eps_small * t.delta / 4 - t.threshold) / scale);
  }
  return {worst_form <= 1e-12 && worst_identity <= 1e-12,
          fmt("1000 admissible (L,B): forms differ by %.2e, 9 eps delta/4 identity by %.2e", worst_form, worst_identity)};
}

struct Criterion {
  const char* name;
  std::function<Outcome()> run;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria"};
  int only = 0;
  app.add_option("--only", only, "run a single criterion")->check(CLI::Range(1, 11));
  CLI11_PARSE(app, argc, argv);

  const std::vector<Criterion> criteria{
      {"spectral golden values", spectral_golden},
      {"Viete and spacing suite", viete_suite},
      {"stationary counterexample residual", stationary_residual},
      {"non-decay on the critical rectangle", critical_non_decay},
      {"decay, alpha = 1 rectangle", [] { return decay_run(1, 3.5 / 3.0, 441.0 / 256.0); }},
      {"decay, alpha = 0 rectangle", [] { return decay_run(0, 4.0 / 3.0, 2.25); }},
      {"strip proxy", strip_proxy},
      {"linear energy identity", conservation},
      {"inequality suites", inequalities},
      {"regularisation limit", regularization_limit},
      {"threshold cross-check", thresholds},
  };

  int failed = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    if (only != 0 && static_cast<int>(k) + 1 != only) continue;
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[k].run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::printf("%s %2zu %s: %s (%.1fs)\n", o.pass ? "PASS" : "FAIL", k + 1, criteria[k].name, o.detail.c_str(), secs);
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
