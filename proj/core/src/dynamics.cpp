#include "zk/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <set>
#include <string>

#include "zk/calculus.hpp"
#include "zk/error.hpp"

namespace zk::dynamics {

using calculus::Axis;
using calculus::OperatorKind;

void SimConfig::validate() const {
  if (alpha != 0 && alpha != 1) throw ConfigError("alpha", "must be 0 or 1");
  if (!std::isfinite(epsilon) || epsilon < 0.0) throw ConfigError("epsilon", "must be finite and >= 0");
  if (!std::isfinite(L) || L <= 0.0) throw ConfigError("L", "must be finite and positive");
  if (!std::isfinite(B) || B <= 0.0) throw ConfigError("B", "must be finite and positive");
  if (nx < geometry::kMinInteriorPoints) throw ConfigError("nx", "must be at least 8");
  if (ny < geometry::kMinInteriorPoints) throw ConfigError("ny", "must be at least 8");
  if (!std::isfinite(dt) || dt <= 0.0) throw ConfigError("dt", "must be finite and positive");
  if (!std::isfinite(t_end) || t_end <= 0.0) throw ConfigError("t_end", "must be finite and positive");
  const double steps = t_end / dt;
  if (std::abs(steps - std::round(steps)) > 1e-9 * std::max(1.0, steps) || std::round(steps) < 1.0)
    throw ConfigError("dt", "t_end must be a whole number of steps");
  if (snapshot_stride < 1) throw ConfigError("snapshot_stride", "must be >= 1");
  if (trace_stride < 1) throw ConfigError("trace_stride", "must be >= 1");
  if (!std::isfinite(linear_solver_tol) || linear_solver_tol <= 0.0)
    throw ConfigError("linear_solver_tol", "must be positive");
  static const std::set<std::string> kinds{"zero", "product", "strip_bump", "stationary_mode",
                                           "random_modes", "file"};
  if (!kinds.contains(initial.kind)) throw ConfigError("initial", "unknown initial datum '" + initial.kind + "'");
  if (!std::isfinite(initial.amplitude)) throw ConfigError("amplitude", "must be finite");
  if (initial.target_weighted && !(*initial.target_weighted > 0.0 && std::isfinite(*initial.target_weighted)))
    throw ConfigError("target_weighted", "must be finite and positive");
  if (initial.mode_k < 1) throw ConfigError("mode_k", "must be >= 1");
  if (initial.mode_l < 1) throw ConfigError("mode_l", "must be >= 1");
  if (initial.mode_n < 1) throw ConfigError("mode_n", "must be >= 1");
  if (initial.kind == "file" && initial.file.empty()) throw ConfigError("initial_file", "required for file data");
}

Grid SimConfig::grid() const { return Grid(L, B, nx, ny, domain); }

int SimConfig::step_count() const { return static_cast<int>(std::lround(t_end / dt)); }

EnergySample sample_energy(const Field& u, double t) {
  EnergySample s;
  s.t = t;
  s.l2_sq = calculus::l2_sq(u);
  s.weighted = calculus::weighted_l2_sq(u);
  s.flux0 = calculus::trace_flux(u);
  s.grad_x_sq = calculus::grad_sq(u, Axis::x);
  s.grad_y_sq = calculus::grad_sq(u, Axis::y);
  s.cubic = calculus::cubic_integral(u);
  return s;
}

Stepper::Stepper(const SimConfig& config)
    : config_((config.validate(), config)),
      op_(config.grid(), config.alpha, config.epsilon),
      solver_(op_, 0.5 * config.dt) {}

Field Stepper::nonlinear(const Field& u) const {
  Field out(u.grid());
  if (config_.linear) return out;
  Field sq(u.grid());
  std::span<double> s = sq.mutable_values();
  std::span<const double> v = u.values();
  for (std::size_t k = 0; k < s.size(); ++k) s[k] = v[k] * v[k];
  calculus::accumulate_operator(sq, OperatorKind::Dx, 0.5, out);
  return out;
}

Field Stepper::solve_checked(const Field& rhs) const {
  const double shift = 0.5 * config_.dt;
  const double scale = std::max(rhs.max_abs(), 1e-300);
  Field u = solver_.solve(rhs);
  for (int attempt = 0;; ++attempt) {
    // r = (I + shift L) u - rhs through the matrix-free stencils.
    Field r = u;
    op_.accumulate(u, shift, r);
    std::span<double> rv = r.mutable_values();
    std::span<const double> b = rhs.values();
    for (std::size_t k = 0; k < rv.size(); ++k) rv[k] -= b[k];
    r.make_clean();
    const double rel = r.max_abs() / scale;
    if (rel <= config_.linear_solver_tol) return u;
    if (attempt == 1)
      throw LinearSolverError("linear solve residual " + std::to_string(rel) +
                              " exceeds linear_solver_tol");
    Field du = solver_.solve(r);
    std::span<double> uv = u.mutable_values();
    std::span<const double> dv = du.values();
    for (std::size_t k = 0; k < uv.size(); ++k) uv[k] -= dv[k];
    u.make_clean();
  }
}

Field Stepper::advance(const Field& state) {
  const double dt = config_.dt;
  if (!(state.grid() == op_.grid())) throw DomainError("state lives on a different grid");
  Field u = state;
  if (!u.dirichlet_clean()) u.make_clean();
  Field n_now = nonlinear(u);

  Field next(u.grid());
  if (steps_ < kStartupSteps) {
    // Two backward-Euler half steps, explicit in the nonlinearity.
    Field v = u;
    for (int half = 0; half < 2; ++half) {
      Field n_v = half == 0 ? n_now : nonlinear(v);
      Field rhs = v;
      std::span<double> r = rhs.mutable_values();
      std::span<const double> nv = n_v.values();
      for (std::size_t k = 0; k < r.size(); ++k) r[k] -= 0.5 * dt * nv[k];
      rhs.make_clean();
      v = solve_checked(rhs);
    }
    next = std::move(v);
  } else {
    Field rhs = u;
    op_.accumulate(u, -0.5 * dt, rhs);
    std::span<double> r = rhs.mutable_values();
    std::span<const double> nn = n_now.values();
    std::span<const double> np = previous_nonlinear_->values();
    for (std::size_t k = 0; k < r.size(); ++k) r[k] -= dt * (1.5 * nn[k] - 0.5 * np[k]);
    rhs.make_clean();
    next = solve_checked(rhs);
  }
  previous_nonlinear_ = std::move(n_now);
  ++steps_;

  const double t = steps_ * dt;
  if (!next.all_finite()) throw BlowupError(t, "non-finite state at t = " + std::to_string(t));
  if (next.max_abs() > kBlowupThreshold)
    throw BlowupError(t, "max|u| exceeded 1e6 at t = " + std::to_string(t));
  return next;
}

Field step(const Field& state, const SimConfig& config) {
  Stepper stepper(config);
  return stepper.advance(state);
}

Trajectory simulate(const SimConfig& config) {
  config.validate();
  Trajectory tr;
  tr.config = config;
  Field u = make_initial(config);
  tr.trace.i0_initial = calculus::initial_regularity(u);
  tr.trace.samples.push_back(sample_energy(u, 0.0));
  tr.snapshots.push_back({0.0, u});

  Stepper stepper(config);
  const int total = config.step_count();
  for (int n = 1; n <= total; ++n) {
    try {
      u = stepper.advance(u);
    } catch (const BlowupError& e) {
      tr.abort_time = e.time();
      tr.abort_reason = e.what();
      if (tr.snapshots.back().t != (n - 1) * config.dt) tr.snapshots.push_back({(n - 1) * config.dt, u});
      return tr;
    }
    const double t = n * config.dt;
    if (n % config.trace_stride == 0 || n == total) tr.trace.samples.push_back(sample_energy(u, t));
    if (n % config.snapshot_stride == 0 || n == total) tr.snapshots.push_back({t, u});
  }
  return tr;
}

RegularizedSweep simulate_regularized_sweep(const SimConfig& config, std::span<const double> epsilons) {
  if (epsilons.size() < 2) throw DomainError("an epsilon sweep needs at least two values");
  for (std::size_t i = 0; i < epsilons.size(); ++i) {
    const double e = epsilons[i];
    const bool last = i + 1 == epsilons.size();
    if (!std::isfinite(e) || e < 0.0 || (e == 0.0 && !last))
      throw DomainError("epsilons must be positive (0 allowed only as the last entry)");
    if (i > 0 && !(e < epsilons[i - 1])) throw DomainError("epsilons must be strictly decreasing");
  }
  std::vector<std::future<Trajectory>> jobs;
  for (double e : epsilons) {
    SimConfig c = config;
    c.epsilon = e;
    jobs.push_back(std::async(std::launch::async, [c] { return simulate(c); }));
  }
  RegularizedSweep out;
  out.epsilons.assign(epsilons.begin(), epsilons.end());
  for (auto& j : jobs) out.runs.push_back(j.get());
  for (const auto& r : out.runs)
    if (r.aborted()) throw DomainError("epsilon sweep run aborted: " + r.abort_reason);
  const Field& last = out.runs.back().final_state();
  for (std::size_t i = 0; i + 1 < out.runs.size(); ++i) {
    out.consecutive.push_back(calculus::norms(out.runs[i].final_state(), false, &out.runs[i + 1].final_state()).l2);
    out.to_last.push_back(calculus::norms(out.runs[i].final_state(), false, &last).l2);
  }
  return out;
}

TruncationCheck strip_truncation_check(const SimConfig& config) {
  if (config.domain != DomainKind::truncated_strip)
    throw ConfigError("domain", "truncation check needs a truncated_strip run");
  SimConfig wide = config;
  wide.B = 1.5 * config.B;
  wide.ny = static_cast<int>(std::lround(1.5 * (config.ny + 1))) - 1;

  auto base_job = std::async(std::launch::async, [config] { return simulate(config); });
  auto wide_job = std::async(std::launch::async, [wide] { return simulate(wide); });
  TruncationCheck out;
  out.base = base_job.get();
  out.wide = wide_job.get();
  if (out.base.aborted() || out.wide.aborted()) throw DomainError("strip run aborted");
  const auto& a = out.base.trace.samples;
  const auto& b = out.wide.trace.samples;
  const double w0 = a.front().weighted;
  double change = 0.0;
  for (std::size_t k = 0; k < std::min(a.size(), b.size()); ++k)
    change = std::max(change, std::abs(b[k].weighted - a[k].weighted));
  out.relative_change = w0 > 0.0 ? change / w0 : change;
  out.ok = out.relative_change < kTruncationTolerance;
  return out;
}

}  // namespace zk::dynamics
