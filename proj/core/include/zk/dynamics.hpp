#pragma once

// Time integration of u_t + (alpha + u) u_x + u_xxx + u_xyy
//                      + eps (u_xxxx + u_yyyy) = 0
// with u = 0 on the four walls and u_x = 0 at x = L.
//
// The linear part L u = alpha Dx u + Dxxx u + Dxyy u + eps (Dx4 + Dy4) u is
// treated by Crank-Nicolson; the nonlinearity (1/2) Dx(u^2) is explicit with
// second-order (Adams-Bashforth) extrapolation. The first kStartupSteps
// steps are each split into two backward-Euler half steps with the same
// matrix I + (dt/2) L, which damps the stiff grid modes CN leaves undamped.

#include <cstdint>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "zk/geometry.hpp"

namespace zk::dynamics {

using geometry::DomainKind;
using geometry::Field;
using geometry::Grid;

inline constexpr int kStartupSteps = 4;
inline constexpr double kBlowupThreshold = 1e6;

// Closed-form initial data (or a snapshot file).
//   zero            u0 = 0
//   product         A (1 - cos(2 pi x / L)) cos(pi y / 2B)
//   strip_bump      A (1 - cos(2 pi x / L)) cos^4(pi y / 2R) for |y| < R, else 0
//   stationary_mode A Re p(x) q(y) for the (mode_k, mode_l, mode_n) eigenmode
//   random_modes    sum of random sin-sin modes (seeded), scaled by A
//   file            snapshot file at `file`
// When target_weighted is set the amplitude is rescaled so that the discrete
// ((1+x), u0^2) equals it.
struct InitialSpec {
  std::string kind = "product";
  double amplitude = 1.0;
  std::optional<double> target_weighted;
  int mode_k = 1;
  int mode_l = 1;
  int mode_n = 1;
  double support_radius = 1.0;
  std::uint64_t seed = 1;
  std::string file;
};

struct SimConfig {
  int alpha = 1;
  double epsilon = 0.0;
  bool linear = false;
  double L = 2.0;
  double B = 1.0;
  int nx = 63;
  int ny = 63;
  DomainKind domain = DomainKind::rectangle;
  double dt = 1e-3;
  double t_end = 1.0;
  InitialSpec initial;
  int snapshot_stride = 1000;
  int trace_stride = 10;
  double linear_solver_tol = 1e-10;

  // Throws ConfigError naming the offending key.
  void validate() const;
  Grid grid() const;
  int step_count() const;
};

struct EnergySample {
  double t = 0.0;
  double l2_sq = 0.0;      // |u|^2
  double weighted = 0.0;   // ((1+x), u^2)
  double flux0 = 0.0;      // int u_x(0,y)^2 dy
  double grad_x_sq = 0.0;  // |u_x|^2
  double grad_y_sq = 0.0;  // |u_y|^2
  double cubic = 0.0;      // (1, u^3)

  friend bool operator==(const EnergySample&, const EnergySample&) = default;
};

struct EnergyTrace {
  std::vector<EnergySample> samples;
  double i0_initial = 0.0;

  std::size_t size() const noexcept { return samples.size(); }
  bool empty() const noexcept { return samples.empty(); }
};

EnergySample sample_energy(const Field& u, double t);

struct Snapshot {
  double t;
  Field field;
};

struct Trajectory {
  SimConfig config;
  std::vector<Snapshot> snapshots;
  EnergyTrace trace;
  std::optional<double> abort_time;
  std::string abort_reason;

  bool aborted() const noexcept { return abort_time.has_value(); }
  const Field& final_state() const { return snapshots.back().field; }
};

// Matrix-free alpha Dx + Dxxx + Dxyy + eps (Dx4 + Dy4) acting on clean fields.
class LinearPart {
 public:
  LinearPart(Grid grid, int alpha, double epsilon);

  Field apply(const Field& u) const;
  // out += coeff * L u
  void accumulate(const Field& u, double coeff, Field& out) const;

  const Grid& grid() const noexcept { return grid_; }
  int alpha() const noexcept { return alpha_; }
  double epsilon() const noexcept { return epsilon_; }

 private:
  Grid grid_;
  int alpha_;
  double epsilon_;
};

// Throws DomainError when the grid is too coarse for the stencils.
LinearPart assemble_linear_part(const Grid& grid, int alpha, double epsilon);

// Direct solver for (I + shift L) u = rhs on clean fields. The matrix is a
// tensor product, so it is diagonalised in y by the sine transform and each
// transverse mode is a banded system in x, factorised once. Immutable after
// construction; solve() is safe to call concurrently.
class ImplicitSolver {
 public:
  ImplicitSolver(const LinearPart& op, double shift);
  ~ImplicitSolver();
  ImplicitSolver(const ImplicitSolver&) = delete;
  ImplicitSolver& operator=(const ImplicitSolver&) = delete;
  ImplicitSolver(ImplicitSolver&&) noexcept;
  ImplicitSolver& operator=(ImplicitSolver&&) noexcept;

  Field solve(const Field& rhs) const;
  double shift() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

// Stateful integrator carrying the Adams-Bashforth history.
class Stepper {
 public:
  explicit Stepper(const SimConfig& config);

  // Advances `state` by one step of size dt. Throws LinearSolverError if a
  // solve misses linear_solver_tol, BlowupError on NaN or max|u| > 1e6.
  Field advance(const Field& state);

  int steps_taken() const noexcept { return steps_; }
  const LinearPart& linear_part() const noexcept { return op_; }

 private:
  Field nonlinear(const Field& u) const;  // (1/2) Dx(u^2), zero when linear
  Field solve_checked(const Field& rhs) const;

  SimConfig config_;
  LinearPart op_;
  ImplicitSolver solver_;
  std::optional<Field> previous_nonlinear_;
  int steps_ = 0;
};

// One step from a state with no history (the startup step).
Field step(const Field& state, const SimConfig& config);

// Initial datum described by config.initial, Dirichlet-cleaned.
Field make_initial(const SimConfig& config);

// Deterministic given config. A blowup ends the run early with a partial
// trace and abort_time set; other errors propagate.
Trajectory simulate(const SimConfig& config);

struct RegularizedSweep {
  std::vector<double> epsilons;
  std::vector<Trajectory> runs;
  // |u_{eps_i}(T) - u_{eps_{i+1}}(T)|, i = 0..n-2
  std::vector<double> consecutive;
  // |u_{eps_i}(T) - u_{eps_last}(T)|, i = 0..n-2
  std::vector<double> to_last;
};

// epsilons strictly decreasing and positive, except that the last entry may
// be 0. Runs are independent and execute concurrently.
RegularizedSweep simulate_regularized_sweep(const SimConfig& config,
                                            std::span<const double> epsilons);

struct TruncationCheck {
  Trajectory base;
  Trajectory wide;  // same run on 1.5 B with the same hy
  double relative_change = 0.0;
  bool ok = false;
};

inline constexpr double kTruncationTolerance = 0.01;

// Strip workflow: requires domain = truncated_strip.
TruncationCheck strip_truncation_check(const SimConfig& config);

// Snapshot files: 8-byte magic "ZKSNAP01", then little-endian
// int64 nx, int64 ny, float64 L, float64 B, float64 t, followed by
// (nx+2)*(ny+2) float64 values with x fastest (index j*(nx+2)+i).
void write_snapshot(const std::filesystem::path& path, const Field& field, double t);
Snapshot read_snapshot(const std::filesystem::path& path,
                       DomainKind kind = DomainKind::rectangle);

}  // namespace zk::dynamics
