#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <mutex>
#include <string>
#include <vector>

#include "zk/calculus.hpp"
#include "zk/dynamics.hpp"
#include "zk/error.hpp"

extern "C" {
void dgbtrf_(const int* m, const int* n, const int* kl, const int* ku, double* ab, const int* ldab,
             int* ipiv, int* info);
void dgbtrs_(const char* trans, const int* n, const int* kl, const int* ku, const int* nrhs,
             const double* ab, const int* ldab, const int* ipiv, double* b, const int* ldb,
             int* info, std::size_t trans_len);
}

namespace zk::dynamics {

using calculus::OperatorKind;

LinearPart::LinearPart(Grid grid, int alpha, double epsilon)
    : grid_(grid), alpha_(alpha), epsilon_(epsilon) {
  if (alpha != 0 && alpha != 1) throw DomainError("alpha must be 0 or 1");
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) throw DomainError("epsilon must be >= 0");
  if (grid.nx() < 5 || grid.ny() < 5) throw DomainError("grid too coarse for the linear part");
}

void LinearPart::accumulate(const Field& u, double coeff, Field& out) const {
  if (alpha_ != 0) calculus::accumulate_operator(u, OperatorKind::Dx, coeff * alpha_, out);
  calculus::accumulate_operator(u, OperatorKind::Dxxx, coeff, out);
  calculus::accumulate_operator(u, OperatorKind::Dxyy, coeff, out);
  if (epsilon_ > 0.0) {
    calculus::accumulate_operator(u, OperatorKind::Dx4, coeff * epsilon_, out);
    calculus::accumulate_operator(u, OperatorKind::Dy4, coeff * epsilon_, out);
  }
}

Field LinearPart::apply(const Field& u) const {
  Field out(grid_);
  accumulate(u, 1.0, out);
  return out;
}

LinearPart assemble_linear_part(const Grid& grid, int alpha, double epsilon) {
  return LinearPart(grid, alpha, epsilon);
}

namespace {

// FFTW's planner is not thread-safe; execution is.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

constexpr int kLower = 2;
constexpr int kUpper = 3;
constexpr int kLdab = 2 * kLower + kUpper + 1;

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n) : data(static_cast<double*>(fftw_malloc(sizeof(double) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  double* data;
};

}  // namespace

struct ImplicitSolver::Impl {
  Grid grid;
  double shift;
  int nx;
  int ny;
  std::vector<double> bands;  // ny blocks of kLdab * nx
  std::vector<int> pivots;    // ny blocks of nx
  fftw_plan plan = nullptr;

  Impl(const LinearPart& op, double s)
      : grid(op.grid()), shift(s), nx(op.grid().nx()), ny(op.grid().ny()) {
    if (!(shift >= 0.0) || !std::isfinite(shift)) throw DomainError("solver shift must be >= 0");
    const double hx = grid.hx();
    const double hy = grid.hy();
    // Interior rows of the x operators, shared by every transverse mode.
    std::vector<std::vector<calculus::RowEntry>> dx(nx), dxxx(nx), dx4(nx);
    for (int i = 1; i <= nx; ++i) {
      dx[i - 1] = calculus::closure_row_x(OperatorKind::Dx, i, nx, hx);
      dxxx[i - 1] = calculus::closure_row_x(OperatorKind::Dxxx, i, nx, hx);
      dx4[i - 1] = calculus::closure_row_x(OperatorKind::Dx4, i, nx, hx);
    }
    const double eps = op.epsilon();
    bands.assign(static_cast<std::size_t>(kLdab) * nx * ny, 0.0);
    pivots.assign(static_cast<std::size_t>(nx) * ny, 0);
    for (int m = 0; m < ny; ++m) {
      const double lambda = calculus::dyy_eigenvalue(m + 1, ny, hy);
      double* ab = bands.data() + static_cast<std::size_t>(m) * kLdab * nx;
      auto put = [&](int r, int c, double v) {
        if (r - c > kLower || c - r > kUpper) throw DomainError("stencil exceeds solver bandwidth");
        ab[(kLower + kUpper + r - c) + static_cast<std::size_t>(c) * kLdab] += v;
      };
      for (int r = 0; r < nx; ++r) {
        put(r, r, 1.0 + shift * eps * lambda * lambda);
        for (const auto& e : dx[r]) put(r, e.col, shift * (op.alpha() + lambda) * e.value);
        for (const auto& e : dxxx[r]) put(r, e.col, shift * e.value);
        if (eps > 0.0)
          for (const auto& e : dx4[r]) put(r, e.col, shift * eps * e.value);
      }
      int info = 0;
      const int kl = kLower, ku = kUpper, ld = kLdab;
      dgbtrf_(&nx, &nx, &kl, &ku, ab, &ld, pivots.data() + static_cast<std::size_t>(m) * nx, &info);
      if (info != 0)
        throw LinearSolverError("banded factorisation failed for transverse mode " +
                                std::to_string(m + 1) + " (info " + std::to_string(info) + ")");
    }
    FftwBuffer scratch(static_cast<std::size_t>(nx) * ny);
    const int n[1] = {ny};
    const fftw_r2r_kind kind[1] = {FFTW_RODFT00};
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_many_r2r(1, n, nx, scratch.data, nullptr, nx, 1, scratch.data, nullptr, nx, 1,
                              kind, FFTW_ESTIMATE);
    if (plan == nullptr) throw LinearSolverError("could not plan the sine transform");
  }

  ~Impl() {
    if (plan != nullptr) {
      std::lock_guard lock(planner_mutex());
      fftw_destroy_plan(plan);
    }
  }

  Field solve(const Field& rhs) const {
    if (!(rhs.grid() == grid)) throw DomainError("right-hand side lives on a different grid");
    FftwBuffer work(static_cast<std::size_t>(nx) * ny);
    for (int j = 1; j <= ny; ++j)
      for (int i = 1; i <= nx; ++i) work.data[(j - 1) * nx + (i - 1)] = rhs(i, j);
    fftw_execute_r2r(plan, work.data, work.data);
    const char trans = 'N';
    const int kl = kLower, ku = kUpper, ld = kLdab, nrhs = 1;
    for (int m = 0; m < ny; ++m) {
      int info = 0;
      dgbtrs_(&trans, &nx, &kl, &ku, &nrhs, bands.data() + static_cast<std::size_t>(m) * kLdab * nx,
              &ld, pivots.data() + static_cast<std::size_t>(m) * nx, work.data + m * nx, &nx, &info,
              1);
      if (info != 0) throw LinearSolverError("banded solve failed");
    }
    fftw_execute_r2r(plan, work.data, work.data);
    const double scale = 1.0 / (2.0 * (ny + 1));
    Field out(grid);
    std::span<double> v = out.mutable_values();
    for (int j = 1; j <= ny; ++j)
      for (int i = 1; i <= nx; ++i) v[grid.index(i, j)] = scale * work.data[(j - 1) * nx + (i - 1)];
    out.assume_clean();
    return out;
  }
};

ImplicitSolver::ImplicitSolver(const LinearPart& op, double shift)
    : impl_(std::make_unique<Impl>(op, shift)) {}
ImplicitSolver::~ImplicitSolver() = default;
ImplicitSolver::ImplicitSolver(ImplicitSolver&&) noexcept = default;
ImplicitSolver& ImplicitSolver::operator=(ImplicitSolver&&) noexcept = default;

Field ImplicitSolver::solve(const Field& rhs) const { return impl_->solve(rhs); }
double ImplicitSolver::shift() const noexcept { return impl_->shift; }

}  // namespace zk::dynamics
