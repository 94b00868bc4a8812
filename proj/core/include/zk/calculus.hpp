#pragma once

// Discrete derivatives, trapezoidal norms, and numerical certificates for
// the functional inequalities used by the energy estimates.
//
// Boundary closures (shared by apply_operator and the closure rows below):
//   - x = 0 carries only u = 0 for the dispersive part; the missing ghost
//     u(-h) is extrapolated by the degree-4 polynomial through the first
//     five nodes, which keeps Dxxx second order at the first interior row.
//   - x = L carries u = 0 and u_x = 0; the ghost is the reflection
//     u(L+h) = u(L-h).
//   - Dx4 uses u_xx(0) = 0 at x = 0 and the same reflection at x = L;
//     Dy4 uses u_yy = 0 at y = +-B.

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "zk/geometry.hpp"

namespace zk::calculus {

using geometry::Field;
using geometry::Grid;

enum class OperatorKind { Dx, Dy, Dxx, Dyy, Dxxx, Dxyy, Dx4, Dy4 };
enum class Axis { x, y };

const char* to_string(OperatorKind kind) noexcept;

// Second-order discrete derivative on interior nodes; the boundary layer of
// the result is zero. Reads boundary values from the field, so unclean fields
// are differentiated with their own Dirichlet data. Throws DomainError when
// the grid is too coarse for the stencil.
Field apply_operator(const Field& field, OperatorKind kind);

// out += coeff * K(field) on interior nodes. out must live on the same grid.
void accumulate_operator(const Field& field, OperatorKind kind, double coeff, Field& out);

// Derivative at every node (one-sided second-order on the boundary layer).
// Used by the quadrature of gradient norms, not by the time stepper.
Field partial(const Field& field, Axis axis);

// Trapezoidal rule on the closed rectangle.
double integrate(const Field& field);
double inner(const Field& a, const Field& b);
double l2_sq(const Field& field);
double weighted_l2_sq(const Field& field);  // ((1+x), u^2)
double lq_norm(const Field& field, double q);
double grad_sq(const Field& field, Axis axis);
double cubic_integral(const Field& field);  // (1, u^3)
double sup_sq(const Field& field);

// int u_x(0,y)^2 dy with the one-sided second-order u_x at x = 0.
double trace_flux(const Field& field);

// |grad u|^2 + |u_yy|^2 + |u u_x + Dxxx u + Dxyy u|^2.
double initial_regularity(const Field& field);

struct NormReport {
  double l2 = 0.0;
  std::map<int, double> lq;  // q = 3, 4
  double h1_semi = 0.0;      // |grad u|
  double weighted_l2 = 0.0;  // ((1+x), u^2)
  double sup_sq = 0.0;
  double trace_flux = 0.0;
  std::optional<double> i0;
};

// When companion is given the report describes field - companion.
NormReport norms(const Field& field, bool with_i0 = false,
                 const Field* companion = nullptr);

// Ratios that certify an inequality when <= 1 (+ quadrature tolerance).
// All return 0 for the zero field.
double check_gn(const Field& field, int q);  // |u|_q / (beta |grad u|^theta |u|^(1-theta))
double check_sup_bound(const Field& field);  // sup u^2 / (|u|_H1^2 + |u_xy|^2)
double check_poincare(const Field& field, Axis axis);  // |w|^2 / (C |w_axis|^2)

// Reporting-only: the fitted constant |u|_q / (|u|_H1^theta |u|^(1-theta)) for
// fields that do not vanish on the boundary. Nothing is certified.
double gn_boundary_constant(const Field& field, int q);

// (Dxxx u, u) - trace_flux(u)/2; tends to zero with h for clean smooth
// fields that also satisfy u_x(L) = 0.
double sbp_defect(const Field& field);

// Sparse row of a one-dimensional x-operator acting on the interior unknowns
// 1..n of a clean field (boundary values zero, ghosts folded in). Columns are
// zero-based interior indices. Only Dx, Dxx, Dxxx and Dx4 are supported.
struct RowEntry {
  int col;
  double value;
};
std::vector<RowEntry> closure_row_x(OperatorKind kind, int i, int n, double h);

// Eigenvalue m = 1..n of the Dirichlet three-point Dyy on n interior nodes.
double dyy_eigenvalue(int m, int n, double h);

}  // namespace zk::calculus
