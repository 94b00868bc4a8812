#include "zk/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "zk/error.hpp"

namespace zk::calculus {

namespace {

// Ghost u(-h) from the degree-4 interpolant through u(0..4h).
inline double left_ghost_dispersive(double u0, double u1, double u2, double u3, double u4) {
  return 5.0 * u0 - 10.0 * u1 + 10.0 * u2 - 5.0 * u3 + u4;
}

// Ghost u(-h) such that the centered second difference at the wall vanishes.
inline double ghost_zero_curvature(double wall, double inner) { return 2.0 * wall - inner; }

void require_same_grid(const Field& a, const Field& b) {
  if (!(a.grid() == b.grid())) throw DomainError("fields live on different grids");
}

void require_stencil(const Grid& g, OperatorKind kind) {
  const int need = 5;
  switch (kind) {
    case OperatorKind::Dxxx:
    case OperatorKind::Dx4:
      if (g.nx() < need) throw DomainError("grid too coarse for the x stencil");
      break;
    case OperatorKind::Dy4:
      if (g.ny() < need) throw DomainError("grid too coarse for the y stencil");
      break;
    default:
      break;
  }
}

double trapezoid_weight(int k, int n, double h) {
  return (k == 0 || k == n + 1) ? 0.5 * h : h;
}

template <class F>
double quadrature(const Grid& g, F&& integrand) {
  double total = 0.0;
  for (int j = 0; j <= g.ny() + 1; ++j) {
    const double wy = trapezoid_weight(j, g.ny(), g.hy());
    double row = 0.0;
    for (int i = 0; i <= g.nx() + 1; ++i)
      row += trapezoid_weight(i, g.nx(), g.hx()) * integrand(i, j);
    total += wy * row;
  }
  return total;
}

}  // namespace

const char* to_string(OperatorKind kind) noexcept {
  switch (kind) {
    case OperatorKind::Dx: return "Dx";
    case OperatorKind::Dy: return "Dy";
    case OperatorKind::Dxx: return "Dxx";
    case OperatorKind::Dyy: return "Dyy";
    case OperatorKind::Dxxx: return "Dxxx";
    case OperatorKind::Dxyy: return "Dxyy";
    case OperatorKind::Dx4: return "Dx4";
    case OperatorKind::Dy4: return "Dy4";
  }
  return "?";
}

void accumulate_operator(const Field& field, OperatorKind kind, double coeff, Field& out) {
  const Grid& g = field.grid();
  require_same_grid(field, out);
  require_stencil(g, kind);
  const int nx = g.nx();
  const int ny = g.ny();
  const double hx = g.hx();
  const double hy = g.hy();
  const bool was_clean = out.dirichlet_clean();
  std::span<const double> u = field.values();
  std::span<double> o = out.mutable_values();
  const int s = g.row_stride();

  switch (kind) {
    case OperatorKind::Dx: {
      const double c = coeff / (2.0 * hx);
      for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) {
          const std::size_t k = g.index(i, j);
          o[k] += c * (u[k + 1] - u[k - 1]);
        }
      break;
    }
    case OperatorKind::Dy: {
      const double c = coeff / (2.0 * hy);
      for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) {
          const std::size_t k = g.index(i, j);
          o[k] += c * (u[k + s] - u[k - s]);
        }
      break;
    }
    case OperatorKind::Dxx: {
      const double c = coeff / (hx * hx);
      for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) {
          const std::size_t k = g.index(i, j);
          o[k] += c * (u[k + 1] - 2.0 * u[k] + u[k - 1]);
        }
      break;
    }
    case OperatorKind::Dyy: {
      const double c = coeff / (hy * hy);
      for (int j = 1; j <= ny; ++j)
        for (int i = 1; i <= nx; ++i) {
          const std::size_t k = g.index(i, j);
          o[k] += c * (u[k + s] - 2.0 * u[k] + u[k - s]);
        }
      break;
    }
    case OperatorKind::Dxxx: {
      const double c = coeff / (2.0 * hx * hx * hx);
      for (int j = 1; j <= ny; ++j) {
        const std::size_t r = g.index(0, j);
        auto at = [&](int i) -> double {
          if (i == -1)
            return left_ghost_dispersive(u[r], u[r + 1], u[r + 2], u[r + 3], u[r + 4]);
          if (i == nx + 2) return u[r + nx];
          return u[r + i];
        };
        for (int i = 1; i <= nx; ++i)
          o[r + i] += c * (at(i + 2) - 2.0 * at(i + 1) + 2.0 * at(i - 1) - at(i - 2));
      }
      break;
    }
    case OperatorKind::Dxyy: {
      // Dx applied to Dyy u, with Dyy evaluated on the boundary columns too.
      const double cyy = 1.0 / (hy * hy);
      const double c = coeff / (2.0 * hx);
      std::vector<double> w(static_cast<std::size_t>(nx + 2));
      for (int j = 1; j <= ny; ++j) {
        const std::size_t r = g.index(0, j);
        for (int i = 0; i <= nx + 1; ++i)
          w[i] = cyy * (u[r + i + s] - 2.0 * u[r + i] + u[r + i - s]);
        for (int i = 1; i <= nx; ++i) o[r + i] += c * (w[i + 1] - w[i - 1]);
      }
      break;
    }
    case OperatorKind::Dx4: {
      const double c = coeff / (hx * hx * hx * hx);
      for (int j = 1; j <= ny; ++j) {
        const std::size_t r = g.index(0, j);
        auto at = [&](int i) -> double {
          if (i == -1) return ghost_zero_curvature(u[r], u[r + 1]);
          if (i == nx + 2) return u[r + nx];
          return u[r + i];
        };
        for (int i = 1; i <= nx; ++i)
          o[r + i] += c * (at(i - 2) - 4.0 * at(i - 1) + 6.0 * at(i) - 4.0 * at(i + 1) + at(i + 2));
      }
      break;
    }
    case OperatorKind::Dy4: {
      const double c = coeff / (hy * hy * hy * hy);
      for (int i = 1; i <= nx; ++i) {
        auto at = [&](int j) -> double {
          if (j == -1) return ghost_zero_curvature(u[g.index(i, 0)], u[g.index(i, 1)]);
          if (j == ny + 2) return ghost_zero_curvature(u[g.index(i, ny + 1)], u[g.index(i, ny)]);
          return u[g.index(i, j)];
        };
        for (int j = 1; j <= ny; ++j)
          o[g.index(i, j)] +=
              c * (at(j - 2) - 4.0 * at(j - 1) + 6.0 * at(j) - 4.0 * at(j + 1) + at(j + 2));
      }
      break;
    }
  }
  if (was_clean) out.assume_clean();
}

Field apply_operator(const Field& field, OperatorKind kind) {
  Field out(field.grid());
  accumulate_operator(field, kind, 1.0, out);
  return out;
}

Field partial(const Field& field, Axis axis) {
  const Grid& g = field.grid();
  const int nx = g.nx();
  const int ny = g.ny();
  std::vector<double> d(g.node_count());
  if (axis == Axis::x) {
    const double c = 1.0 / (2.0 * g.hx());
    for (int j = 0; j <= ny + 1; ++j) {
      auto u = [&](int i) { return field(i, j); };
      d[g.index(0, j)] = c * (-3.0 * u(0) + 4.0 * u(1) - u(2));
      for (int i = 1; i <= nx; ++i) d[g.index(i, j)] = c * (u(i + 1) - u(i - 1));
      d[g.index(nx + 1, j)] = c * (3.0 * u(nx + 1) - 4.0 * u(nx) + u(nx - 1));
    }
  } else {
    const double c = 1.0 / (2.0 * g.hy());
    for (int i = 0; i <= nx + 1; ++i) {
      auto u = [&](int j) { return field(i, j); };
      d[g.index(i, 0)] = c * (-3.0 * u(0) + 4.0 * u(1) - u(2));
      for (int j = 1; j <= ny; ++j) d[g.index(i, j)] = c * (u(j + 1) - u(j - 1));
      d[g.index(i, ny + 1)] = c * (3.0 * u(ny + 1) - 4.0 * u(ny) + u(ny - 1));
    }
  }
  return Field(g, std::move(d));
}

double integrate(const Field& field) {
  return quadrature(field.grid(), [&](int i, int j) { return field(i, j); });
}

double inner(const Field& a, const Field& b) {
  require_same_grid(a, b);
  return quadrature(a.grid(), [&](int i, int j) { return a(i, j) * b(i, j); });
}

double l2_sq(const Field& field) {
  return quadrature(field.grid(), [&](int i, int j) {
    const double v = field(i, j);
    return v * v;
  });
}

double weighted_l2_sq(const Field& field) {
  const Grid& g = field.grid();
  return quadrature(g, [&](int i, int j) {
    const double v = field(i, j);
    return (1.0 + g.x(i)) * (v * v);
  });
}

double lq_norm(const Field& field, double q) {
  const double s = quadrature(field.grid(), [&](int i, int j) { return std::pow(std::abs(field(i, j)), q); });
  return std::pow(s, 1.0 / q);
}

double grad_sq(const Field& field, Axis axis) { return l2_sq(partial(field, axis)); }

double cubic_integral(const Field& field) {
  return quadrature(field.grid(), [&](int i, int j) {
    const double v = field(i, j);
    return v * v * v;
  });
}

double sup_sq(const Field& field) {
  const double m = field.max_abs();
  return m * m;
}

double trace_flux(const Field& field) {
  const Grid& g = field.grid();
  const double c = 1.0 / (2.0 * g.hx());
  double total = 0.0;
  for (int j = 0; j <= g.ny() + 1; ++j) {
    const double ux = c * (-3.0 * field(0, j) + 4.0 * field(1, j) - field(2, j));
    total += trapezoid_weight(j, g.ny(), g.hy()) * ux * ux;
  }
  return total;
}

double initial_regularity(const Field& field) {
  const double grad = grad_sq(field, Axis::x) + grad_sq(field, Axis::y);
  const double yy = l2_sq(apply_operator(field, OperatorKind::Dyy));
  Field ux = apply_operator(field, OperatorKind::Dx);
  Field g = apply_operator(field, OperatorKind::Dxxx);
  accumulate_operator(field, OperatorKind::Dxyy, 1.0, g);
  const Grid& grid = field.grid();
  for (int j = 1; j <= grid.ny(); ++j)
    for (int i = 1; i <= grid.nx(); ++i) g(i, j) += field(i, j) * ux(i, j);
  return grad + yy + l2_sq(g);
}

NormReport norms(const Field& field, bool with_i0, const Field* companion) {
  if (!field.all_finite()) throw DomainError("norms of a non-finite field");
  Field u = field;
  if (companion != nullptr) {
    require_same_grid(field, *companion);
    std::span<double> v = u.mutable_values();
    std::span<const double> c = companion->values();
    for (std::size_t k = 0; k < v.size(); ++k) v[k] -= c[k];
  }
  NormReport r;
  r.l2 = std::sqrt(l2_sq(u));
  r.lq[3] = lq_norm(u, 3.0);
  r.lq[4] = lq_norm(u, 4.0);
  r.h1_semi = std::sqrt(grad_sq(u, Axis::x) + grad_sq(u, Axis::y));
  r.weighted_l2 = weighted_l2_sq(u);
  r.sup_sq = sup_sq(u);
  r.trace_flux = trace_flux(u);
  if (with_i0) r.i0 = initial_regularity(field);
  return r;
}

double check_gn(const Field& field, int q) {
  if (q != 3 && q != 4) throw DomainError("check_gn supports q = 3 or q = 4");
  const double l2 = std::sqrt(l2_sq(field));
  if (l2 == 0.0) return 0.0;
  const double theta = 2.0 * (0.5 - 1.0 / q);
  const double beta = std::pow(2.0, theta);
  const double grad = std::sqrt(grad_sq(field, Axis::x) + grad_sq(field, Axis::y));
  const double bound = beta * std::pow(grad, theta) * std::pow(l2, 1.0 - theta);
  return lq_norm(field, q) / bound;
}

double check_sup_bound(const Field& field) {
  const double top = sup_sq(field);
  if (top == 0.0) return 0.0;
  const double h1 = l2_sq(field) + grad_sq(field, Axis::x) + grad_sq(field, Axis::y);
  const double mixed = l2_sq(partial(partial(field, Axis::y), Axis::x));
  return top / (h1 + mixed);
}

double check_poincare(const Field& field, Axis axis) {
  const double top = l2_sq(field);
  if (top == 0.0) return 0.0;
  const Grid& g = field.grid();
  const double constant = axis == Axis::x ? g.length() * g.length() / 8.0
                                          : g.half_width() * g.half_width() / 2.0;
  return top / (constant * grad_sq(field, axis));
}

double gn_boundary_constant(const Field& field, int q) {
  if (q != 3 && q != 4) throw DomainError("gn_boundary_constant supports q = 3 or q = 4");
  const double l2s = l2_sq(field);
  if (l2s == 0.0) return 0.0;
  const double theta = 2.0 * (0.5 - 1.0 / q);
  const double h1 = std::sqrt(l2s + grad_sq(field, Axis::x) + grad_sq(field, Axis::y));
  return lq_norm(field, q) / (std::pow(h1, theta) * std::pow(std::sqrt(l2s), 1.0 - theta));
}

double sbp_defect(const Field& field) {
  return inner(apply_operator(field, OperatorKind::Dxxx), field) - 0.5 * trace_flux(field);
}

std::vector<RowEntry> closure_row_x(OperatorKind kind, int i, int n, double h) {
  if (i < 1 || i > n) throw DomainError("closure row index out of range");
  std::vector<RowEntry> row;
  // Adds coeff * u(k) for a node index k in -1..n+2, folding ghosts and the
  // (zero) boundary values of a clean field.
  auto add = [&](int k, double coeff) {
    auto put = [&](int node, double c) {
      for (auto& e : row)
        if (e.col == node - 1) {
          e.value += c;
          return;
        }
      row.push_back({node - 1, c});
    };
    if (k >= 1 && k <= n) {
      put(k, coeff);
    } else if (k == -1) {
      if (kind == OperatorKind::Dxxx) {
        put(1, -10.0 * coeff);
        put(2, 10.0 * coeff);
        put(3, -5.0 * coeff);
        put(4, coeff);
      } else {  // Dx4: u(-h) = -u(h)
        put(1, -coeff);
      }
    } else if (k == n + 2) {
      put(n, coeff);
    }
  };
  switch (kind) {
    case OperatorKind::Dx:
      add(i - 1, -0.5 / h);
      add(i + 1, 0.5 / h);
      break;
    case OperatorKind::Dxx:
      add(i - 1, 1.0 / (h * h));
      add(i, -2.0 / (h * h));
      add(i + 1, 1.0 / (h * h));
      break;
    case OperatorKind::Dxxx: {
      if (n < 5) throw DomainError("grid too coarse for the x stencil");
      const double c = 1.0 / (2.0 * h * h * h);
      add(i + 2, c);
      add(i + 1, -2.0 * c);
      add(i - 1, 2.0 * c);
      add(i - 2, -c);
      break;
    }
    case OperatorKind::Dx4: {
      if (n < 5) throw DomainError("grid too coarse for the x stencil");
      const double c = 1.0 / (h * h * h * h);
      add(i - 2, c);
      add(i - 1, -4.0 * c);
      add(i, 6.0 * c);
      add(i + 1, -4.0 * c);
      add(i + 2, c);
      break;
    }
    default:
      throw DomainError(std::string("no x closure row for ") + to_string(kind));
  }
  std::sort(row.begin(), row.end(), [](const RowEntry& a, const RowEntry& b) { return a.col < b.col; });
  return row;
}

double dyy_eigenvalue(int m, int n, double h) {
  const double s = std::sin(std::numbers::pi * m / (2.0 * (n + 1)));
  return -4.0 * s * s / (h * h);
}

}  // namespace zk::calculus
