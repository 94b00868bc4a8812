#include "zk/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "zk/error.hpp"

namespace zk::geometry {

const char* to_string(DomainKind kind) noexcept {
  switch (kind) {
    case DomainKind::rectangle:
      return "rectangle";
    case DomainKind::truncated_strip:
      return "truncated_strip";
  }
  return "rectangle";
}

DomainKind domain_kind_from_string(const std::string& name) {
  if (name == "rectangle") return DomainKind::rectangle;
  if (name == "truncated_strip" || name == "strip") return DomainKind::truncated_strip;
  throw DomainError("unknown domain kind '" + name + "'");
}

Grid::Grid(double L, double B, int nx, int ny, DomainKind kind)
    : L_(L), B_(B), nx_(nx), ny_(ny), kind_(kind) {
  if (!std::isfinite(L) || L <= 0.0)
    throw DomainError("grid length L must be finite and positive");
  if (!std::isfinite(B) || B <= 0.0)
    throw DomainError("grid half-width B must be finite and positive");
  if (nx < kMinInteriorPoints)
    throw DomainError("nx below minimum of " + std::to_string(kMinInteriorPoints));
  if (ny < kMinInteriorPoints)
    throw DomainError("ny below minimum of " + std::to_string(kMinInteriorPoints));
  hx_ = L / static_cast<double>(nx + 1);
  hy_ = 2.0 * B / static_cast<double>(ny + 1);
}

Grid build_grid(double L, double B, int nx, int ny, DomainKind kind) {
  return Grid(L, B, nx, ny, kind);
}

Field::Field(Grid grid) : grid_(grid), values_(grid.node_count(), 0.0), clean_(true) {}

Field::Field(Grid grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)), clean_(false) {
  if (values_.size() != grid_.node_count())
    throw DomainError("field value count does not match grid");
}

void Field::make_clean() noexcept {
  const int nx = grid_.nx();
  const int ny = grid_.ny();
  for (int i = 0; i <= nx + 1; ++i) {
    values_[grid_.index(i, 0)] = 0.0;
    values_[grid_.index(i, ny + 1)] = 0.0;
  }
  for (int j = 0; j <= ny + 1; ++j) {
    values_[grid_.index(0, j)] = 0.0;
    values_[grid_.index(nx + 1, j)] = 0.0;
  }
  clean_ = true;
}

double Field::max_abs() const noexcept {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const noexcept {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

Field sample_field(const Grid& grid, const ScalarFunction& f) {
  std::vector<double> values(grid.node_count());
  for (int j = 0; j <= grid.ny() + 1; ++j) {
    const double y = grid.y(j);
    for (int i = 0; i <= grid.nx() + 1; ++i) {
      const double v = f(grid.x(i), y);
      if (!std::isfinite(v))
        throw DomainError("sampled function is not finite at node (" +
                          std::to_string(i) + ", " + std::to_string(j) + ")");
      values[grid.index(i, j)] = v;
    }
  }
  return Field(grid, std::move(values));
}

Field enforce_dirichlet(Field field) {
  field.make_clean();
  return field;
}

}  // namespace zk::geometry
