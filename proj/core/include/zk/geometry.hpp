#pragma once

// Uniform tensor-product grids over (0,L) x (-B,B) and node-valued fields.
//
// Node (i, j) sits at x = i*hx, y = -B + j*hy for i = 0..nx+1, j = 0..ny+1.
// Indices 0 and nx+1 (resp. ny+1) form the boundary layer; it is stored
// explicitly so every stencil can read Dirichlet data without branching.
// Values are laid out with x fastest: index = j*(nx+2) + i.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace zk::geometry {

enum class DomainKind { rectangle, truncated_strip };

const char* to_string(DomainKind kind) noexcept;
DomainKind domain_kind_from_string(const std::string& name);

inline constexpr int kMinInteriorPoints = 8;

class Grid {
 public:
  // Throws DomainError on non-finite or non-positive dimensions and on
  // nx, ny below kMinInteriorPoints.
  Grid(double L, double B, int nx, int ny,
       DomainKind kind = DomainKind::rectangle);

  double length() const noexcept { return L_; }
  double half_width() const noexcept { return B_; }
  int nx() const noexcept { return nx_; }
  int ny() const noexcept { return ny_; }
  double hx() const noexcept { return hx_; }
  double hy() const noexcept { return hy_; }
  DomainKind kind() const noexcept { return kind_; }

  // Computed per node, never by running sums.
  double x(int i) const noexcept { return static_cast<double>(i) * hx_; }
  double y(int j) const noexcept { return -B_ + static_cast<double>(j) * hy_; }

  int row_stride() const noexcept { return nx_ + 2; }
  std::size_t node_count() const noexcept {
    return static_cast<std::size_t>(nx_ + 2) * static_cast<std::size_t>(ny_ + 2);
  }
  std::size_t index(int i, int j) const noexcept {
    return static_cast<std::size_t>(j) * static_cast<std::size_t>(nx_ + 2) +
           static_cast<std::size_t>(i);
  }
  bool is_boundary(int i, int j) const noexcept {
    return i == 0 || j == 0 || i == nx_ + 1 || j == ny_ + 1;
  }

  friend bool operator==(const Grid&, const Grid&) = default;

 private:
  double L_;
  double B_;
  int nx_;
  int ny_;
  double hx_;
  double hy_;
  DomainKind kind_;
};

Grid build_grid(double L, double B, int nx, int ny,
                DomainKind kind = DomainKind::rectangle);

// Real samples on every node of a grid, including the boundary layer.
//
// The dirichlet_clean flag is true only when the boundary layer is known to
// be exactly zero. Any mutable access drops the flag; enforce_dirichlet()
// (or make_clean()) restores it.
class Field {
 public:
  // All-zero field; a zero field is clean.
  explicit Field(Grid grid);
  Field(Grid grid, std::vector<double> values);

  const Grid& grid() const noexcept { return grid_; }
  bool dirichlet_clean() const noexcept { return clean_; }

  double operator()(int i, int j) const noexcept { return values_[grid_.index(i, j)]; }
  double& operator()(int i, int j) noexcept {
    clean_ = false;
    return values_[grid_.index(i, j)];
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> mutable_values() noexcept {
    clean_ = false;
    return values_;
  }

  void make_clean() noexcept;
  // Internal fast path for code that writes only interior nodes of a field
  // whose boundary is already zero.
  void assume_clean() noexcept { clean_ = true; }

  double max_abs() const noexcept;
  bool all_finite() const noexcept;

  friend bool operator==(const Field& a, const Field& b) {
    return a.grid_ == b.grid_ && a.values_ == b.values_;
  }

 private:
  Grid grid_;
  std::vector<double> values_;
  bool clean_ = true;
};

using ScalarFunction = std::function<double(double x, double y)>;

// Pointwise samples at all nodes. Throws DomainError if f is non-finite
// anywhere. The result is never flagged clean, even if its trace vanishes.
Field sample_field(const Grid& grid, const ScalarFunction& f);

// Zero the boundary layer; interior untouched. Idempotent.
Field enforce_dirichlet(Field field);

}  // namespace zk::geometry
