#include <cmath>
#include <numbers>
#include <random>
#include <string>

#include "zk/calculus.hpp"
#include "zk/dynamics.hpp"
#include "zk/error.hpp"
#include "zk/spectral.hpp"

namespace zk::dynamics {

namespace {

using std::numbers::pi;

geometry::ScalarFunction random_modes(const SimConfig& c) {
  std::mt19937_64 rng(c.initial.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  constexpr int kModes = 3;
  std::vector<double> coeff;
  for (int k = 1; k <= kModes; ++k)
    for (int m = 1; m <= kModes; ++m) coeff.push_back(normal(rng) / (k * m));
  const double L = c.L;
  const double B = c.B;
  return [coeff, L, B](double x, double y) {
    double sum = 0.0;
    std::size_t idx = 0;
    for (int k = 1; k <= kModes; ++k) {
      const double sx = std::sin(k * pi * x / L);
      for (int m = 1; m <= kModes; ++m)
        sum += coeff[idx++] * sx * sx * std::sin(m * pi * (y + B) / (2.0 * B));
    }
    return sum;
  };
}

}  // namespace

Field make_initial(const SimConfig& config) {
  const Grid grid = config.grid();
  const InitialSpec& spec = config.initial;
  const double L = config.L;
  const double B = config.B;

  Field u(grid);
  if (spec.kind == "zero") {
    return u;
  } else if (spec.kind == "product") {
    u = geometry::sample_field(grid, [L, B](double x, double y) {
      return (1.0 - std::cos(2.0 * pi * x / L)) * std::cos(pi * y / (2.0 * B));
    });
  } else if (spec.kind == "strip_bump") {
    const double R = spec.support_radius;
    if (!(R > 0.0)) throw ConfigError("support_radius", "must be positive");
    if (config.domain == DomainKind::truncated_strip && B < 4.0 * R)
      throw ConfigError("B", "truncated strip half-width must be at least 4x the datum support radius");
    u = geometry::sample_field(grid, [L, R](double x, double y) {
      if (std::abs(y) >= R) return 0.0;
      const double c = std::cos(pi * y / (2.0 * R));
      return (1.0 - std::cos(2.0 * pi * x / L)) * c * c * c * c;
    });
  } else if (spec.kind == "stationary_mode") {
    const spectral::StationaryMode mode = [&] {
      try {
        return spectral::StationaryMode(spec.mode_k, spec.mode_l, spec.mode_n, B);
      } catch (const DomainError& e) {
        throw ConfigError("B", e.what());
      }
    }();
    if (std::abs(mode.length() - L) > 1e-6 * mode.length())
      throw ConfigError("L", "stationary_mode needs the critical length " +
                                 std::to_string(mode.length()));
    u = geometry::sample_field(grid, [&mode](double x, double y) { return mode(x, y); });
  } else if (spec.kind == "random_modes") {
    u = geometry::sample_field(grid, random_modes(config));
  } else if (spec.kind == "file") {
    Snapshot snap = read_snapshot(spec.file, config.domain);
    if (!(snap.field.grid() == grid))
      throw ConfigError("initial_file", "snapshot grid does not match the configured grid");
    u = std::move(snap.field);
  } else {
    throw ConfigError("initial", "unknown initial datum '" + spec.kind + "'");
  }
  u.make_clean();
  if (!u.all_finite()) throw ConfigError("initial", "initial datum is not finite");

  double scale = spec.amplitude;
  if (spec.target_weighted) {
    const double w = calculus::weighted_l2_sq(u);
    if (!(w > 0.0)) throw ConfigError("target_weighted", "cannot rescale a zero datum");
    scale = std::sqrt(*spec.target_weighted / w);
  }
  if (scale != 1.0) {
    for (double& v : u.mutable_values()) v *= scale;
    u.assume_clean();
  }
  return u;
}

}  // namespace zk::dynamics
