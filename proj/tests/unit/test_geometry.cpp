#include <doctest.h>

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "zk/error.hpp"
#include "zk/geometry.hpp"

using namespace zk;
using namespace zk::geometry;
using std::numbers::pi;

TEST_CASE("grid spacing follows the definition") {
  const Grid g = build_grid(2 * pi, pi, 63, 63);
  CHECK(g.hx() == doctest::Approx(2 * pi / 64).epsilon(1e-15));
  CHECK(g.hy() == doctest::Approx(2 * pi / 64).epsilon(1e-15));
  CHECK(g.node_count() == 65u * 65u);
  CHECK(g.x(64) == doctest::Approx(2 * pi).epsilon(1e-15));
  CHECK(g.y(0) == -pi);
  CHECK(g.y(64) == doctest::Approx(pi).epsilon(1e-15));
}

TEST_CASE("grid preconditions") {
  CHECK_THROWS_AS(build_grid(1, 1, 7, 8), DomainError);
  CHECK_THROWS_AS(build_grid(1, 1, 8, 7), DomainError);
  CHECK_THROWS_AS(build_grid(0, 1, 8, 8), DomainError);
  CHECK_THROWS_AS(build_grid(1, -1, 8, 8), DomainError);
  CHECK_THROWS_AS(build_grid(NAN, 1, 8, 8), DomainError);
  CHECK_THROWS_AS(build_grid(1, INFINITY, 8, 8), DomainError);
  CHECK_NOTHROW(build_grid(1, 1, 8, 8));
}

TEST_CASE("counterexample rectangle grid") {
  const Grid g = build_grid(4 * pi / std::sqrt(3.0), pi, 127, 127);
  CHECK(g.length() == doctest::Approx(7.255197456936871));
  CHECK(g.kind() == DomainKind::rectangle);
}

TEST_CASE("coordinates are computed per node") {
  const Grid g(0.3, 0.7, 999, 999);
  for (int i : {0, 1, 17, 500, 1000}) CHECK(g.x(i) == static_cast<double>(i) * g.hx());
  CHECK(std::abs(g.x(1000) - 0.3) < 1e-15);
}

TEST_CASE("sample_field") {
  const Grid g(4 * pi / std::sqrt(3.0), pi, 31, 31);
  SUBCASE("zero function") {
    const Field f = sample_field(g, [](double, double) { return 0.0; });
    CHECK(f.max_abs() == 0.0);
  }
  SUBCASE("constant one is not flagged clean") {
    const Field f = sample_field(g, [](double, double) { return 1.0; });
    CHECK_FALSE(f.dirichlet_clean());
    CHECK(f(0, 0) == 1.0);
    CHECK(f(5, 5) == 1.0);
  }
  SUBCASE("counterexample has a vanishing trace") {
    const Field f = sample_field(g, oracle::counterexample);
    double trace = 0.0;
    for (int i = 0; i <= g.nx() + 1; ++i)
      trace = std::max({trace, std::abs(f(i, 0)), std::abs(f(i, g.ny() + 1))});
    for (int j = 0; j <= g.ny() + 1; ++j)
      trace = std::max({trace, std::abs(f(0, j)), std::abs(f(g.nx() + 1, j))});
    CHECK(trace < 1e-14);
    const Field c = enforce_dirichlet(f);
    for (std::size_t k = 0; k < f.values().size(); ++k) CHECK(std::abs(c.values()[k] - f.values()[k]) < 1e-14);
  }
  SUBCASE("non-finite values are rejected") {
    CHECK_THROWS_AS(sample_field(g, [](double x, double) { return x > 1 ? NAN : 0.0; }), DomainError);
    CHECK_THROWS_AS(sample_field(g, [](double, double) { return INFINITY; }), DomainError);
  }
}

TEST_CASE("enforce_dirichlet") {
  const Grid g(1, 1, 9, 11);
  const Field ones = sample_field(g, [](double, double) { return 1.0; });
  const Field c = enforce_dirichlet(ones);
  CHECK(c.dirichlet_clean());
  for (int j = 0; j <= g.ny() + 1; ++j)
    for (int i = 0; i <= g.nx() + 1; ++i) CHECK(c(i, j) == (g.is_boundary(i, j) ? 0.0 : 1.0));
  const Field twice = enforce_dirichlet(c);
  CHECK(twice == c);
  CHECK(twice.dirichlet_clean());
}

TEST_CASE("mutable access drops the clean flag") {
  Field f(Grid(1, 1, 8, 8));
  CHECK(f.dirichlet_clean());
  f(3, 3) = 2.0;
  CHECK_FALSE(f.dirichlet_clean());
  f.make_clean();
  CHECK(f.dirichlet_clean());
  CHECK(f(3, 3) == 2.0);
}

TEST_CASE("domain kind names round-trip") {
  CHECK(domain_kind_from_string(to_string(DomainKind::rectangle)) == DomainKind::rectangle);
  CHECK(domain_kind_from_string(to_string(DomainKind::truncated_strip)) == DomainKind::truncated_strip);
  CHECK_THROWS_AS(domain_kind_from_string("disc"), DomainError);
}
