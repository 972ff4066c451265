#include <doctest.h>

#include <cmath>
#include <numbers>

#include "phan/grid.hpp"
#include "phan/params.hpp"

using namespace phan;

TEST_CASE("parameter validation rejects non-positive inputs") {
  CHECK_THROWS_AS(validate_params(0.0, 1.0, 1.0), NonPositiveParameter);
  CHECK_THROWS_AS(validate_params(1.0, -2.0, 1.0), NonPositiveParameter);
  CHECK_THROWS_AS(validate_params(1.0, 1.0, 0.0), NonPositiveParameter);
  CHECK_NOTHROW(validate_params(0.1, 10.0, 2.0));
}

TEST_CASE("critical thickness closed form and bounds") {
  CHECK(critical_thickness(1.0, 1.0) ==
        doctest::Approx(std::numbers::pi / 4).epsilon(1e-15));
  // decreasing in the anchoring strength, bounded by pi/(2h)
  double prev = std::numbers::pi / 2;
  for (double lh : {0.05, 0.2, 1.0, 3.0, 10.0, 50.0}) {
    const double dc = critical_thickness(1.0, lh);
    CHECK(dc > 0.0);
    CHECK(dc < prev);
    prev = dc;
  }
  for (double h : {0.1, 0.7, 2.0, 9.0})
    CHECK(critical_thickness(h, 1.3) <
          std::numbers::pi / (2.0 * h) + 1e-15);
}

TEST_CASE("with_thickness rescales only d") {
  const PhysParams p = validate_params(2.0, 0.5, 0.3);
  const PhysParams q = p.with_thickness(1.1);
  CHECK(q.d == 1.1);
  CHECK(q.h == p.h);
  CHECK(q.lh == p.lh);
  CHECK(q.d_c == p.d_c);
}

TEST_CASE("grid construction and collapsed axes") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g1 = make_grid_1d(p, 64);
  CHECK(g1.dim == 1);
  CHECK(g1.n1() == 1);
  CHECK(g1.n2() == 1);
  CHECK(g1.dx_n == doctest::Approx(1.2 / 64).epsilon(1e-15));
  CHECK(g1.normal_nodes() == 65);

  const Grid g2 = make_grid(p, 2, 32, 64);
  CHECK(g2.n1() == 32);
  CHECK(g2.n2() == 1);
  CHECK(g2.dx_t == doctest::Approx(1.0 / 32).epsilon(1e-15));

  const Grid g3 = make_grid(p, 3, 8, 16);
  CHECK(g3.n1() == 8);
  CHECK(g3.n2() == 8);

  CHECK(g2.same_slab(g1));
  CHECK_FALSE(g2.same_slab(make_grid_1d(p, 32)));

  CHECK_THROWS_AS(make_grid(p, 0, 8, 8), GridTooCoarse);
  CHECK_THROWS_AS(make_grid(p, 4, 8, 8), GridTooCoarse);
  CHECK_THROWS_AS(make_grid(p, 2, 2, 8), GridTooCoarse);
  CHECK_THROWS_AS(make_grid(p, 1, 1, 3), GridTooCoarse);
}

TEST_CASE("normal coordinates") {
  const PhysParams p = validate_params(1.0, 2.0, 1.0);
  const Grid g = make_grid_1d(p, 10);
  CHECK(g.x_normal_node(0) == 0.0);
  CHECK(g.x_normal_node(10) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(g.x_normal_center(0) == doctest::Approx(0.05).epsilon(1e-15));
}
