#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phan/equilibrium.hpp"

using namespace phan;

namespace {

Profile1D random_admissible(const Grid& g, std::mt19937& rng, double amp) {
  std::uniform_real_distribution<double> unit(0.05, 1.0);
  Profile1D f = make_profile(g);
  for (int j = 0; j < g.nn; ++j)
    f.values[j] = amp * unit(rng) * (g.d - g.x_normal_node(j)) / g.d;
  return f;
}

}  // namespace

TEST_CASE("energy gradient is the exact derivative of the discrete energy") {
  const PhysParams p = validate_params(1.4, 0.7, 1.1);
  const Grid g = make_grid_1d(p, 96);
  const Eigen::ArrayXd w = trapezoid_weights(g);
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double eps = 1e-5;
  for (int trial = 0; trial < 20; ++trial) {
    Profile1D phi = make_profile(g);
    Profile1D eta = make_profile(g);
    for (int j = 0; j < g.nn; ++j) {
      phi.values[j] = 0.5 + 0.4 * unit(rng);
      eta.values[j] = unit(rng);
    }
    Profile1D plus = phi, minus = phi;
    plus.values += eps * eta.values;
    minus.values -= eps * eta.values;
    const double fd = (energy(plus, p) - energy(minus, p)) / (2 * eps);
    const Profile1D grad = energy_gradient(phi, p);
    const double pairing = (w * grad.values * eta.values).sum();
    CHECK(std::abs(fd - pairing) <
          1e-6 * std::max(1.0, std::abs(pairing)));
  }
}

TEST_CASE("iteration map agrees with the constant-input closed form") {
  const PhysParams p = validate_params(1.3, 0.6, 0.9);
  const double c = 0.8;
  const double gc = c + 0.5 * std::sin(2 * c);
  // v = gc + A cosh(hx) + B sinh(hx) with v(d)=0 and the wall condition
  const double B =
      -gc / (p.h / p.lh * std::cosh(p.h * p.d) + std::sinh(p.h * p.d));
  const double A = B * p.h / p.lh;
  double prev_err = 0.0;
  for (int n : {64, 128, 256}) {
    const Grid g = make_grid_1d(p, n);
    Profile1D u = make_profile(g);
    for (int j = 0; j < g.nn; ++j) u.values[j] = c;
    const Profile1D v = apply_L(u, p, g);
    double err = 0.0;
    for (int j = 0; j <= g.nn; ++j) {
      const double x = g.x_normal_node(j);
      const double exact =
          gc + A * std::cosh(p.h * x) + B * std::sinh(p.h * x);
      err = std::max(err, std::abs(v.values[j] - exact));
    }
    CHECK(err < 1e-3);
    if (n > 64) CHECK(err < 0.6 * prev_err);
    prev_err = err;
  }
}

TEST_CASE("iteration map validates its input range") {
  const PhysParams p = validate_params(1.0, 1.0, 1.0);
  const Grid g = make_grid_1d(p, 32);
  Profile1D bad = make_profile(g);
  bad.values[3] = 2.0;  // above pi/2
  CHECK_THROWS_AS(apply_L(bad, p, g), OutOfRange);
  bad.values[3] = -0.1;
  CHECK_THROWS_AS(apply_L(bad, p, g), OutOfRange);
}

TEST_CASE("monotone iteration produces a decreasing ordered chain") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g = make_grid_1d(p, 256);
  const auto [eq, trace] = monotone_iterate(p, g, 1e-12);
  CHECK(trace.total_violations() == 0);
  CHECK(trace.sup_deltas.back() < 1e-10);
  CHECK(eq.bvp_residual < 1e-7);
  CHECK(eq.method == "monotone-iteration");
  // positive, strictly decreasing profile with wall value in (0, pi/2)
  CHECK(eq.profile.wall_value() > 0.0);
  CHECK(eq.profile.wall_value() < std::numbers::pi / 2);
  for (int j = 0; j < g.nn; ++j)
    CHECK(eq.profile.values[j] > eq.profile.values[j + 1]);
  CHECK(eq.profile.values[g.nn] == 0.0);
}

TEST_CASE("subcritical films relax to the planar state") {
  const PhysParams p = validate_params(1.0, 1.0, 0.5);
  const Grid g = make_grid_1d(p, 128);
  const auto [eq, trace] = monotone_iterate(p, g, 1e-10);
  CHECK(eq.profile.values.abs().maxCoeff() < 1e-6);
  CHECK(eq.energy == doctest::Approx(p.h * p.h * p.d / 2 + p.lh / 2)
                         .epsilon(1e-8));
}

TEST_CASE("descent from random seeds reaches the monotone limit") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g = make_grid_1d(p, 128);
  const auto [eq, trace] = monotone_iterate(p, g, 1e-12);
  std::mt19937 rng(99);
  for (int seed = 0; seed < 5; ++seed) {
    const Profile1D start = random_admissible(g, rng, 1.2);
    const EquilibriumProfile via_descent =
        gradient_descent_minimize(start, p, g, 1e-10);
    CHECK(via_descent.method == "gradient-descent");
    CHECK((via_descent.profile.values - eq.profile.values).abs().maxCoeff() <
          1e-5);
  }
}

TEST_CASE("descent finds only the trivial state below threshold") {
  std::mt19937 rng(4242);
  for (double d : {0.3, 0.5, 0.7}) {
    const PhysParams p = validate_params(1.0, 1.0, d);
    const Grid g = make_grid_1d(p, 128);
    for (int seed = 0; seed < 3; ++seed) {
      const EquilibriumProfile eq = gradient_descent_minimize(
          random_admissible(g, rng, 1.0), p, g, 1e-9);
      CHECK(eq.profile.values.abs().maxCoeff() < 1e-6);
    }
  }
}

TEST_CASE("the bent state beats the planar state above threshold") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g = make_grid_1d(p, 256);
  const auto [eq, trace] = monotone_iterate(p, g, 1e-12);
  const double planar_energy = p.h * p.h * p.d / 2 + p.lh / 2;
  CHECK(eq.energy < planar_energy - 1e-3);
  CHECK(energy(make_profile(g), p) ==
        doctest::Approx(planar_energy).epsilon(1e-14));
}
