#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "phan/hydroflow.hpp"

using namespace phan;

namespace {

constexpr double tau = 2 * std::numbers::pi;

FlowState seeded_state(const Grid& g, const PhysParams& p, unsigned seed,
                       double angle_amp, double stream_amp) {
  FlowState s = make_flow_state(g, p);
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  const double a = unit(rng), b = unit(rng);
  for (int i = 0; i < g.n1(); ++i) {
    const double wave =
        1.0 + 0.4 * std::sin(tau * (i + 0.5) / g.n1() + a);
    for (int k = 0; k <= g.nn; ++k) {
      const double ramp = (g.d - g.x_normal_node(k)) / g.d;
      s.phi.values(i, 0, k) = angle_amp * ramp * wave;
    }
  }
  if (stream_amp > 0.0 && g.dim >= 2) {
    auto psi = [&](double x1, double x3) {
      return stream_amp * std::sin(tau * x1 + b) *
             (1.0 - std::cos(tau * x3 / g.d));
    };
    for (int i = 0; i < g.n1(); ++i) {
      for (int kc = 0; kc < g.nn; ++kc)
        s.u.u1(i, 0, kc) = (psi(g.dx_t * i, g.dx_n * (kc + 1)) -
                            psi(g.dx_t * i, g.dx_n * kc)) /
                           g.dx_n;
      for (int k = 1; k < g.nn; ++k)
        s.u.u3(i, 0, k) =
            -(psi(g.dx_t * (i + 1), g.dx_n * k) - psi(g.dx_t * i, g.dx_n * k)) /
            g.dx_t;
    }
  }
  return s;
}

double max_angle_diff(const AngleField& a, const AngleField& b) {
  return (a.values.flat() - b.values.flat()).abs().maxCoeff();
}

}  // namespace

TEST_CASE("the rest state is an exact fixed point") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  for (int dim : {1, 2}) {
    const Grid g = make_grid(p, dim, dim == 1 ? 1 : 8, 32);
    const FlowState rest = make_flow_state(g, p);
    const FlowState next = step(rest, p, 1e-3);
    CHECK(next.phi.values.flat().abs().maxCoeff() < 1e-14);
    CHECK(next.u.u1.flat().abs().maxCoeff() < 1e-14);
    CHECK(next.u.u3.flat().abs().maxCoeff() < 1e-14);
  }
}

TEST_CASE("the bent equilibrium is a fixed point up to the solver tolerance") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g1 = make_grid_1d(p, 64);
  const auto [eq, trace] = monotone_iterate(p, g1, 1e-13);
  const Grid g2 = make_grid(p, 2, 8, 64);
  FlowState s = make_flow_state(g2, p);
  s.phi = extend_to_slab(eq, g2);
  const FlowState next = step(s, p, 1e-3);
  CHECK(max_angle_diff(next.phi, s.phi) < 1e-11);
  CHECK(next.u.u1.flat().abs().maxCoeff() < 1e-11);
}

TEST_CASE("total energy bookkeeping") {
  const PhysParams p = validate_params(1.0, 1.0, 1.0);
  const Grid g = make_grid(p, 2, 8, 32);
  FlowState s = make_flow_state(g, p);
  // planar state: E = h^2 d / 2 + L_H / 2 = 1
  CHECK(total_energy(s, p) == doctest::Approx(1.0).epsilon(1e-14));

  // a tangentially constant angle reproduces the 1D energy exactly
  const PhysParams p2 = validate_params(1.0, 1.0, 1.2);
  const Grid g1 = make_grid_1d(p2, 48);
  const Grid g2 = make_grid(p2, 2, 8, 48);
  const auto [eq, trace] = monotone_iterate(p2, g1, 1e-12);
  FlowState s2 = make_flow_state(g2, p2);
  s2.phi = extend_to_slab(eq, g2);
  CHECK(total_energy(s2, p2) == doctest::Approx(eq.energy).epsilon(1e-14));

  // kinetic part scales quadratically in u
  FlowState moving = seeded_state(g2, p2, 5, 0.0, 0.05);
  const FlowState parked{0.0, make_velocity_field(g2),
                         make_pressure_field(g2), moving.phi};
  const double base = total_energy(parked, p2);
  const double e1 = total_energy(moving, p2);
  moving.u.u1.flat() *= 2.0;
  moving.u.u3.flat() *= 2.0;
  const double e2 = total_energy(moving, p2);
  CHECK(e2 - base == doctest::Approx(4.0 * (e1 - base)).epsilon(1e-12));
}

TEST_CASE("dissipation vanishes only at equilibria") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g1 = make_grid_1d(p, 64);
  const Grid g2 = make_grid(p, 2, 8, 64);
  const auto [eq, trace] = monotone_iterate(p, g1, 1e-13);
  FlowState at_star = make_flow_state(g2, p);
  at_star.phi = extend_to_slab(eq, g2);
  CHECK(dissipation(at_star, p) < 1e-16);

  // the planar state is stationary too (if unstable here), so A = 0
  FlowState rest = make_flow_state(g2, p);
  CHECK(dissipation(rest, p) == 0.0);

  FlowState stirred = seeded_state(g2, p, 3, 0.4, 0.02);
  CHECK(dissipation(stirred, p) > 1e-4);
}

TEST_CASE("projection leaves solenoidal fields alone and kills gradients") {
  const PhysParams p = validate_params(1.0, 1.0, 0.9);
  const Grid g = make_grid(p, 2, 16, 24);
  const FlowState sol = seeded_state(g, p, 11, 0.0, 0.1);

  auto [u_same, chi0] = project(sol.u);
  CHECK((u_same.u1.flat() - sol.u.u1.flat()).abs().maxCoeff() < 1e-12);
  CHECK((u_same.u3.flat() - sol.u.u3.flat()).abs().maxCoeff() < 1e-12);

  std::mt19937 rng(17);
  std::uniform_real_distribution<double> unit(-1.0, 1.0);
  PressureField q = make_pressure_field(g);
  for (Eigen::Index m = 0; m < q.values.flat().size(); ++m)
    q.values.flat()[m] = unit(rng);
  const VelocityField grad = cell_gradient(q);
  auto [u_zero, chi1] = project(grad);
  CHECK(u_zero.u1.flat().abs().maxCoeff() < 1e-11);
  CHECK(u_zero.u3.flat().abs().maxCoeff() < 1e-11);

  // superposition: projecting solenoidal + gradient recovers the former
  VelocityField mixed = sol.u;
  mixed.u1.flat() += grad.u1.flat();
  mixed.u3.flat() += grad.u3.flat();
  auto [u_rec, chi2] = project(mixed);
  CHECK((u_rec.u1.flat() - sol.u.u1.flat()).abs().maxCoeff() < 1e-11);
  CHECK((u_rec.u3.flat() - sol.u.u3.flat()).abs().maxCoeff() < 1e-11);
  // the random gradient part has entries of size ~1/dx, so the residual
  // scale is amplified accordingly
  CHECK(discrete_divergence(u_rec).flat().abs().maxCoeff() < 1e-10);
}

TEST_CASE("time step obeys the stability bound check") {
  const PhysParams p = validate_params(2.0, 1.0, 1.0);
  const Grid g = make_grid(p, 2, 8, 32);
  FlowState s = seeded_state(g, p, 1, 0.5, 0.05);
  const double bound = cfl_bound(s, p);
  CHECK(bound > 0.0);
  CHECK_THROWS_AS(step(s, p, 2.0 * bound), TimestepTooLarge);
  CHECK_NOTHROW(step(s, p, 0.5 * bound));
  CHECK_THROWS_AS(step(s, p, 0.0), TimestepTooLarge);
  CHECK_THROWS_AS(step(s, p, -1e-3), TimestepTooLarge);
}

TEST_CASE("energy decreases and the balance defect shrinks with dt") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g = make_grid(p, 2, 16, 32);
  // boundary-compatible data (flat to fourth order at the walls), so the
  // balance defect scales as dt^2 from the very first step
  auto smooth_state = [&](double angle_amp, double stream_amp) {
    FlowState s = seeded_state(g, p, 23, 0.0, stream_amp);
    for (int i = 0; i < g.n1(); ++i) {
      const double wave = 1.0 + 0.4 * std::sin(tau * (i + 0.5) / g.n1());
      for (int k = 0; k <= g.nn; ++k) {
        const double sn = std::sin(std::numbers::pi * g.x_normal_node(k) / g.d);
        s.phi.values(i, 0, k) = angle_amp * sn * sn * sn * sn * wave;
      }
    }
    return s;
  };
  auto max_defect = [&](double dt, int steps) {
    FlowState s = smooth_state(0.8, 0.02);
    double e_prev = total_energy(s, p);
    double worst = 0.0;
    for (int n = 0; n < steps; ++n) {
      s = step(s, p, dt);
      const double e = total_energy(s, p);
      CHECK(e <= e_prev + 1e-13 * std::abs(e_prev));
      worst = std::max(worst,
                       std::abs(e - e_prev + dt * dissipation(s, p)));
      e_prev = e;
    }
    return worst;
  };
  const double d1 = max_defect(1e-3, 200);
  const double d2 = max_defect(5e-4, 400);
  CHECK(d2 < d1 / 3.0);
}

TEST_CASE("a one-dimensional film stays quiescent and relaxes") {
  const PhysParams p = validate_params(1.0, 1.0, 0.5);
  const Grid g = make_grid_1d(p, 64);
  FlowState s = seeded_state(g, p, 9, 0.3, 0.0);
  const double norm0 = s.phi.values.flat().abs().maxCoeff();
  double e_prev = total_energy(s, p);
  for (int n = 0; n < 200; ++n) {
    s = step(s, p, 1e-3);
    const double e = total_energy(s, p);
    CHECK(e <= e_prev + 1e-14);
    e_prev = e;
    CHECK(s.u.u1.flat().abs().maxCoeff() == 0.0);
    CHECK(s.u.u3.flat().abs().maxCoeff() == 0.0);
  }
  CHECK(s.phi.values.flat().abs().maxCoeff() < 0.5 * norm0);
}

TEST_CASE("tangentially uniform data stays tangentially uniform") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g = make_grid(p, 2, 16, 32);
  FlowState s = make_flow_state(g, p);
  for (int i = 0; i < g.n1(); ++i)
    for (int k = 0; k <= g.nn; ++k)
      s.phi.values(i, 0, k) = 0.4 * (g.d - g.x_normal_node(k)) / g.d;
  for (int n = 0; n < 100; ++n) s = step(s, p, 1e-3);
  double worst = 0.0;
  for (int i = 1; i < g.n1(); ++i)
    for (int k = 0; k <= g.nn; ++k)
      worst = std::max(worst, std::abs(s.phi.values(i, 0, k) -
                                       s.phi.values(0, 0, k)));
  CHECK(worst < 1e-12);
  CHECK(s.u.u1.flat().abs().maxCoeff() < 1e-12);
  CHECK(s.u.u3.flat().abs().maxCoeff() < 1e-12);
}

TEST_CASE("run reports convergence with diagnostics") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g1 = make_grid_1d(p, 128);
  const auto [eq, trace] = monotone_iterate(p, g1, 1e-12);
  FlowState s = make_flow_state(g1, p);
  for (int k = 0; k <= g1.nn; ++k)
    s.phi.values(0, 0, k) = 0.3 * (g1.d - g1.x_normal_node(k)) / g1.d;
  const Trajectory traj =
      run(s, p, 2e-3, 100.0, std::make_optional(eq), 10, {1e-12, 1e-10});
  CHECK(traj.status == RunStatus::Converged);
  REQUIRE(!traj.samples.empty());
  const Diagnostics& last = traj.samples.back();
  REQUIRE(last.dist_to_star.has_value());
  CHECK(*last.dist_to_star < 1e-5);
  CHECK(last.u_linf == 0.0);
  CHECK(last.div_residual < 1e-10);
  // energies sampled along the run never increase
  for (size_t i = 1; i < traj.samples.size(); ++i)
    CHECK(traj.samples[i].total_energy <=
          traj.samples[i - 1].total_energy + 1e-12);
}

TEST_CASE("max principle report flags escapes precisely") {
  const PhysParams p = validate_params(1.0, 1.0, 1.0);
  const Grid g = make_grid(p, 2, 4, 8);
  AngleField phi = make_angle_field(g, p.lh);
  phi.values(2, 0, 3) = 1.5;
  MaxPrincipleReport ok = max_principle_check(phi, 0.0, 2.0, 0.0);
  CHECK(ok.pass);
  CHECK(ok.max_value == 1.5);
  MaxPrincipleReport bad = max_principle_check(phi, 0.0, 1.0, 1e-8);
  CHECK_FALSE(bad.pass);
  CHECK(bad.argmax == std::array<int, 3>{2, 0, 3});
  phi.values(1, 0, 2) = -0.5;
  MaxPrincipleReport low = max_principle_check(phi, 0.0, 2.0, 1e-8);
  CHECK_FALSE(low.pass);
  CHECK(low.argmin == std::array<int, 3>{1, 0, 2});
}
