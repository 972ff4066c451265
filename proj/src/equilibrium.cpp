#include "phan/equilibrium.hpp"

#include <cmath>
#include <numbers>

#include "phan/errors.hpp"
#include "phan/tridiag.hpp"

namespace phan {

namespace {

inline double g_mono(double u) { return u + 0.5 * std::sin(2.0 * u); }

void check_profile(const Profile1D& phi, const Grid& grid) {
  if (phi.values.size() != grid.nn + 1)
    throw GridMismatch("profile/grid size mismatch");
}

}  // namespace

double energy(const Profile1D& phi, const PhysParams& params) {
  const int n = phi.grid.nn;
  const double dx = phi.dx();
  const double h2 = params.h * params.h;
  double e = 0.0;
  for (int j = 0; j < n; ++j) {
    const double gp = (phi.values[j + 1] - phi.values[j]) / dx;
    e += 0.5 * gp * gp * dx;
  }
  const Eigen::ArrayXd w = trapezoid_weights(phi.grid);
  for (int j = 0; j <= n; ++j)
    e += w[j] * 0.25 * h2 * (std::cos(2.0 * phi.values[j]) + 1.0);
  e += 0.25 * params.lh * (std::cos(2.0 * phi.values[0]) + 1.0);
  return e;
}

Profile1D energy_gradient(const Profile1D& phi, const PhysParams& params) {
  const int n = phi.grid.nn;
  const double dx = phi.dx();
  const double h2 = params.h * params.h;
  Profile1D grad = make_profile(phi.grid);
  const auto& v = phi.values;
  for (int j = 1; j < n; ++j)
    grad.values[j] = -(v[j + 1] - 2.0 * v[j] + v[j - 1]) / (dx * dx) -
                     0.5 * h2 * std::sin(2.0 * v[j]);
  // wall node: 2/dx times the compact second-order Robin defect, i.e. the
  // exact derivative of the discrete energy against the dx/2 node weight
  grad.values[0] =
      -(2.0 / dx) * ((v[1] - v[0]) / dx + 0.25 * dx * h2 * std::sin(2.0 * v[0]) +
                     0.5 * params.lh * std::sin(2.0 * v[0]));
  grad.values[n] = 0.0;
  return grad;
}

double bvp_residual(const Profile1D& phi, const PhysParams& params) {
  const int n = phi.grid.nn;
  const double dx = phi.dx();
  const double h2 = params.h * params.h;
  const auto& v = phi.values;
  double interior = 0.0;
  for (int j = 1; j < n; ++j) {
    const double r = (v[j + 1] - 2.0 * v[j] + v[j - 1]) / (dx * dx) +
                     0.5 * h2 * std::sin(2.0 * v[j]);
    interior = std::max(interior, std::abs(r));
  }
  const double wall = (v[1] - v[0]) / dx + 0.25 * dx * h2 * std::sin(2.0 * v[0]) +
                      0.5 * params.lh * std::sin(2.0 * v[0]);
  return interior + std::abs(v[n]) + std::abs(wall);
}

Profile1D apply_L(const Profile1D& u, const PhysParams& params,
                  const Grid& grid) {
  check_profile(u, grid);
  constexpr double slack = 1e-12;
  if ((u.values < -slack).any() ||
      (u.values > std::numbers::pi / 2.0 + slack).any())
    throw OutOfRange("apply_L input must lie in [0, pi/2]");

  const int n = grid.nn;  // unknowns at nodes 0..n-1, v[n] = 0
  const double dx = grid.dx_n;
  const double ih2 = 1.0 / (params.h * params.h);
  Eigen::ArrayXd lower = Eigen::ArrayXd::Zero(n);
  Eigen::ArrayXd diag(n), upper = Eigen::ArrayXd::Zero(n), rhs(n);

  // weak form with trapezoid weights; wall row folds the coupling
  // (-L_H^-1 d3 + 1) v = g(u) in through the boundary term
  diag[0] = ih2 / dx + ih2 * params.lh + 0.5 * dx;
  upper[0] = -ih2 / dx;
  rhs[0] = (0.5 * dx + ih2 * params.lh) * g_mono(u.values[0]);
  for (int j = 1; j < n; ++j) {
    lower[j] = -ih2 / dx;
    diag[j] = 2.0 * ih2 / dx + dx;
    if (j < n - 1) upper[j] = -ih2 / dx;
    rhs[j] = dx * g_mono(u.values[j]);
  }
  TridiagSolver solver(lower, diag, upper);
  Eigen::ArrayXd sol = solver.solve(rhs);

  Profile1D v = make_profile(grid);
  v.values.head(n) = sol;
  v.values[n] = 0.0;
  return v;
}

long IterationTrace::total_violations() const {
  long t = 0;
  for (long c : monotone_violations) t += c;
  return t;
}

namespace {

EquilibriumProfile finish_profile(Profile1D phi, const PhysParams& params,
                                  long iterations, std::string method) {
  EquilibriumProfile out;
  out.energy = energy(phi, params);
  out.bvp_residual = bvp_residual(phi, params);
  out.profile = std::move(phi);
  out.iterations = iterations;
  out.method = std::move(method);
  return out;
}

}  // namespace

std::pair<EquilibriumProfile, IterationTrace> monotone_iterate(
    const PhysParams& params, const Grid& grid, double tol,
    const EquilibriumOptions& opts) {
  IterationTrace trace;
  Profile1D v = make_profile(grid);
  v.values.setConstant(std::numbers::pi / 2.0);

  bool reached_tol = false;
  long converged_at = 0;
  for (long k = 0; k < opts.max_iterations; ++k) {
    Profile1D next = apply_L(v, params, grid);
    const double sup_delta = (next.values - v.values).abs().maxCoeff();
    long violations = 0;
    for (Eigen::Index j = 0; j < next.values.size(); ++j)
      if (next.values[j] > v.values[j] + 1e-12) ++violations;
    trace.sup_deltas.push_back(sup_delta);
    trace.monotone_violations.push_back(violations);
    v = std::move(next);
    if (!reached_tol && sup_delta < tol) {
      reached_tol = true;
      converged_at = k + 1;
    }
    // a few extra sweeps squeeze the fixed-point error to rounding level
    if (reached_tol && (sup_delta < 5e-15 || k > converged_at + 60)) break;
  }
  if (!reached_tol)
    throw NoConvergence("monotone iteration did not reach tolerance",
                        opts.max_iterations);

  const double sup = v.values.abs().maxCoeff();
  if (sup < opts.zero_band_factor * tol) v.values.setZero();
  else if (v.values[0] <= opts.positive_band_factor * tol)
    throw AmbiguousLimit(
        "monotone limit is neither clearly zero nor clearly positive "
        "(thickness too close to the critical value for this tolerance)");
  return {finish_profile(std::move(v), params, converged_at,
                         "monotone-iteration"),
          std::move(trace)};
}

EquilibriumProfile gradient_descent_minimize(const Profile1D& phi0,
                                             const PhysParams& params,
                                             const Grid& grid, double tol,
                                             const EquilibriumOptions& opts) {
  check_profile(phi0, grid);
  const int n = grid.nn;
  const double dx = grid.dx_n;
  const double h2 = params.h * params.h;

  double tau = 0.4 * std::min(1.0, 1.0 / h2);
  auto make_solver = [&](double step) {
    // I + step * A0, A0 the linearization of the gradient at zero
    Eigen::ArrayXd lower = Eigen::ArrayXd::Zero(n);
    Eigen::ArrayXd diag(n), upper = Eigen::ArrayXd::Zero(n);
    diag[0] = 1.0 + step * (2.0 / dx) * (1.0 / dx - params.lh);
    upper[0] = -step * (2.0 / dx) * (1.0 / dx);
    for (int j = 1; j < n; ++j) {
      lower[j] = -step / (dx * dx);
      diag[j] = 1.0 + 2.0 * step / (dx * dx);
      if (j < n - 1) upper[j] = -step / (dx * dx);
    }
    return TridiagSolver(lower, diag, upper);
  };
  TridiagSolver solver = make_solver(tau);

  Profile1D phi = phi0;
  phi.values[n] = 0.0;
  double e_prev = energy(phi, params);
  for (long k = 0; k < opts.max_iterations; ++k) {
    // explicit remainder f with the stiff linear part kept implicit
    Eigen::ArrayXd rhs(n);
    for (int j = 1; j < n; ++j)
      rhs[j] = phi.values[j] + tau * 0.5 * h2 * std::sin(2.0 * phi.values[j]);
    // wall row: rhs = phi - tau*(gradient - A0*phi), the nonlinear remainder
    rhs[0] = phi.values[0] -
             tau * (energy_gradient(phi, params).values[0] -
                    ((2.0 / dx) * ((phi.values[0] - phi.values[1]) / dx -
                                   params.lh * phi.values[0])));
    Eigen::ArrayXd next = solver.solve(rhs);

    Profile1D cand = make_profile(grid);
    // projection onto the admissible cone [0, pi/2]: keeps the flow in
    // the region where the positive least-energy state is the unique
    // nontrivial attractor, instead of drifting to its mirror image
    cand.values.head(n) =
        next.min(std::numbers::pi / 2.0).max(0.0);
    const double e_cand = energy(cand, params);
    if (e_cand > e_prev + 1e-14 * (1.0 + std::abs(e_prev)) && tau > 1e-6) {
      tau *= 0.5;
      solver = make_solver(tau);
      continue;
    }
    phi = std::move(cand);
    e_prev = e_cand;
    const double gnorm =
        energy_gradient(phi, params).values.abs().maxCoeff();
    if (gnorm < tol)
      return finish_profile(std::move(phi), params, k + 1, "gradient-descent");
  }
  throw NoConvergence("gradient descent did not reach tolerance",
                      opts.max_iterations);
}

}  // namespace phan
