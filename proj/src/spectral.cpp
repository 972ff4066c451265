#include "phan/spectral.hpp"

#include <cmath>
#include <numbers>

#include "phan/equilibrium.hpp"
#include "phan/errors.hpp"
#include "phan/tridiag.hpp"

namespace phan {

namespace {

double transcendental(double x, const PhysParams& p) {
  return x * std::tan(p.h * x * p.d) - p.h / p.lh;
}

// generalized symmetric eigenproblem A x = mu B x, A tridiagonal and
// B diagonal positive; shifted inverse iteration for the smallest mu
struct SmallestEig {
  double value;
  Eigen::ArrayXd vector;  // B-normalized
  int iterations;
};

SmallestEig smallest_generalized(const Eigen::ArrayXd& lower,
                                 const Eigen::ArrayXd& diag,
                                 const Eigen::ArrayXd& upper,
                                 const Eigen::ArrayXd& bdiag, double shift,
                                 const SpectralTols& tols) {
  const Eigen::Index n = diag.size();
  TridiagSolver solver(lower, diag - shift * bdiag, upper);
  Eigen::ArrayXd x = Eigen::ArrayXd::Constant(n, 1.0);
  x /= std::sqrt((bdiag * x.square()).sum());
  double mu = 0.0, mu_prev = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < tols.max_iterations; ++it) {
    Eigen::ArrayXd y = solver.solve(bdiag * x);
    y /= std::sqrt((bdiag * y.square()).sum());
    // Rayleigh quotient of the tridiagonal form against B
    double quad = (diag * y.square()).sum();
    for (Eigen::Index i = 1; i < n; ++i) quad += 2.0 * lower[i] * y[i] * y[i - 1];
    mu = quad;  // y is B-normalized
    x = y;
    if (std::abs(mu - mu_prev) < tols.eigen_tol * (1.0 + std::abs(mu))) break;
    mu_prev = mu;
  }
  if (it >= tols.max_iterations)
    throw NoConvergence("inverse iteration did not settle",
                        tols.max_iterations);
  // fix the sign so the principal eigenfunction is nonnegative
  Eigen::Index imax;
  x.abs().maxCoeff(&imax);
  if (x[imax] < 0.0) x = -x;
  return SmallestEig{mu, x, it + 1};
}

}  // namespace

EigenResult solve_lambda1(const PhysParams& params, const SpectralTols& tols) {
  const double upper_edge = std::numbers::pi / (2.0 * params.h * params.d);
  const double eps = 1e-9 * upper_edge;
  double lo = eps, hi = upper_edge - eps;
  double flo = transcendental(lo, params), fhi = transcendental(hi, params);
  if (!(flo < 0.0) || !(fhi > 0.0))
    throw BracketFailure("x*tan(h*x*d) - h/L_H does not change sign on the "
                         "shrunken bracket");
  int it = 0;
  while (hi - lo > 1e-14 * upper_edge && it < 200) {
    const double mid = 0.5 * (lo + hi);
    const double fmid = transcendental(mid, params);
    if (fmid < 0.0) lo = mid; else hi = mid;
    ++it;
  }
  double x = 0.5 * (lo + hi);
  // one Newton polish restores the last bits lost to interval halving
  {
    const double t = std::tan(params.h * x * params.d);
    const double fp = t + x * params.h * params.d * (1.0 + t * t);
    const double f = x * t - params.h / params.lh;
    const double step = f / fp;
    if (std::isfinite(step) && x - step > lo - (hi - lo) &&
        x - step < hi + (hi - lo))
      x -= step;
  }
  // the root itself may fall between representable doubles; take the
  // neighbor with the smallest residual
  for (double cand : {lo, hi, std::nextafter(x, lo), std::nextafter(x, hi)}) {
    if (std::abs(transcendental(cand, params)) <
        std::abs(transcendental(x, params)))
      x = cand;
  }
  const double residual = std::abs(transcendental(x, params));
  // achievable accuracy is limited by the slope of the residual function
  // at the root: one ulp of x moves the residual by ~|f'(x)| * ulp(x)
  const double t = std::tan(params.h * x * params.d);
  const double slope = std::abs(t + x * params.h * params.d * (1.0 + t * t));
  const double floor =
      8.0 * std::numeric_limits<double>::epsilon() *
      (slope * std::abs(x) + params.h / params.lh);
  if (residual > std::max(tols.tol_root, floor))
    throw NoConvergence("root residual above tolerance", it);
  return EigenResult{x, residual, eps, upper_edge - eps, it};
}

std::vector<std::pair<double, double>> lambda1_curve(
    const PhysParams& params_base, const std::vector<double>& d_values,
    const SpectralTols& tols) {
  std::vector<std::pair<double, double>> out;
  out.reserve(d_values.size());
  for (double d : d_values) {
    const PhysParams p = params_base.with_thickness(d);
    out.emplace_back(d, solve_lambda1(p, tols).lambda1);
  }
  return out;
}

double rayleigh_quotient(const Profile1D& phi, const PhysParams& params) {
  const int n = phi.grid.nn;
  const double dx = phi.dx();
  double num = 0.0;
  for (int j = 0; j < n; ++j) {
    const double gp = (phi.values[j + 1] - phi.values[j]) / dx;
    num += gp * gp * dx;
  }
  const Eigen::ArrayXd w = trapezoid_weights(phi.grid);
  const double denom = params.h * params.h * (w * phi.values.square()).sum() +
                       params.lh * phi.values[0] * phi.values[0];
  if (denom == 0.0)
    throw ZeroDenominator("rayleigh_quotient of the zero profile");
  return num / denom;
}

namespace {

// Tridiagonal form of the second variation at a profile phi (phi = 0
// gives the linearization at the trivial state): unknowns are the nodes
// 0..nn-1, the top node being Dirichlet.
//   quad(psi) = sum (Dpsi)^2/dx - h^2 sum w_j cos(2 phi_j) psi_j^2
//               - L_H cos(2 phi_0) psi_0^2
void hessian_form(const Profile1D& phi, const PhysParams& params,
                  Eigen::ArrayXd& lower, Eigen::ArrayXd& diag,
                  Eigen::ArrayXd& upper) {
  const int n = phi.grid.nn;
  const double dx = phi.dx();
  const double h2 = params.h * params.h;
  const Eigen::ArrayXd w = trapezoid_weights(phi.grid);
  lower = Eigen::ArrayXd::Zero(n);
  diag.resize(n);
  upper = Eigen::ArrayXd::Zero(n);
  diag[0] = 1.0 / dx - h2 * w[0] * std::cos(2.0 * phi.values[0]) -
            params.lh * std::cos(2.0 * phi.values[0]);
  upper[0] = -1.0 / dx;
  for (int j = 1; j < n; ++j) {
    lower[j] = -1.0 / dx;
    diag[j] = 2.0 / dx - h2 * w[j] * std::cos(2.0 * phi.values[j]);
    if (j < n - 1) upper[j] = -1.0 / dx;
  }
}

Profile1D pad_eigenfunction(const Grid& grid, const Eigen::ArrayXd& x) {
  Profile1D f = make_profile(grid);
  f.values.head(grid.nn) = x;
  f.values[grid.nn] = 0.0;
  return f;
}

}  // namespace

StabilityResult linearized_spectrum_at_zero(const PhysParams& params,
                                            const Grid& grid,
                                            const SpectralTols& tols) {
  Profile1D zero = make_profile(grid);
  Eigen::ArrayXd lower, diag, upper;
  hessian_form(zero, params, lower, diag, upper);
  const Eigen::ArrayXd w = trapezoid_weights(grid);
  const Eigen::ArrayXd bdiag = w.head(grid.nn);  // L2 mass
  const double shift =
      -10.0 * (params.h * params.h + params.lh / params.d) - 1.0;
  SmallestEig eig =
      smallest_generalized(lower, diag, upper, bdiag, shift, tols);
  StabilityResult out;
  out.nu1 = eig.value;
  out.eigenfunction = pad_eigenfunction(grid, eig.vector);
  out.method = "shifted-inverse-iteration";
  out.tol = tols.eigen_tol;
  out.iterations = eig.iterations;
  return out;
}

StabilityResult principal_eigenvalue_mu1(const Profile1D& phi_eq,
                                         const PhysParams& params,
                                         const Grid& grid,
                                         const SpectralTols& tols,
                                         double tol_eq) {
  if (phi_eq.values.size() != grid.nn + 1)
    throw GridMismatch("equilibrium profile does not match the grid");
  const double res = bvp_residual(phi_eq, params);
  if (res > tol_eq)
    throw ResidualTooLarge("profile is not an equilibrium: bvp residual " +
                           std::to_string(res));
  Eigen::ArrayXd lower, diag, upper;
  hessian_form(phi_eq, params, lower, diag, upper);
  const Eigen::ArrayXd w = trapezoid_weights(grid);
  Eigen::ArrayXd bdiag = params.h * params.h * w.head(grid.nn);
  bdiag[0] += params.lh;  // weighted metric h^2|psi|^2 + L_H psi(0)^2
  const double shift =
      -10.0 * (params.h * params.h + params.lh / params.d) - 1.0;
  SmallestEig eig =
      smallest_generalized(lower, diag, upper, bdiag, shift, tols);
  StabilityResult out;
  out.mu1 = eig.value;
  out.eigenfunction = pad_eigenfunction(grid, eig.vector);
  out.method = "shifted-inverse-iteration";
  out.tol = tols.eigen_tol;
  out.iterations = eig.iterations;
  return out;
}

}  // namespace phan
