#pragma once

#include <utility>
#include <vector>

#include "phan/profile.hpp"

namespace phan {

// Root of the transcendental relation lambda * tan(h*lambda*d) = h/L_H,
// the square root of the Rayleigh-quotient infimum. lambda1 = 1 exactly
// at d = d_c, and lambda1(d) is strictly decreasing.
struct EigenResult {
  double lambda1;
  double residual;  // |lambda1 * tan(h*lambda1*d) - h/L_H|
  double bracket_lo;
  double bracket_hi;
  int iterations;
};

struct SpectralTols {
  double tol_root = 1e-12;
  double eigen_tol = 1e-10;
  int max_iterations = 10000;
};

EigenResult solve_lambda1(const PhysParams& params,
                          const SpectralTols& tols = {});

std::vector<std::pair<double, double>> lambda1_curve(
    const PhysParams& params_base, const std::vector<double>& d_values,
    const SpectralTols& tols = {});

// Discrete Rayleigh quotient of a nodal profile with phi(d) = 0:
//   integral(phi'^2) / (h^2 integral(phi^2) + L_H phi(0)^2).
double rayleigh_quotient(const Profile1D& phi, const PhysParams& params);

struct StabilityResult {
  double mu1 = 0.0;  // principal eigenvalue of E'' in the weighted metric
  double nu1 = 0.0;  // smallest eigenvalue of the linearization at zero
  Profile1D eigenfunction;
  std::string method;
  double tol = 0.0;
  int iterations = 0;
};

// Smallest eigenvalue of -d^2/dx^2 - h^2 with psi(d) = 0 and the
// linearized weak-anchoring condition psi'(0) = -L_H psi(0), as a
// standard generalized eigenproblem against the trapezoid mass.
// sign(nu1) = sign(d_c - d) away from the threshold.
StabilityResult linearized_spectrum_at_zero(const PhysParams& params,
                                            const Grid& grid,
                                            const SpectralTols& tols = {});

// Principal eigenvalue of the second variation of the energy at an
// equilibrium profile, normalized against h^2 |psi|^2 + L_H psi(0)^2.
StabilityResult principal_eigenvalue_mu1(const Profile1D& phi_eq,
                                         const PhysParams& params,
                                         const Grid& grid,
                                         const SpectralTols& tols = {},
                                         double tol_eq = 1e-6);

}  // namespace phan
