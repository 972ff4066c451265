#pragma once

#include <utility>
#include <vector>

#include "phan/fields.hpp"
#include "phan/profile.hpp"

namespace phan {

// Film energy of a nodal profile with phi(d) = 0:
//   int_0^d [ phi'^2/2 + (h^2/4)(cos 2phi + 1) ] + (L_H/4)(cos 2phi(0) + 1),
// with the trapezoid quadrature matched to the difference stencils so
// that energy_gradient is exactly the derivative of this discrete sum.
double energy(const Profile1D& phi, const PhysParams& params);

// L2-scaled variational derivative of the discrete energy. Interior
// entries read -phi'' - (h^2/2) sin 2phi; the wall entry carries the
// natural-boundary defect of the weak-anchoring condition; the top entry
// is zero (Dirichlet node).
Profile1D energy_gradient(const Profile1D& phi, const PhysParams& params);

// Defect of the stationary sine-Gordon problem: max interior PDE
// residual plus the two boundary defects.
double bvp_residual(const Profile1D& phi, const PhysParams& params);

// Monotone-iteration map: v solves
//   (h^-2 Lap - 1) v = -g(u),  v(d) = 0,  (-L_H^-1 d3 + 1) v = g(u) at 0,
// with g(u) = u + sin(2u)/2. Inverse-positive tridiagonal system, one
// factorization per call.
Profile1D apply_L(const Profile1D& u, const PhysParams& params,
                  const Grid& grid);

struct IterationTrace {
  std::vector<double> sup_deltas;
  std::vector<long> monotone_violations;  // per step, with 1e-12 slack
  long total_violations() const;
};

struct EquilibriumOptions {
  long max_iterations = 100000;
  // classification dead-band around the degenerate bifurcation
  double zero_band_factor = 100.0;
  double positive_band_factor = 1000.0;
};

// Decreasing iteration v_0 = pi/2, v_{k+1} = L v_k, run to
// sup|v_{k+1} - v_k| < tol. The limit is the trivial state for
// d <= d_c and the unique positive least-energy profile for d > d_c.
std::pair<EquilibriumProfile, IterationTrace> monotone_iterate(
    const PhysParams& params, const Grid& grid, double tol,
    const EquilibriumOptions& opts = {});

// Semi-implicit gradient flow of the energy from an arbitrary seed with
// phi0(d) = 0; stops when the energy gradient max-norm drops below tol.
EquilibriumProfile gradient_descent_minimize(const Profile1D& phi0,
                                             const PhysParams& params,
                                             const Grid& grid, double tol,
                                             const EquilibriumOptions& opts = {});

}  // namespace phan
