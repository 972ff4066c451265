#pragma once

#include <Eigen/Dense>
#include <string>

#include "phan/grid.hpp"

namespace phan {

// Nodal profile across the film: values at x3 = j*dx, j = 0..nn, with
// the top wall value values[nn] pinned to the Dirichlet datum 0 by all
// solvers that produce profiles.
struct Profile1D {
  Grid grid;
  Eigen::ArrayXd values;  // size grid.nn + 1

  int nodes() const { return static_cast<int>(values.size()); }
  double dx() const { return grid.dx_n; }
  double wall_value() const { return values[0]; }
};

Profile1D make_profile(const Grid& grid);
Profile1D make_profile(const Grid& grid, const Eigen::ArrayXd& values);

// Trapezoid node weights (dx/2 at the two walls, dx inside).
Eigen::ArrayXd trapezoid_weights(const Grid& grid);

double l2_norm(const Profile1D& p);
double h1_norm(const Profile1D& p);

// Linear interpolation at an arbitrary height in [0, d].
double interpolate(const Profile1D& p, double x3);

struct EquilibriumProfile {
  Profile1D profile;
  double energy = 0.0;
  double bvp_residual = 0.0;
  long iterations = 0;
  std::string method;  // "monotone-iteration" | "gradient-descent"
};

}  // namespace phan
