#include "phan/profile.hpp"

#include <algorithm>
#include <cmath>

#include "phan/errors.hpp"

namespace phan {

Profile1D make_profile(const Grid& grid) {
  return Profile1D{grid, Eigen::ArrayXd::Zero(grid.nn + 1)};
}

Profile1D make_profile(const Grid& grid, const Eigen::ArrayXd& values) {
  if (values.size() != grid.nn + 1)
    throw GridMismatch("profile has " + std::to_string(values.size()) +
                       " nodes, grid expects " + std::to_string(grid.nn + 1));
  return Profile1D{grid, values};
}

Eigen::ArrayXd trapezoid_weights(const Grid& grid) {
  Eigen::ArrayXd w = Eigen::ArrayXd::Constant(grid.nn + 1, grid.dx_n);
  w[0] *= 0.5;
  w[grid.nn] *= 0.5;
  return w;
}

double l2_norm(const Profile1D& p) {
  const Eigen::ArrayXd w = trapezoid_weights(p.grid);
  return std::sqrt((w * p.values.square()).sum());
}

double h1_norm(const Profile1D& p) {
  const int n = p.grid.nn;
  const double dx = p.dx();
  double grad2 = 0.0;
  for (int j = 0; j < n; ++j) {
    const double g = (p.values[j + 1] - p.values[j]) / dx;
    grad2 += g * g * dx;
  }
  const double l2 = l2_norm(p);
  return std::sqrt(grad2 + l2 * l2);
}

double interpolate(const Profile1D& p, double x3) {
  const double dx = p.dx();
  const double s = std::clamp(x3 / dx, 0.0, static_cast<double>(p.grid.nn));
  const int j = std::min(static_cast<int>(s), p.grid.nn - 1);
  const double t = s - j;
  return (1.0 - t) * p.values[j] + t * p.values[j + 1];
}

}  // namespace phan
