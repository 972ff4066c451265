#include "phan/tridiag.hpp"

#include <cmath>

namespace phan {

TridiagSolver::TridiagSolver(const Eigen::ArrayXd& lower,
                             const Eigen::ArrayXd& diag,
                             const Eigen::ArrayXd& upper) {
  compute(lower, diag, upper);
}

void TridiagSolver::compute(const Eigen::ArrayXd& lower,
                            const Eigen::ArrayXd& diag,
                            const Eigen::ArrayXd& upper) {
  const Eigen::Index n = diag.size();
  lower_ = lower;
  diag_ = diag;
  upper_ = upper;
  // forward elimination factors stored in place: diag_ holds the pivots,
  // lower_ holds the multipliers
  for (Eigen::Index i = 1; i < n; ++i) {
    if (diag_[i - 1] == 0.0 || !std::isfinite(diag_[i - 1]))
      throw SingularSystem("tridiagonal pivot vanished at row " +
                           std::to_string(i - 1));
    const double m = lower_[i] / diag_[i - 1];
    lower_[i] = m;
    diag_[i] -= m * upper_[i - 1];
  }
  if (n > 0 && (diag_[n - 1] == 0.0 || !std::isfinite(diag_[n - 1])))
    throw SingularSystem("tridiagonal pivot vanished at last row");
}

void TridiagSolver::solve_in_place(Eigen::ArrayXd& rhs) const {
  const Eigen::Index n = diag_.size();
  for (Eigen::Index i = 1; i < n; ++i) rhs[i] -= lower_[i] * rhs[i - 1];
  rhs[n - 1] /= diag_[n - 1];
  for (Eigen::Index i = n - 2; i >= 0; --i)
    rhs[i] = (rhs[i] - upper_[i] * rhs[i + 1]) / diag_[i];
}

Eigen::ArrayXd TridiagSolver::solve(const Eigen::ArrayXd& rhs) const {
  Eigen::ArrayXd x = rhs;
  solve_in_place(x);
  return x;
}

}  // namespace phan
