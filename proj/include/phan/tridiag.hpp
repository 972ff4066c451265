#pragma once

#include <Eigen/Dense>

#include "phan/errors.hpp"

namespace phan {

// Thomas elimination for a tridiagonal system
//   lower[i] x[i-1] + diag[i] x[i] + upper[i] x[i+1] = rhs[i].
// lower[0] and upper[n-1] are ignored. Throws SingularSystem on a
// vanishing pivot.
class TridiagSolver {
 public:
  TridiagSolver() = default;
  TridiagSolver(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
                const Eigen::ArrayXd& upper);

  void compute(const Eigen::ArrayXd& lower, const Eigen::ArrayXd& diag,
               const Eigen::ArrayXd& upper);

  Eigen::ArrayXd solve(const Eigen::ArrayXd& rhs) const;
  void solve_in_place(Eigen::ArrayXd& rhs) const;

  Eigen::Index size() const { return diag_.size(); }

 private:
  Eigen::ArrayXd lower_, diag_, upper_;  // factored form
};

}  // namespace phan
