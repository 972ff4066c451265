#pragma once

#include <cmath>

#include "phan/errors.hpp"

namespace phan {

// Dimensionless physical triple of the film problem: magnetic field
// strength h, weak-anchoring strength L_H on the lower substrate, and
// film thickness d. The critical thickness d_c = arctan(h/L_H)/h is
// derived on construction and always lies in (0, pi/(2h)).
struct PhysParams {
  double h;
  double lh;
  double d;
  double d_c;

  PhysParams with_thickness(double new_d) const;
};

PhysParams validate_params(double h, double lh, double d);

inline double critical_thickness(double h, double lh) {
  return std::atan(h / lh) / h;
}

}  // namespace phan
