#include "phan/params.hpp"

namespace phan {

PhysParams validate_params(double h, double lh, double d) {
  if (!(h > 0.0)) throw NonPositiveParameter("h");
  if (!(lh > 0.0)) throw NonPositiveParameter("lh");
  if (!(d > 0.0)) throw NonPositiveParameter("d");
  return PhysParams{h, lh, d, critical_thickness(h, lh)};
}

PhysParams PhysParams::with_thickness(double new_d) const {
  return validate_params(h, lh, new_d);
}

}  // namespace phan
