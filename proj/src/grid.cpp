#include "phan/grid.hpp"

#include <string>

namespace phan {

Grid make_grid(const PhysParams& params, int dim, int n_tangential,
               int n_normal) {
  if (dim < 1 || dim > 3)
    throw GridTooCoarse("dim must be 1, 2, or 3, got " + std::to_string(dim));
  if (n_normal < 4)
    throw GridTooCoarse("n_normal must be >= 4, got " +
                        std::to_string(n_normal));
  if (dim > 1 && n_tangential < 4)
    throw GridTooCoarse("n_tangential must be >= 4 for dim > 1, got " +
                        std::to_string(n_tangential));
  const int nt = dim > 1 ? n_tangential : 1;
  return Grid{dim,
              nt,
              n_normal,
              params.d,
              1.0 / nt,
              params.d / n_normal};
}

Grid make_grid_1d(const PhysParams& params, int n_normal) {
  return make_grid(params, 1, 1, n_normal);
}

}  // namespace phan
