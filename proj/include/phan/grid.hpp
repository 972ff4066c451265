#pragma once

#include <array>

#include "phan/errors.hpp"
#include "phan/params.hpp"

namespace phan {

// Staggered (MAC) slab discretization of T^{n-1} x (0, d). Tangential
// directions are unit tori split into n_tangential cells each; the
// normal direction is split into n_normal cells of spacing d/n_normal.
//
// Layout:
//   - pressure and other cell scalars: cell centers,
//   - velocity components: face centers of their own axis,
//   - the director angle: tangential cell centers but normal *nodes*
//     (j = 0..n_normal), so both wall values are carried exactly.
struct Grid {
  int dim;        // 1, 2, or 3
  int nt;         // cells per tangential axis (1 for the collapsed axes)
  int nn;         // cells across (0, d)
  double d;       // normal extent
  double dx_t;    // tangential spacing, 1/nt
  double dx_n;    // normal spacing, d/nn

  // tangential cell counts per axis; collapsed axes have a single cell
  int n1() const { return dim >= 2 ? nt : 1; }
  int n2() const { return dim >= 3 ? nt : 1; }

  int normal_nodes() const { return nn + 1; }

  double x_normal_node(int j) const { return dx_n * j; }
  double x_normal_center(int j) const { return dx_n * (j + 0.5); }

  bool same_slab(const Grid& o) const {
    return nn == o.nn && d == o.d;
  }
};

Grid make_grid(const PhysParams& params, int dim, int n_tangential,
               int n_normal);

// 1D convenience: nodal grid across (0, d) only.
Grid make_grid_1d(const PhysParams& params, int n_normal);

}  // namespace phan
