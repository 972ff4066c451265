#pragma once

#include <Eigen/Dense>
#include <array>

#include "phan/grid.hpp"
#include "phan/profile.hpp"

namespace phan {

// Dense rank-3 array with the normal axis contiguous (fastest), so that
// per-column tridiagonal sweeps stream through memory.
class Tensor3 {
 public:
  Tensor3() : n1_(0), n2_(0), n3_(0) {}
  Tensor3(int n1, int n2, int n3)
      : n1_(n1), n2_(n2), n3_(n3), data_(Eigen::ArrayXd::Zero(
                                        static_cast<Eigen::Index>(n1) * n2 * n3)) {}

  int n1() const { return n1_; }
  int n2() const { return n2_; }
  int n3() const { return n3_; }

  double& operator()(int i, int j, int k) {
    return data_[(static_cast<Eigen::Index>(i) * n2_ + j) * n3_ + k];
  }
  double operator()(int i, int j, int k) const {
    return data_[(static_cast<Eigen::Index>(i) * n2_ + j) * n3_ + k];
  }

  Eigen::ArrayXd& flat() { return data_; }
  const Eigen::ArrayXd& flat() const { return data_; }

  void setZero() { data_.setZero(); }

 private:
  int n1_, n2_, n3_;
  Eigen::ArrayXd data_;
};

// Director angle on the slab: tangential cell centers, normal *nodes*
// (k = 0..nn). The top wall row carries the Dirichlet value 0; the
// bottom wall row is evolved with the weak-anchoring (Rapini-Papoular)
// condition of coefficient lh.
struct AngleField {
  Grid grid;
  Tensor3 values;  // (n1, n2, nn+1)
  double lh;       // anchoring coefficient at x3 = 0
};

// MAC velocity: tangential components at their own face centers and
// normal cell centers; the normal component at cell centers tangentially
// and normal nodes, with both wall rows identically zero (no-slip).
struct VelocityField {
  Grid grid;
  Tensor3 u1;  // (n1, n2, nn)   x1-faces
  Tensor3 u2;  // (n1, n2, nn)   x2-faces
  Tensor3 u3;  // (n1, n2, nn+1) normal nodes
};

struct PressureField {
  Grid grid;
  Tensor3 values;  // (n1, n2, nn) cell centers
  bool zero_mean_gauge = true;
};

AngleField make_angle_field(const Grid& grid, double lh);
VelocityField make_velocity_field(const Grid& grid);
PressureField make_pressure_field(const Grid& grid);

// Per-axis gradient of the angle field. Tangential entries live at the
// tangential faces of the angle points, the normal entry at normal cell
// centers; all are interior to the slab, so no ghost data is involved.
struct AngleGradient {
  Tensor3 g1;  // (n1, n2, nn+1)
  Tensor3 g2;  // (n1, n2, nn+1)
  Tensor3 g3;  // (n1, n2, nn)
};

AngleGradient discrete_gradient(const AngleField& field);

// MAC-consistent divergence at cell centers.
Tensor3 discrete_divergence(const VelocityField& u);

// Face gradient of a cell-centered scalar (periodic tangentially, zero
// normal flux through the walls), and its divergence: the composition is
// the cell Laplacian used by the pressure solve.
VelocityField cell_gradient(const PressureField& p);
Tensor3 cell_laplacian(const PressureField& p);

// Quadrature weight of the angle node at normal index k (trapezoid in
// the normal direction, uniform tangentially).
double angle_node_weight(const Grid& grid, int k);

// Tangentially constant angle field built from a nodal profile on a grid
// sharing the normal discretization; the slab residual of the result
// coincides with the 1D residual.
AngleField extend_to_slab(const EquilibriumProfile& phi1d, const Grid& grid3);

// Extracts the tangential average as a nodal profile.
Profile1D tangential_average(const AngleField& phi);

}  // namespace phan
