#include "phan/fields.hpp"

#include "phan/errors.hpp"

namespace phan {

AngleField make_angle_field(const Grid& grid, double lh) {
  return AngleField{grid, Tensor3(grid.n1(), grid.n2(), grid.nn + 1), lh};
}

VelocityField make_velocity_field(const Grid& grid) {
  return VelocityField{grid, Tensor3(grid.n1(), grid.n2(), grid.nn),
                       Tensor3(grid.n1(), grid.n2(), grid.nn),
                       Tensor3(grid.n1(), grid.n2(), grid.nn + 1)};
}

PressureField make_pressure_field(const Grid& grid) {
  return PressureField{grid, Tensor3(grid.n1(), grid.n2(), grid.nn), true};
}

namespace {
inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }
}  // namespace

AngleGradient discrete_gradient(const AngleField& field) {
  const Grid& g = field.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  AngleGradient out{Tensor3(n1, n2, nn + 1), Tensor3(n1, n2, nn + 1),
                    Tensor3(n1, n2, nn)};
  const double idt = 1.0 / g.dx_t, idn = 1.0 / g.dx_n;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k <= nn; ++k) {
        out.g1(i, j, k) =
            (field.values(i, j, k) - field.values(wrap(i - 1, n1), j, k)) * idt;
        out.g2(i, j, k) =
            (field.values(i, j, k) - field.values(i, wrap(j - 1, n2), k)) * idt;
      }
      for (int k = 0; k < nn; ++k)
        out.g3(i, j, k) =
            (field.values(i, j, k + 1) - field.values(i, j, k)) * idn;
    }
  if (n1 == 1) out.g1.setZero();
  if (n2 == 1) out.g2.setZero();
  return out;
}

Tensor3 discrete_divergence(const VelocityField& u) {
  const Grid& g = u.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  Tensor3 div(n1, n2, nn);
  const double idt = 1.0 / g.dx_t, idn = 1.0 / g.dx_n;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 0; k < nn; ++k) {
        double v = (u.u3(i, j, k + 1) - u.u3(i, j, k)) * idn;
        if (n1 > 1) v += (u.u1(wrap(i + 1, n1), j, k) - u.u1(i, j, k)) * idt;
        if (n2 > 1) v += (u.u2(i, wrap(j + 1, n2), k) - u.u2(i, j, k)) * idt;
        div(i, j, k) = v;
      }
  return div;
}

VelocityField cell_gradient(const PressureField& p) {
  const Grid& g = p.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  VelocityField out = make_velocity_field(g);
  const double idt = 1.0 / g.dx_t, idn = 1.0 / g.dx_n;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k < nn; ++k) {
        if (n1 > 1)
          out.u1(i, j, k) =
              (p.values(i, j, k) - p.values(wrap(i - 1, n1), j, k)) * idt;
        if (n2 > 1)
          out.u2(i, j, k) =
              (p.values(i, j, k) - p.values(i, wrap(j - 1, n2), k)) * idt;
      }
      // zero flux through the walls: u3 at k=0 and k=nn stays 0
      for (int k = 1; k < nn; ++k)
        out.u3(i, j, k) =
            (p.values(i, j, k) - p.values(i, j, k - 1)) * idn;
    }
  return out;
}

Tensor3 cell_laplacian(const PressureField& p) {
  return discrete_divergence(cell_gradient(p));
}

double angle_node_weight(const Grid& grid, int k) {
  double tangential = 1.0;
  for (int a = 1; a < grid.dim; ++a) tangential *= grid.dx_t;
  const double wz =
      (k == 0 || k == grid.nn) ? 0.5 * grid.dx_n : grid.dx_n;
  return tangential * wz;
}

AngleField extend_to_slab(const EquilibriumProfile& phi1d, const Grid& grid3) {
  const Grid& g1 = phi1d.profile.grid;
  if (!grid3.same_slab(g1))
    throw GridMismatch("slab grid does not share the normal discretization "
                       "of the 1D profile");
  AngleField out = make_angle_field(grid3, 0.0);
  for (int i = 0; i < grid3.n1(); ++i)
    for (int j = 0; j < grid3.n2(); ++j)
      for (int k = 0; k <= grid3.nn; ++k)
        out.values(i, j, k) = phi1d.profile.values[k];
  return out;
}

Profile1D tangential_average(const AngleField& phi) {
  const Grid& g = phi.grid;
  Profile1D out = make_profile(g);
  const double inv = 1.0 / (g.n1() * g.n2());
  for (int k = 0; k <= g.nn; ++k) {
    double s = 0.0;
    for (int i = 0; i < g.n1(); ++i)
      for (int j = 0; j < g.n2(); ++j) s += phi.values(i, j, k);
    out.values[k] = s * inv;
  }
  return out;
}

}  // namespace phan
