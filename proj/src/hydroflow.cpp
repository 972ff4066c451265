#include "phan/hydroflow.hpp"

#include <cmath>
#include <numbers>

#include "phan/tridiag.hpp"

namespace phan {

namespace {

inline int wrap(int i, int n) { return i >= n ? i - n : (i < 0 ? i + n : i); }

inline double tangential_area(const Grid& g) {
  double a = 1.0;
  for (int ax = 1; ax < g.dim; ++ax) a *= g.dx_t;
  return a;
}

inline double trap(const Grid& g, int k) {
  return (k == 0 || k == g.nn) ? 0.5 * g.dx_n : g.dx_n;
}

// Orthonormal eigenbasis of the periodic tangential Laplacian (negated,
// so eigenvalues are >= 0): columns of q, eigenvalue sigma per column.
struct TangentialBasis {
  Eigen::MatrixXd q;
  Eigen::ArrayXd sigma;
};

TangentialBasis build_basis(int n, double dx) {
  TangentialBasis b;
  b.q = Eigen::MatrixXd::Zero(n, n);
  b.sigma = Eigen::ArrayXd::Zero(n);
  if (n == 1) {
    b.q(0, 0) = 1.0;
    return b;
  }
  const double two_pi = 2.0 * std::numbers::pi;
  int c = 0;
  b.q.col(c).setConstant(1.0 / std::sqrt(double(n)));
  b.sigma[c++] = 0.0;
  for (int m = 1; 2 * m < n; ++m) {
    const double ev = (2.0 - 2.0 * std::cos(two_pi * m / n)) / (dx * dx);
    const double scale = std::sqrt(2.0 / n);
    for (int i = 0; i < n; ++i) {
      b.q(i, c) = scale * std::cos(two_pi * m * i / n);
      b.q(i, c + 1) = scale * std::sin(two_pi * m * i / n);
    }
    b.sigma[c] = ev;
    b.sigma[c + 1] = ev;
    c += 2;
  }
  if (n % 2 == 0) {
    const double scale = 1.0 / std::sqrt(double(n));
    for (int i = 0; i < n; ++i) b.q(i, c) = (i % 2 == 0 ? scale : -scale);
    b.sigma[c] = 4.0 / (dx * dx);
  }
  return b;
}

using RowMat =
    Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

void transform_axis1(Tensor3& f, const Eigen::MatrixXd& m) {
  if (f.n1() == 1) return;
  Eigen::Map<RowMat> view(f.flat().data(), f.n1(),
                          static_cast<Eigen::Index>(f.n2()) * f.n3());
  view = (m * view).eval();
}

void transform_axis2(Tensor3& f, const Eigen::MatrixXd& m) {
  if (f.n2() == 1) return;
  for (int i = 0; i < f.n1(); ++i) {
    Eigen::Map<RowMat> view(f.flat().data() +
                                static_cast<Eigen::Index>(i) * f.n2() * f.n3(),
                            f.n2(), f.n3());
    view = (m * view).eval();
  }
}

// In place: rhs -> solution of (I + dt (N + sigma)) x = rhs per column,
// over normal indices [k0, k0 + m); entries outside stay untouched.
void helmholtz_solve(Tensor3& rhs, int k0, int m, const Eigen::ArrayXd& nl,
                     const Eigen::ArrayXd& nd, const Eigen::ArrayXd& nu,
                     double dt, const TangentialBasis& b1,
                     const TangentialBasis& b2) {
  transform_axis1(rhs, b1.q.transpose());
  transform_axis2(rhs, b2.q.transpose());
  Eigen::ArrayXd lower = dt * nl, upper = dt * nu;
  Eigen::ArrayXd col(m);
  for (int i = 0; i < rhs.n1(); ++i)
    for (int j = 0; j < rhs.n2(); ++j) {
      const double sigma = b1.sigma[i] + b2.sigma[j];
      Eigen::ArrayXd diag = 1.0 + dt * (nd + sigma);
      TridiagSolver solver(lower, diag, upper);
      for (int k = 0; k < m; ++k) col[k] = rhs(i, j, k0 + k);
      solver.solve_in_place(col);
      for (int k = 0; k < m; ++k) rhs(i, j, k0 + k) = col[k];
    }
  transform_axis1(rhs, b1.q);
  transform_axis2(rhs, b2.q);
}

// Defect of the stationary problem at every angle node: interior rows
// read Lap phi + (h^2/2) sin 2phi; the wall row carries the anchoring
// term through the half-cell quadrature weight; the top row is zero.
// This is minus the slab energy gradient in the node-weight metric.
Tensor3 angle_defect(const AngleField& phi, const PhysParams& params) {
  const Grid& g = phi.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  const double idn2 = 1.0 / (g.dx_n * g.dx_n);
  const double idt2 = 1.0 / (g.dx_t * g.dx_t);
  const double h2 = params.h * params.h;
  Tensor3 w(n1, n2, nn + 1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k < nn; ++k) {
        const double p0 = phi.values(i, j, k);
        double v = 0.5 * h2 * std::sin(2.0 * p0);
        if (k == 0) {
          v += 2.0 * idn2 * (phi.values(i, j, 1) - p0) +
               params.lh / g.dx_n * std::sin(2.0 * p0);
        } else {
          v += idn2 * (phi.values(i, j, k - 1) - 2.0 * p0 +
                       phi.values(i, j, k + 1));
        }
        if (n1 > 1)
          v += idt2 * (phi.values(wrap(i - 1, n1), j, k) - 2.0 * p0 +
                       phi.values(wrap(i + 1, n1), j, k));
        if (n2 > 1)
          v += idt2 * (phi.values(i, wrap(j - 1, n2), k) - 2.0 * p0 +
                       phi.values(i, wrap(j + 1, n2), k));
        w(i, j, k) = v;
      }
      w(i, j, nn) = 0.0;
    }
  return w;
}

// Transport u . grad phi at angle nodes; zero at both walls (no-slip).
// Tangential velocities are averaged to the nodes, the node gradient is
// the average of the two adjacent face / center differences, so the
// elastic force below is the exact negative transpose in the node
// weights.
Tensor3 transport(const VelocityField& u, const AngleField& phi,
                  const AngleGradient& grad) {
  const Grid& g = phi.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  Tensor3 t(n1, n2, nn + 1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j)
      for (int k = 1; k < nn; ++k) {
        double v = u.u3(i, j, k) * 0.5 *
                   (grad.g3(i, j, k - 1) + grad.g3(i, j, k));
        if (n1 > 1) {
          const int ip = wrap(i + 1, n1);
          const double ua = 0.5 * (u.u1(i, j, k - 1) + u.u1(i, j, k));
          const double ub = 0.5 * (u.u1(ip, j, k - 1) + u.u1(ip, j, k));
          v += 0.5 * (ua * grad.g1(i, j, k) + ub * grad.g1(ip, j, k));
        }
        if (n2 > 1) {
          const int jp = wrap(j + 1, n2);
          const double ua = 0.5 * (u.u2(i, j, k - 1) + u.u2(i, j, k));
          const double ub = 0.5 * (u.u2(i, jp, k - 1) + u.u2(i, jp, k));
          v += 0.5 * (ua * grad.g2(i, j, k) + ub * grad.g2(i, jp, k));
        }
        t(i, j, k) = v;
      }
  return t;
}

// Elastic force -w grad phi at the velocity points, built as the exact
// negative transpose of the transport form above:
//   sum_faces vol u . f = - sum_nodes weight w (u . grad phi).
VelocityField elastic_force(const AngleField& phi, const AngleGradient& grad,
                            const Tensor3& w) {
  const Grid& g = phi.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  VelocityField f = make_velocity_field(g);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      if (n1 > 1) {
        const int im = wrap(i - 1, n1);
        for (int kc = 0; kc < nn; ++kc) {
          double v = 0.0;
          for (int k = kc; k <= kc + 1; ++k)
            if (k >= 1 && k <= nn - 1)
              v += 0.25 * grad.g1(i, j, k) * (w(i, j, k) + w(im, j, k));
          f.u1(i, j, kc) = -v;
        }
      }
      if (n2 > 1) {
        const int jm = wrap(j - 1, n2);
        for (int kc = 0; kc < nn; ++kc) {
          double v = 0.0;
          for (int k = kc; k <= kc + 1; ++k)
            if (k >= 1 && k <= nn - 1)
              v += 0.25 * grad.g2(i, j, k) * (w(i, j, k) + w(i, jm, k));
          f.u2(i, j, kc) = -v;
        }
      }
      for (int k = 1; k < nn; ++k)
        f.u3(i, j, k) =
            -w(i, j, k) * 0.5 * (grad.g3(i, j, k - 1) + grad.g3(i, j, k));
    }
  return f;
}

// Skew-symmetric advection: each component is advected by the centered
// operator A_c v = sum_b (u_b averaged to the point) * centered diff of v,
// antisymmetrized as (A_c - A_c^T)/2 in the (uniformly weighted)
// per-component inner product, so sum_a <u_a, adv_a(u)> = 0 exactly and
// the kinetic energy budget carries no spurious advection term. The
// operator stays consistent with u . grad u whenever div u = 0. No-slip
// enters through ghost reflection (tangential components) and through
// the pinned zero wall rows of u3, whose scatter contributions are
// dropped.
VelocityField advection(const VelocityField& u) {
  const Grid& g = u.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  const double i4t = 0.25 / g.dx_t, i4n = 0.25 / g.dx_n;
  VelocityField a = make_velocity_field(g);

  // one directed stencil edge of the centered operator, halved:
  //   out(x) += c * (v(p) - v(m));  out(p) -= c * v(x);  out(m) += c * v(x)
  // where x, p, m index the same component's array. A negative sign on
  // p or m encodes a ghost folded back onto the boundary value.
  struct Leg {
    int i, j, k;
    double sign;
    bool dropped;
  };

  auto apply_edge = [](Tensor3& out, const Tensor3& v, int i, int j, int k,
                       double c, const Leg& p, const Leg& m) {
    const double vp = p.dropped ? 0.0 : p.sign * v(p.i, p.j, p.k);
    const double vm = m.dropped ? 0.0 : m.sign * v(m.i, m.j, m.k);
    out(i, j, k) += c * (vp - vm);
    const double vx = v(i, j, k);
    if (!p.dropped) out(p.i, p.j, p.k) -= c * p.sign * vx;
    if (!m.dropped) out(m.i, m.j, m.k) += c * m.sign * vx;
  };

  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      const int ip = wrap(i + 1, n1), im = wrap(i - 1, n1);
      const int jp = wrap(j + 1, n2), jm = wrap(j - 1, n2);
      // tangential ghosts across the walls reflect: v(-1) = -v(0)
      auto mirror = [&](int ii, int jj, int kc) {
        if (kc < 0) return Leg{ii, jj, 0, -1.0, false};
        if (kc >= nn) return Leg{ii, jj, nn - 1, -1.0, false};
        return Leg{ii, jj, kc, 1.0, false};
      };
      // u3 wall rows are pinned to zero and excluded from the budget
      auto node = [&](int ii, int jj, int k) {
        return Leg{ii, jj, k, 1.0, k <= 0 || k >= nn};
      };

      if (n1 > 1)
        for (int kc = 0; kc < nn; ++kc) {
          apply_edge(a.u1, u.u1, i, j, kc, u.u1(i, j, kc) * i4t,
                     {ip, j, kc, 1.0, false}, {im, j, kc, 1.0, false});
          if (n2 > 1) {
            const double u2bar = 0.25 * (u.u2(im, j, kc) + u.u2(i, j, kc) +
                                         u.u2(im, jp, kc) + u.u2(i, jp, kc));
            apply_edge(a.u1, u.u1, i, j, kc, u2bar * i4t,
                       {i, jp, kc, 1.0, false}, {i, jm, kc, 1.0, false});
          }
          const double u3bar = 0.25 * (u.u3(im, j, kc) + u.u3(i, j, kc) +
                                       u.u3(im, j, kc + 1) + u.u3(i, j, kc + 1));
          apply_edge(a.u1, u.u1, i, j, kc, u3bar * i4n, mirror(i, j, kc + 1),
                     mirror(i, j, kc - 1));
        }
      if (n2 > 1)
        for (int kc = 0; kc < nn; ++kc) {
          apply_edge(a.u2, u.u2, i, j, kc, u.u2(i, j, kc) * i4t,
                     {i, jp, kc, 1.0, false}, {i, jm, kc, 1.0, false});
          const double u1bar = 0.25 * (u.u1(i, jm, kc) + u.u1(i, j, kc) +
                                       u.u1(ip, jm, kc) + u.u1(ip, j, kc));
          apply_edge(a.u2, u.u2, i, j, kc, u1bar * i4t,
                     {ip, j, kc, 1.0, false}, {im, j, kc, 1.0, false});
          const double u3bar = 0.25 * (u.u3(i, jm, kc) + u.u3(i, j, kc) +
                                       u.u3(i, jm, kc + 1) + u.u3(i, j, kc + 1));
          apply_edge(a.u2, u.u2, i, j, kc, u3bar * i4n, mirror(i, j, kc + 1),
                     mirror(i, j, kc - 1));
        }
      for (int k = 1; k < nn; ++k) {
        apply_edge(a.u3, u.u3, i, j, k, u.u3(i, j, k) * i4n, node(i, j, k + 1),
                   node(i, j, k - 1));
        if (n1 > 1) {
          const double u1bar = 0.25 * (u.u1(i, j, k - 1) + u.u1(i, j, k) +
                                       u.u1(ip, j, k - 1) + u.u1(ip, j, k));
          apply_edge(a.u3, u.u3, i, j, k, u1bar * i4t,
                     {ip, j, k, 1.0, false}, {im, j, k, 1.0, false});
        }
        if (n2 > 1) {
          const double u2bar = 0.25 * (u.u2(i, j, k - 1) + u.u2(i, j, k) +
                                       u.u2(i, jp, k - 1) + u.u2(i, jp, k));
          apply_edge(a.u3, u.u3, i, j, k, u2bar * i4t,
                     {i, jp, k, 1.0, false}, {i, jm, k, 1.0, false});
        }
      }
    }
  // the wall rows of u3 may have accumulated scatter; they are pinned
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      a.u3(i, j, 0) = 0.0;
      a.u3(i, j, nn) = 0.0;
    }
  return a;
}

struct NormalOperator {
  Eigen::ArrayXd lower, diag, upper;
};

// Tangential-component viscous operator on normal cell centers with
// no-slip ghost reflection at both walls.
NormalOperator center_viscous(const Grid& g) {
  const int n = g.nn;
  const double id2 = 1.0 / (g.dx_n * g.dx_n);
  NormalOperator op{Eigen::ArrayXd::Constant(n, -id2),
                    Eigen::ArrayXd::Constant(n, 2.0 * id2),
                    Eigen::ArrayXd::Constant(n, -id2)};
  op.diag[0] = op.diag[n - 1] = 3.0 * id2;
  op.lower[0] = op.upper[n - 1] = 0.0;
  return op;
}

// Normal-component viscous operator on the interior normal nodes with
// Dirichlet walls.
NormalOperator node_viscous(const Grid& g) {
  const int n = g.nn - 1;
  const double id2 = 1.0 / (g.dx_n * g.dx_n);
  NormalOperator op{Eigen::ArrayXd::Constant(n, -id2),
                    Eigen::ArrayXd::Constant(n, 2.0 * id2),
                    Eigen::ArrayXd::Constant(n, -id2)};
  op.lower[0] = op.upper[n - 1] = 0.0;
  return op;
}

// Angle diffusion operator on nodes 0..nn-1 (top node Dirichlet); the
// wall row also carries the implicit linear part of the anchoring term.
NormalOperator angle_operator(const Grid& g, const PhysParams& params) {
  const int n = g.nn;
  const double id2 = 1.0 / (g.dx_n * g.dx_n);
  NormalOperator op{Eigen::ArrayXd::Constant(n, -id2),
                    Eigen::ArrayXd::Constant(n, 2.0 * id2),
                    Eigen::ArrayXd::Constant(n, -id2)};
  op.diag[0] = 2.0 * id2 - 2.0 * params.lh / g.dx_n;
  op.upper[0] = -2.0 * id2;
  op.lower[0] = 0.0;
  op.upper[n - 1] = 0.0;
  return op;
}

struct BasisPair {
  TangentialBasis b1, b2;
};

BasisPair bases_for(const Grid& g) {
  return BasisPair{build_basis(g.n1(), g.dx_t), build_basis(g.n2(), g.dx_t)};
}

// Poisson solve -Lap chi = rhs on cell centers (wall Neumann, periodic
// tangentially); the zero mode is pinned and the result de-meaned.
Tensor3 poisson_cells(const Grid& g, Tensor3 rhs, const BasisPair& bp) {
  const int n = g.nn;
  const double id2 = 1.0 / (g.dx_n * g.dx_n);
  Eigen::ArrayXd nl = Eigen::ArrayXd::Constant(n, -id2);
  Eigen::ArrayXd nd = Eigen::ArrayXd::Constant(n, 2.0 * id2);
  Eigen::ArrayXd nu = Eigen::ArrayXd::Constant(n, -id2);
  nd[0] = nd[n - 1] = id2;
  nl[0] = nu[n - 1] = 0.0;
  transform_axis1(rhs, bp.b1.q.transpose());
  transform_axis2(rhs, bp.b2.q.transpose());
  Eigen::ArrayXd col(n);
  for (int i = 0; i < rhs.n1(); ++i)
    for (int j = 0; j < rhs.n2(); ++j) {
      Eigen::ArrayXd lower = nl, diag = nd + (bp.b1.sigma[i] + bp.b2.sigma[j]),
                     upper = nu;
      for (int k = 0; k < n; ++k) col[k] = rhs(i, j, k);
      if (bp.b1.sigma[i] + bp.b2.sigma[j] == 0.0) {
        // singular constant mode: pin the first cell; the dropped row
        // holds by the discrete compatibility of the right-hand side
        diag[0] = 1.0;
        upper[0] = 0.0;
        col[0] = 0.0;
      }
      TridiagSolver solver(lower, diag, upper);
      solver.solve_in_place(col);
      for (int k = 0; k < n; ++k) rhs(i, j, k) = col[k];
    }
  transform_axis1(rhs, bp.b1.q);
  transform_axis2(rhs, bp.b2.q);
  rhs.flat() -= rhs.flat().mean();
  return rhs;
}

double kinetic_energy(const VelocityField& u) {
  const Grid& g = u.grid;
  const double at = tangential_area(g);
  double s = 0.0;
  if (g.n1() > 1) s += (u.u1.flat().square().sum()) * g.dx_n;
  if (g.n2() > 1) s += (u.u2.flat().square().sum()) * g.dx_n;
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j)
      for (int k = 1; k < g.nn; ++k)
        s += u.u3(i, j, k) * u.u3(i, j, k) * g.dx_n;
  return 0.5 * at * s;
}

// sum |grad u|^2 with the difference stencils adjoint to the viscous
// operators (half-weight wall differences for the no-slip components).
double viscous_dissipation(const VelocityField& u) {
  const Grid& g = u.grid;
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  const double at = tangential_area(g);
  const double idn = 1.0 / g.dx_n, idt = 1.0 / g.dx_t;
  double s = 0.0;
  auto tangential_sq = [&](const Tensor3& c, int k_count, bool node_weights) {
    double acc = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        for (int k = 0; k < k_count; ++k) {
          const double wz = node_weights ? trap(g, k) : g.dx_n;
          double dsq = 0.0;
          if (n1 > 1) {
            const double dv = (c(wrap(i + 1, n1), j, k) - c(i, j, k)) * idt;
            dsq += dv * dv;
          }
          if (n2 > 1) {
            const double dv = (c(i, wrap(j + 1, n2), k) - c(i, j, k)) * idt;
            dsq += dv * dv;
          }
          acc += dsq * wz;
        }
    return acc;
  };
  auto center_normal_sq = [&](const Tensor3& c) {
    double acc = 0.0;
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j) {
        for (int k = 1; k < nn; ++k) {
          const double dv = (c(i, j, k) - c(i, j, k - 1)) * idn;
          acc += dv * dv * g.dx_n;
        }
        acc += 2.0 * idn *
               (c(i, j, 0) * c(i, j, 0) + c(i, j, nn - 1) * c(i, j, nn - 1));
      }
    return acc;
  };
  if (n1 > 1) s += tangential_sq(u.u1, nn, false) + center_normal_sq(u.u1);
  if (n2 > 1) s += tangential_sq(u.u2, nn, false) + center_normal_sq(u.u2);
  if (g.dim > 1) {
    s += tangential_sq(u.u3, nn + 1, true);
    for (int i = 0; i < n1; ++i)
      for (int j = 0; j < n2; ++j)
        for (int k = 0; k < nn; ++k) {
          const double dv = (u.u3(i, j, k + 1) - u.u3(i, j, k)) * idn;
          s += dv * dv * g.dx_n;
        }
  }
  return at * s;
}

Profile1D column_profile(const AngleField& phi, int i, int j,
                         const PhysParams& params) {
  Grid g1 = make_grid_1d(params, phi.grid.nn);
  Profile1D p = make_profile(g1);
  for (int k = 0; k <= phi.grid.nn; ++k) p.values[k] = phi.values(i, j, k);
  return p;
}

double angle_h1_sq(const AngleField& phi) {
  const Grid& g = phi.grid;
  const double at = tangential_area(g);
  AngleGradient grad = discrete_gradient(phi);
  double s = 0.0;
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j) {
      for (int k = 0; k <= g.nn; ++k) {
        double v = phi.values(i, j, k) * phi.values(i, j, k);
        if (g.n1() > 1) v += grad.g1(i, j, k) * grad.g1(i, j, k);
        if (g.n2() > 1) v += grad.g2(i, j, k) * grad.g2(i, j, k);
        s += v * trap(g, k);
      }
      for (int k = 0; k < g.nn; ++k)
        s += grad.g3(i, j, k) * grad.g3(i, j, k) * g.dx_n;
    }
  return at * s;
}

}  // namespace

FlowState make_flow_state(const Grid& grid, const PhysParams& params) {
  FlowState s;
  s.t = 0.0;
  s.u = make_velocity_field(grid);
  s.p = make_pressure_field(grid);
  s.phi = make_angle_field(grid, params.lh);
  return s;
}

double total_energy(const FlowState& state, const PhysParams& params) {
  const Grid& g = state.phi.grid;
  const double at = tangential_area(g);
  double e = 0.0;
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j)
      e += at * energy(column_profile(state.phi, i, j, params), params);
  if (g.dim > 1) {
    // tangential elastic energy, absent from the column quadrature
    AngleGradient grad = discrete_gradient(state.phi);
    double s = 0.0;
    for (int i = 0; i < g.n1(); ++i)
      for (int j = 0; j < g.n2(); ++j)
        for (int k = 0; k <= g.nn; ++k) {
          double v = 0.0;
          if (g.n1() > 1) v += grad.g1(i, j, k) * grad.g1(i, j, k);
          if (g.n2() > 1) v += grad.g2(i, j, k) * grad.g2(i, j, k);
          s += v * trap(g, k);
        }
    e += 0.5 * at * s;
    e += kinetic_energy(state.u);
  }
  return e;
}

double dissipation(const FlowState& state, const PhysParams& params) {
  const Grid& g = state.phi.grid;
  const double at = tangential_area(g);
  Tensor3 w = angle_defect(state.phi, params);
  double s = 0.0;
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j)
      for (int k = 0; k < g.nn; ++k)
        s += w(i, j, k) * w(i, j, k) * trap(g, k);
  double a = at * s;
  if (g.dim > 1) a += viscous_dissipation(state.u);
  return a;
}

double cfl_bound(const FlowState& state, const PhysParams& params) {
  const Grid& g = state.phi.grid;
  double umax = 0.0;
  if (g.dim > 1)
    umax = std::max({state.u.u1.flat().abs().maxCoeff(),
                     state.u.u2.flat().abs().maxCoeff(),
                     state.u.u3.flat().abs().maxCoeff()});
  const double spacing = g.dim > 1 ? std::min(g.dx_t, g.dx_n) : g.dx_n;
  return std::min(0.25 * spacing / std::max(umax, 1e-12),
                  0.5 / (params.h * params.h));
}

FlowState step(const FlowState& state, const PhysParams& params, double dt) {
  const Grid& g = state.phi.grid;
  if (!(dt > 0.0) || dt > cfl_bound(state, params))
    throw TimestepTooLarge("dt outside (0, CFL bound]");
  const int n1 = g.n1(), n2 = g.n2(), nn = g.nn;
  const double h2 = params.h * params.h;
  BasisPair bp = bases_for(g);

  FlowState next = state;
  next.t = state.t + dt;

  // (1) angle: implicit diffusion and linear anchoring, explicit
  // transport and sine terms (the nonlinear wall remainder lagged)
  AngleGradient grad_n = discrete_gradient(state.phi);
  Tensor3 tr = transport(state.u, state.phi, grad_n);
  Tensor3 rhs(n1, n2, nn + 1);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      for (int k = 0; k < nn; ++k) {
        const double p0 = state.phi.values(i, j, k);
        double expl = 0.5 * h2 * std::sin(2.0 * p0) - tr(i, j, k);
        if (k == 0)
          expl += params.lh / g.dx_n * (std::sin(2.0 * p0) - 2.0 * p0);
        rhs(i, j, k) = p0 + dt * expl;
      }
      rhs(i, j, nn) = 0.0;
    }
  NormalOperator an = angle_operator(g, params);
  helmholtz_solve(rhs, 0, nn, an.lower, an.diag, an.upper, dt, bp.b1, bp.b2);
  next.phi.values = rhs;
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) next.phi.values(i, j, nn) = 0.0;

  if (g.dim == 1) {
    next.u.u1.setZero();
    next.u.u2.setZero();
    next.u.u3.setZero();
    next.p.values.setZero();
    return next;
  }

  // (2) tentative velocity: explicit advection and elastic stress from
  // the fresh angle, implicit viscosity
  AngleGradient grad_p = discrete_gradient(next.phi);
  Tensor3 w = angle_defect(next.phi, params);
  VelocityField f = elastic_force(next.phi, grad_p, w);
  VelocityField adv = advection(state.u);
  VelocityField ustar = make_velocity_field(g);
  ustar.u1.flat() = state.u.u1.flat() + dt * (f.u1.flat() - adv.u1.flat());
  ustar.u2.flat() = state.u.u2.flat() + dt * (f.u2.flat() - adv.u2.flat());
  ustar.u3.flat() = state.u.u3.flat() + dt * (f.u3.flat() - adv.u3.flat());
  NormalOperator cv = center_viscous(g);
  if (n1 > 1)
    helmholtz_solve(ustar.u1, 0, nn, cv.lower, cv.diag, cv.upper, dt, bp.b1,
                    bp.b2);
  if (n2 > 1)
    helmholtz_solve(ustar.u2, 0, nn, cv.lower, cv.diag, cv.upper, dt, bp.b1,
                    bp.b2);
  NormalOperator nv = node_viscous(g);
  helmholtz_solve(ustar.u3, 1, nn - 1, nv.lower, nv.diag, nv.upper, dt, bp.b1,
                  bp.b2);
  for (int i = 0; i < n1; ++i)
    for (int j = 0; j < n2; ++j) {
      ustar.u3(i, j, 0) = 0.0;
      ustar.u3(i, j, nn) = 0.0;
    }

  // (3) projection
  auto [u_proj, chi] = project(ustar);
  next.u = std::move(u_proj);
  next.p = std::move(chi);
  next.p.values.flat() /= dt;
  return next;
}

std::pair<VelocityField, PressureField> project(const VelocityField& u_star) {
  const Grid& g = u_star.grid;
  BasisPair bp = bases_for(g);
  Tensor3 rhs = discrete_divergence(u_star);
  rhs.flat() = -rhs.flat();
  PressureField chi = make_pressure_field(g);
  chi.values = poisson_cells(g, std::move(rhs), bp);
  VelocityField gradc = cell_gradient(chi);
  VelocityField u = u_star;
  u.u1.flat() -= gradc.u1.flat();
  u.u2.flat() -= gradc.u2.flat();
  u.u3.flat() -= gradc.u3.flat();
  return {std::move(u), std::move(chi)};
}

MaxPrincipleReport max_principle_check(const AngleField& phi, double lo,
                                       double hi, double tol) {
  const Grid& g = phi.grid;
  MaxPrincipleReport r;
  r.min_value = std::numeric_limits<double>::infinity();
  r.max_value = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < g.n1(); ++i)
    for (int j = 0; j < g.n2(); ++j)
      for (int k = 0; k <= g.nn; ++k) {
        const double v = phi.values(i, j, k);
        if (v < r.min_value) {
          r.min_value = v;
          r.argmin = {i, j, k};
        }
        if (v > r.max_value) {
          r.max_value = v;
          r.argmax = {i, j, k};
        }
      }
  r.pass = r.min_value >= lo - tol && r.max_value <= hi + tol;
  return r;
}

namespace {

Diagnostics diagnose(const FlowState& state, const PhysParams& params,
                     const AngleField* star) {
  const Grid& g = state.phi.grid;
  Diagnostics d;
  d.t = state.t;
  d.total_energy = total_energy(state, params);
  d.dissipation = dissipation(state, params);
  d.u_l2 = std::sqrt(2.0 * kinetic_energy(state.u));
  d.u_linf = g.dim > 1 ? std::max({state.u.u1.flat().abs().maxCoeff(),
                                   state.u.u2.flat().abs().maxCoeff(),
                                   state.u.u3.flat().abs().maxCoeff()})
                       : 0.0;
  d.phi_min = state.phi.values.flat().minCoeff();
  d.phi_max = state.phi.values.flat().maxCoeff();
  d.dist_to_zero = std::sqrt(angle_h1_sq(state.phi));
  if (star) {
    AngleField diff = state.phi;
    diff.values.flat() -= star->values.flat();
    d.dist_to_star = std::sqrt(angle_h1_sq(diff));
  }
  d.div_residual = g.dim > 1
                       ? discrete_divergence(state.u).flat().abs().maxCoeff()
                       : 0.0;
  return d;
}

}  // namespace

Trajectory run(const FlowState& initial, const PhysParams& params, double dt,
               double t_end,
               const std::optional<EquilibriumProfile>& candidate_star,
               int sample_every, const FlowTols& tols) {
  if (!(t_end > 0.0)) throw OutOfRange("t_end must be positive");
  if (sample_every < 1) throw OutOfRange("sample_every must be >= 1");
  const Grid& g = initial.phi.grid;
  Trajectory traj;
  FlowState state = initial;

  if (g.dim > 1) {
    const double div0 = discrete_divergence(state.u).flat().abs().maxCoeff();
    if (div0 > 1e-12) {
      auto [u_fixed, chi] = project(state.u);
      state.u = std::move(u_fixed);
      traj.initial_velocity_projected = true;
    }
  }

  std::optional<AngleField> star;
  if (candidate_star) star = extend_to_slab(*candidate_star, g);
  const AngleField* star_ptr = star ? &*star : nullptr;

  traj.samples.push_back(diagnose(state, params, star_ptr));
  const double e0 = traj.samples.front().total_energy;
  double prev_energy = e0;
  double cumulative_rise = 0.0;

  const long n_steps = std::lround(t_end / dt);
  Tensor3 prev_phi = state.phi.values;
  for (long n = 1; n <= n_steps; ++n) {
    prev_phi = state.phi.values;
    state = step(state, params, dt);
    const double e = total_energy(state, params);
    if (e > prev_energy) cumulative_rise += e - prev_energy;
    prev_energy = e;
    const bool at_sample = (n % sample_every == 0) || n == n_steps;
    if (cumulative_rise > 1e-6 * std::max(std::abs(e0), 1e-300)) {
      traj.samples.push_back(diagnose(state, params, star_ptr));
      traj.status = RunStatus::Diverged;
      traj.final_state = std::move(state);
      return traj;
    }
    if (at_sample) {
      Diagnostics d = diagnose(state, params, star_ptr);
      traj.samples.push_back(d);
      const double rate =
          (state.phi.values.flat() - prev_phi.flat()).abs().maxCoeff() / dt;
      if (d.dissipation < tols.tol_conv && rate < tols.tol_conv) {
        traj.status = RunStatus::Converged;
        traj.final_state = std::move(state);
        return traj;
      }
    }
  }
  traj.status = RunStatus::TimeEnd;
  traj.final_state = std::move(state);
  return traj;
}

}  // namespace phan
