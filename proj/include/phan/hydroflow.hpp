#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phan/equilibrium.hpp"
#include "phan/fields.hpp"

namespace phan {

struct FlowState {
  double t = 0.0;
  VelocityField u;
  PressureField p;
  AngleField phi;
};

FlowState make_flow_state(const Grid& grid, const PhysParams& params);

struct Diagnostics {
  double t = 0.0;
  double total_energy = 0.0;
  double dissipation = 0.0;
  double u_l2 = 0.0;
  double u_linf = 0.0;
  double phi_min = 0.0;
  double phi_max = 0.0;
  double dist_to_zero = 0.0;                // H1 norm of phi
  std::optional<double> dist_to_star;       // H1 distance to the candidate
  double div_residual = 0.0;
};

enum class RunStatus { Converged, Diverged, TimeEnd };

struct Trajectory {
  std::vector<Diagnostics> samples;
  RunStatus status = RunStatus::TimeEnd;
  FlowState final_state;
  bool initial_velocity_projected = false;
};

// Total energy per unit tangential area: E[phi] + (1/2) int |u|^2, with
// the angle part evaluated column by column through the same quadrature
// as the 1D energy, so a tangentially constant state reproduces it.
double total_energy(const FlowState& state, const PhysParams& params);

// Dissipation rate A = int |grad u|^2 + |Lap phi + (h^2/2) sin 2phi|^2,
// the wall node carrying the weak-anchoring defect; zero exactly at
// discrete equilibria with u = 0.
double dissipation(const FlowState& state, const PhysParams& params);

struct FlowTols {
  double tol_conv = 1e-9;
  double tol_div = 1e-10;
};

// One semi-implicit step: implicit diffusion for the angle with the
// nonlinear wall term lagged, explicit transport; tentative velocity
// with explicit advection and elastic stress and implicit viscosity;
// exact discrete pressure projection.
FlowState step(const FlowState& state, const PhysParams& params, double dt);

double cfl_bound(const FlowState& state, const PhysParams& params);

Trajectory run(const FlowState& initial, const PhysParams& params, double dt,
               double t_end,
               const std::optional<EquilibriumProfile>& candidate_star,
               int sample_every, const FlowTols& tols = {});

// Hodge projection u = u_star - grad chi, Lap chi = div u_star with
// wall-Neumann / tangentially periodic chi of zero mean.
std::pair<VelocityField, PressureField> project(const VelocityField& u_star);

struct MaxPrincipleReport {
  bool pass = true;
  double min_value = 0.0;
  double max_value = 0.0;
  std::array<int, 3> argmin{0, 0, 0};
  std::array<int, 3> argmax{0, 0, 0};
};

MaxPrincipleReport max_principle_check(const AngleField& phi, double lo,
                                       double hi, double tol);

}  // namespace phan
