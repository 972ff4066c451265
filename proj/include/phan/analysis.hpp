#pragma once

#include <optional>
#include <string>
#include <vector>

#include "phan/equilibrium.hpp"
#include "phan/hydroflow.hpp"

namespace phan {

enum class DecayKind { Exponential, Algebraic, Inconclusive };
enum class LimitClass { P, HAN, Ambiguous };

struct DecayFit {
  DecayKind kind = DecayKind::Inconclusive;
  double kappa = 0.0;      // rate of e^{-kappa t}
  double alpha = 0.0;      // exponent of (1 + t)^{-alpha}
  double r_squared = 0.0;  // of the winning model
  double window_lo = 0.0;
  double window_hi = 0.0;
};

// Trailing-window least squares of log y against t (exponential) and
// against log(1 + t) (algebraic); the better r^2 wins, both below 0.9
// is inconclusive.
DecayFit fit_decay(const std::vector<std::pair<double, double>>& series,
                   double window_fraction);

LimitClass classify_limit(const Trajectory& trajectory,
                          const std::optional<EquilibriumProfile>& phi_star,
                          double tol);

struct SweepConfig {
  int n_normal = 128;
  double dt = 2e-3;
  double t_end = 400.0;
  int sample_every = 10;
  double tol_eq = 1e-10;
  double tol_conv = 1e-12;
  double classify_tol = 1e-4;
  double window_fraction = 0.5;
  int jobs = 1;
};

struct SweepEntry {
  double d = 0.0;
  LimitClass classification = LimitClass::Ambiguous;
  DecayFit fit;
  double final_dist_to_zero = 0.0;
  std::optional<double> final_dist_to_star;
  RunStatus status = RunStatus::TimeEnd;
  std::vector<Diagnostics> samples;
};

struct TransitionReport {
  std::vector<double> d_values;
  std::vector<SweepEntry> entries;
  double bracket_lo = 0.0;  // last planar thickness
  double bracket_hi = 0.0;  // first hybrid-aligned thickness
  double d_c_theory = 0.0;
  bool single_switch = true;
};

// One pipeline per thickness: equilibrium candidate, 1D relaxation from
// phi0 = 0.1 (d - x3)/d, classification and decay fit.
TransitionReport phan_sweep(const PhysParams& params_base,
                            const std::vector<double>& d_values,
                            const SweepConfig& config);

struct RateSpectrumReport {
  double kappa_fitted = 0.0;
  double nu1 = 0.0;
  double relative_gap = 0.0;
  DecayFit fit;
};

// Compares the fitted small-amplitude decay rate of |phi|_{L2} against
// the smallest eigenvalue of the linearization at zero (d < d_c only).
RateSpectrumReport rate_vs_spectrum(const PhysParams& params,
                                    const SweepConfig& config,
                                    double amplitude = 1e-3);

}  // namespace phan
