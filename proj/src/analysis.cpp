#include "phan/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <limits>

#include "phan/spectral.hpp"

namespace phan {

namespace {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

LineFit least_squares(const std::vector<double>& x,
                      const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LineFit f;
  const double vxx = sxx - sx * sx / n, vxy = sxy - sx * sy / n,
               vyy = syy - sy * sy / n;
  if (vxx <= 0.0) return f;
  f.slope = vxy / vxx;
  f.intercept = (sy - f.slope * sx) / n;
  f.r_squared = vyy > 0.0 ? (vxy * vxy) / (vxx * vyy) : 1.0;
  return f;
}

}  // namespace

DecayFit fit_decay(const std::vector<std::pair<double, double>>& series,
                   double window_fraction) {
  if (series.size() < 20)
    throw InsufficientData("decay fit needs at least 20 samples, got " +
                           std::to_string(series.size()));
  if (!(window_fraction > 0.0) || window_fraction > 1.0)
    throw OutOfRange("window_fraction must lie in (0, 1]");
  for (const auto& [t, y] : series)
    if (!(y > 0.0)) throw NonPositiveSeries("series values must be positive");

  const size_t n = series.size();
  const size_t m = std::max<size_t>(
      2, static_cast<size_t>(std::lround(window_fraction * n)));
  const size_t begin = n - m;

  std::vector<double> t, logt1, logy;
  t.reserve(m);
  logt1.reserve(m);
  logy.reserve(m);
  for (size_t i = begin; i < n; ++i) {
    t.push_back(series[i].first);
    logt1.push_back(std::log1p(series[i].first));
    logy.push_back(std::log(series[i].second));
  }

  const LineFit expo = least_squares(t, logy);
  const LineFit alge = least_squares(logt1, logy);

  DecayFit fit;
  fit.kappa = -expo.slope;
  fit.alpha = -alge.slope;
  fit.window_lo = series[begin].first;
  fit.window_hi = series.back().first;

  const bool exp_ok = expo.r_squared >= 0.99 && fit.kappa > 0.0;
  const bool alg_ok = alge.r_squared >= 0.9 && fit.alpha > 0.0 &&
                      alge.r_squared > expo.r_squared;
  if (exp_ok && (expo.r_squared >= alge.r_squared || !alg_ok)) {
    fit.kind = DecayKind::Exponential;
    fit.r_squared = expo.r_squared;
  } else if (alg_ok) {
    fit.kind = DecayKind::Algebraic;
    fit.r_squared = alge.r_squared;
  } else {
    fit.kind = DecayKind::Inconclusive;
    fit.r_squared = std::max(expo.r_squared, alge.r_squared);
  }
  return fit;
}

LimitClass classify_limit(const Trajectory& trajectory,
                          const std::optional<EquilibriumProfile>& phi_star,
                          double tol) {
  if (trajectory.status != RunStatus::Converged)
    throw NotConverged("trajectory did not converge");
  const Diagnostics& last = trajectory.samples.back();
  if (last.dist_to_zero < tol) return LimitClass::P;
  if (phi_star && last.dist_to_star && *last.dist_to_star < tol &&
      last.dist_to_zero > 10.0 * tol)
    return LimitClass::HAN;
  return LimitClass::Ambiguous;
}

namespace {

SweepEntry sweep_one(const PhysParams& params, const SweepConfig& config) {
  SweepEntry entry;
  entry.d = params.d;
  Grid grid = make_grid_1d(params, config.n_normal);
  auto [star, trace] = monotone_iterate(params, grid, config.tol_eq);

  FlowState initial = make_flow_state(grid, params);
  for (int k = 0; k <= grid.nn; ++k)
    initial.phi.values(0, 0, k) =
        0.1 * (params.d - grid.x_normal_node(k)) / params.d;

  FlowTols tols;
  tols.tol_conv = config.tol_conv;
  Trajectory traj = run(initial, params, config.dt, config.t_end, star,
                        config.sample_every, tols);
  entry.status = traj.status;
  entry.samples = traj.samples;
  entry.final_dist_to_zero = traj.samples.back().dist_to_zero;
  entry.final_dist_to_star = traj.samples.back().dist_to_star;
  entry.classification = classify_limit(traj, star, config.classify_tol);

  // rate of approach toward whichever limit the run selected
  std::vector<std::pair<double, double>> series;
  for (const Diagnostics& s : traj.samples) {
    const double y = entry.classification == LimitClass::HAN && s.dist_to_star
                         ? *s.dist_to_star
                         : s.dist_to_zero;
    if (!(y > 1e-14)) break;
    series.emplace_back(s.t, y);
  }
  if (series.size() >= 20) entry.fit = fit_decay(series, config.window_fraction);
  return entry;
}

}  // namespace

TransitionReport phan_sweep(const PhysParams& params_base,
                            const std::vector<double>& d_values,
                            const SweepConfig& config) {
  if (d_values.empty())
    throw OutOfRange("sweep needs at least one thickness");
  TransitionReport report;
  report.d_values = d_values;
  report.d_c_theory = critical_thickness(params_base.h, params_base.lh);

  std::vector<std::future<SweepEntry>> futures;
  futures.reserve(d_values.size());
  const int jobs = std::max(1, config.jobs);
  for (double d : d_values) {
    const PhysParams p = validate_params(params_base.h, params_base.lh, d);
    auto task = [p, config] { return sweep_one(p, config); };
    futures.push_back(jobs > 1
                          ? std::async(std::launch::async, task)
                          : std::async(std::launch::deferred, task));
  }
  for (auto& f : futures) report.entries.push_back(f.get());

  report.bracket_lo = -std::numeric_limits<double>::infinity();
  report.bracket_hi = std::numeric_limits<double>::infinity();
  bool seen_han = false;
  for (const SweepEntry& e : report.entries) {
    if (e.classification == LimitClass::P) {
      report.bracket_lo = e.d;
      if (seen_han) report.single_switch = false;
    } else if (e.classification == LimitClass::HAN) {
      if (!seen_han) report.bracket_hi = e.d;
      seen_han = true;
    }
  }
  return report;
}

RateSpectrumReport rate_vs_spectrum(const PhysParams& params,
                                    const SweepConfig& config,
                                    double amplitude) {
  const double dc = critical_thickness(params.h, params.lh);
  if (!(params.d < dc))
    throw OutOfRange("rate_vs_spectrum requires d < d_c");
  Grid grid = make_grid_1d(params, config.n_normal);

  FlowState state = make_flow_state(grid, params);
  for (int k = 0; k <= grid.nn; ++k)
    state.phi.values(0, 0, k) =
        amplitude * (params.d - grid.x_normal_node(k)) / params.d;

  const long n_steps = std::lround(config.t_end / config.dt);
  std::vector<std::pair<double, double>> series;
  auto l2 = [&] {
    double s = 0.0;
    for (int k = 0; k <= grid.nn; ++k) {
      const double wz = (k == 0 || k == grid.nn) ? 0.5 * grid.dx_n : grid.dx_n;
      s += wz * state.phi.values(0, 0, k) * state.phi.values(0, 0, k);
    }
    return std::sqrt(s);
  };
  series.emplace_back(0.0, l2());
  for (long n = 1; n <= n_steps; ++n) {
    state = step(state, params, config.dt);
    if (n % config.sample_every == 0) {
      const double y = l2();
      if (!(y > 1e-300)) break;
      series.emplace_back(state.t, y);
    }
  }

  RateSpectrumReport report;
  report.fit = fit_decay(series, config.window_fraction);
  report.kappa_fitted = report.fit.kappa;
  report.nu1 = linearized_spectrum_at_zero(params, grid).nu1;
  report.relative_gap =
      std::abs(report.kappa_fitted - report.nu1) / std::abs(report.nu1);
  return report;
}

}  // namespace phan
