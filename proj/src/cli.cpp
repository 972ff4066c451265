#include "phan/cli.hpp"

#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>

#include <json.hpp>

#include "phan/analysis.hpp"
#include "phan/io.hpp"
#include "phan/spectral.hpp"

namespace phan {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct HelpShown {};

double as_number(const std::string& key, const json& v) {
  if (!v.is_number()) throw BadValue(key, "expected a number");
  return v.get<double>();
}

long as_integer(const std::string& key, const json& v) {
  if (!v.is_number_integer()) throw BadValue(key, "expected an integer");
  return v.get<long>();
}

std::vector<double> parse_d_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw BadValue("d-list", "'" + item + "' is not a number");
    }
  }
  return out;
}

void apply_file_values(const fs::path& path, CLI::App* sub, RunConfig& cfg,
                       std::string& d_list_text) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open config file " + path.string());
  json data;
  try {
    is >> data;
  } catch (const json::exception& e) {
    throw BadValue("config", e.what());
  }
  if (!data.is_object()) throw BadValue("config", "expected a JSON object");

  std::map<std::string, std::function<void(const json&)>> setters{
      {"h", [&](const json& v) { cfg.h = as_number("h", v); }},
      {"lh", [&](const json& v) { cfg.lh = as_number("lh", v); }},
      {"d", [&](const json& v) { cfg.d = as_number("d", v); }},
      {"d-list",
       [&](const json& v) {
         if (v.is_string()) {
           d_list_text = v.get<std::string>();
         } else if (v.is_array()) {
           cfg.d_list.clear();
           for (const auto& e : v) cfg.d_list.push_back(as_number("d-list", e));
         } else {
           throw BadValue("d-list", "expected an array or string");
         }
       }},
      {"dim",
       [&](const json& v) { cfg.dim = static_cast<int>(as_integer("dim", v)); }},
      {"n-tangential",
       [&](const json& v) {
         cfg.n_tangential = static_cast<int>(as_integer("n-tangential", v));
       }},
      {"n-normal",
       [&](const json& v) {
         cfg.n_normal = static_cast<int>(as_integer("n-normal", v));
       }},
      {"dt", [&](const json& v) { cfg.dt = as_number("dt", v); }},
      {"t-end", [&](const json& v) { cfg.t_end = as_number("t-end", v); }},
      {"sample-every",
       [&](const json& v) {
         cfg.sample_every = static_cast<int>(as_integer("sample-every", v));
       }},
      {"tol-root",
       [&](const json& v) { cfg.tol_root = as_number("tol-root", v); }},
      {"tol-eq", [&](const json& v) { cfg.tol_eq = as_number("tol-eq", v); }},
      {"tol-conv",
       [&](const json& v) { cfg.tol_conv = as_number("tol-conv", v); }},
      {"seed", [&](const json& v) { cfg.seed = as_integer("seed", v); }},
      {"out",
       [&](const json& v) {
         if (!v.is_string()) throw BadValue("out", "expected a string");
         cfg.out = v.get<std::string>();
       }},
      {"jobs",
       [&](const json& v) { cfg.jobs = static_cast<int>(as_integer("jobs", v)); }},
  };

  for (const auto& [key, value] : data.items()) {
    auto it = setters.find(key);
    if (it == setters.end()) throw UnknownKey(key);
    const CLI::Option* opt = sub->get_option_no_throw("--" + key);
    if (opt != nullptr && opt->count() > 0) continue;  // flag wins
    it->second(value);
  }
}

void add_flags(CLI::App* sub, RunConfig& cfg, std::string& d_list_text,
               std::string& config_path) {
  sub->set_help_flag("--help", "print this help message");
  sub->add_option("--h", cfg.h, "field strength h");
  sub->add_option("--lh", cfg.lh, "anchoring strength L_H");
  sub->add_option("--d", cfg.d, "film thickness d");
  sub->add_option("--d-list", d_list_text, "comma-separated thicknesses");
  sub->add_option("--dim", cfg.dim, "spatial dimension (1, 2, or 3)");
  sub->add_option("--n-tangential", cfg.n_tangential,
                  "tangential cells per axis");
  sub->add_option("--n-normal", cfg.n_normal, "cells across the film");
  sub->add_option("--dt", cfg.dt, "time step");
  sub->add_option("--t-end", cfg.t_end, "final time");
  sub->add_option("--sample-every", cfg.sample_every,
                  "steps between diagnostics samples");
  sub->add_option("--tol-root", cfg.tol_root, "root-solve tolerance");
  sub->add_option("--tol-eq", cfg.tol_eq, "equilibrium solve tolerance");
  sub->add_option("--tol-conv", cfg.tol_conv, "flow convergence tolerance");
  sub->add_option("--seed", cfg.seed, "seed for randomized initial data");
  sub->add_option("--out", cfg.out, "output directory");
  sub->add_option("--config", config_path, "JSON config file (flat keys)");
  sub->add_option("--jobs", cfg.jobs, "max concurrent sweep pipelines");
}

void validate_config(const RunConfig& cfg) {
  if (cfg.dim < 1 || cfg.dim > 3) throw BadValue("dim", "must be 1, 2, or 3");
  if (cfg.n_normal < 4) throw BadValue("n-normal", "must be at least 4");
  if (cfg.dim > 1 && cfg.n_tangential < 4)
    throw BadValue("n-tangential", "must be at least 4 when dim > 1");
  if (!(cfg.dt > 0.0)) throw BadValue("dt", "must be positive");
  if (!(cfg.t_end > 0.0)) throw BadValue("t-end", "must be positive");
  if (cfg.sample_every < 1) throw BadValue("sample-every", "must be >= 1");
  if (cfg.jobs < 1) throw BadValue("jobs", "must be >= 1");
  if (!(cfg.h > 0.0)) throw BadValue("h", "must be positive");
  if (!(cfg.lh > 0.0)) throw BadValue("lh", "must be positive");
  if (cfg.subcommand != "sweep" && !(cfg.d > 0.0))
    throw BadValue("d", "must be positive");
}

fs::path output_dir(const RunConfig& cfg) {
  if (!cfg.out.empty()) return cfg.out;
  if (const char* env = std::getenv("NEMATIC_PHAN_OUT"); env && *env)
    return env;
  return ".";
}

AngleField seeded_angle(const Grid& grid, const PhysParams& params,
                        long seed) {
  AngleField phi = make_angle_field(grid, params.lh);
  std::mt19937 rng(static_cast<std::mt19937::result_type>(seed));
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double phase1 = 2.0 * std::numbers::pi * unit(rng);
  const double phase2 = 2.0 * std::numbers::pi * unit(rng);
  const double wobble = 0.2 + 0.3 * unit(rng);
  for (int i = 0; i < grid.n1(); ++i)
    for (int j = 0; j < grid.n2(); ++j)
      for (int k = 0; k <= grid.nn; ++k) {
        const double ramp =
            (params.d - grid.x_normal_node(k)) / params.d;
        double factor = 1.0;
        if (grid.n1() > 1)
          factor += wobble * std::sin(2.0 * std::numbers::pi *
                                          (i + 0.5) / grid.n1() +
                                      phase1);
        if (grid.n2() > 1)
          factor += wobble * std::sin(2.0 * std::numbers::pi *
                                          (j + 0.5) / grid.n2() +
                                      phase2);
        phi.values(i, j, k) = 0.1 * ramp * factor;
      }
  return phi;
}

int run_eigen(const RunConfig& cfg) {
  const PhysParams params = validate_params(cfg.h, cfg.lh, cfg.d);
  SpectralTols tols;
  tols.tol_root = cfg.tol_root;
  const EigenResult res = solve_lambda1(params, tols);
  std::cout << eigen_json(params, res) << '\n';
  return 0;
}

int run_equilibrium(const RunConfig& cfg) {
  const PhysParams params = validate_params(cfg.h, cfg.lh, cfg.d);
  const Grid grid = make_grid_1d(params, cfg.n_normal);
  auto [profile, trace] = monotone_iterate(params, grid, cfg.tol_eq);
  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir);
  write_profile_csv(dir / "equilibrium_profile.csv", profile.profile);
  const std::string summary = equilibrium_summary_json(params, profile);
  write_text_file(dir / "equilibrium_summary.json", summary);
  std::cout << summary << '\n';
  return 0;
}

int run_flow(const RunConfig& cfg) {
  const PhysParams params = validate_params(cfg.h, cfg.lh, cfg.d);
  const Grid grid = make_grid(params, cfg.dim, cfg.n_tangential, cfg.n_normal);
  const Grid grid1 = make_grid_1d(params, cfg.n_normal);
  auto [star, trace] = monotone_iterate(params, grid1, cfg.tol_eq);

  FlowState initial = make_flow_state(grid, params);
  initial.phi = seeded_angle(grid, params, cfg.seed);
  FlowTols tols;
  tols.tol_conv = cfg.tol_conv;
  const Trajectory traj = run(initial, params, cfg.dt, cfg.t_end, star,
                              cfg.sample_every, tols);

  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir);
  write_trajectory_csv(dir / "trajectory.csv", traj.samples);
  const std::string summary = flow_summary_json(params, traj);
  write_text_file(dir / "flow_summary.json", summary);
  std::cout << summary << '\n';
  if (traj.status == RunStatus::Diverged)
    throw Diverged("flow run diverged (cumulative energy rise)");
  return 0;
}

int run_stability(const RunConfig& cfg) {
  const PhysParams params = validate_params(cfg.h, cfg.lh, cfg.d);
  const Grid grid = make_grid_1d(params, cfg.n_normal);
  SpectralTols tols;
  tols.tol_root = cfg.tol_root;
  const double nu1 = linearized_spectrum_at_zero(params, grid, tols).nu1;
  auto [eq, trace] = monotone_iterate(params, grid, cfg.tol_eq);
  const double mu1 =
      principal_eigenvalue_mu1(eq.profile, params, grid, tols).mu1;
  std::cout << stability_json(params, mu1, nu1) << '\n';
  return 0;
}

int run_sweep(const RunConfig& cfg) {
  if (cfg.d_list.empty())
    throw BadValue("d-list", "sweep requires at least one thickness");
  const PhysParams base = validate_params(cfg.h, cfg.lh, cfg.d_list.front());
  SweepConfig sc;
  sc.n_normal = cfg.n_normal;
  sc.dt = cfg.dt;
  sc.t_end = cfg.t_end;
  sc.sample_every = cfg.sample_every;
  sc.tol_eq = cfg.tol_eq;
  sc.tol_conv = cfg.tol_conv;
  sc.jobs = cfg.jobs;
  const TransitionReport report = phan_sweep(base, cfg.d_list, sc);

  const fs::path dir = output_dir(cfg);
  fs::create_directories(dir);
  for (size_t i = 0; i < report.entries.size(); ++i) {
    char name[64];
    std::snprintf(name, sizeof name, "sweep_d_%g.csv",
                  report.entries[i].d);
    write_trajectory_csv(dir / name, report.entries[i].samples);
  }
  const std::string summary = transition_report_json(report);
  write_text_file(dir / "sweep_summary.json", summary);
  std::cout << summary << '\n';
  return 0;
}

}  // namespace

RunConfig parse_config(int argc, const char* const* argv) {
  RunConfig cfg;
  std::string d_list_text, config_path;

  CLI::App app{"planar / hybrid-aligned nematic film toolkit"};
  app.set_help_flag("--help", "print this help message");
  app.require_subcommand(1);
  std::map<std::string, CLI::App*> subs;
  const std::pair<const char*, const char*> commands[] = {
      {"eigen", "solve the threshold eigenvalue relation"},
      {"equilibrium", "compute the least-energy director profile"},
      {"flow", "time-step the coupled flow/director system"},
      {"stability", "principal eigenvalues of the second variation"},
      {"sweep", "classify the film state across thicknesses"},
  };
  for (auto [name, blurb] : commands) {
    CLI::App* sub = app.add_subcommand(name, blurb);
    add_flags(sub, cfg, d_list_text, config_path);
    subs[name] = sub;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    throw HelpShown{};
  } catch (const CLI::ParseError& e) {
    throw BadFlag(e.what());
  }

  CLI::App* selected = nullptr;
  for (auto& [name, sub] : subs)
    if (sub->parsed()) {
      cfg.subcommand = name;
      selected = sub;
    }

  if (!config_path.empty())
    apply_file_values(config_path, selected, cfg, d_list_text);
  if (!d_list_text.empty()) cfg.d_list = parse_d_list(d_list_text);
  if (cfg.out.empty()) {
    if (const char* env = std::getenv("NEMATIC_PHAN_OUT"); env && *env)
      cfg.out = env;
  }
  validate_config(cfg);
  return cfg;
}

int dispatch(const RunConfig& cfg) {
  if (cfg.subcommand == "eigen") return run_eigen(cfg);
  if (cfg.subcommand == "equilibrium") return run_equilibrium(cfg);
  if (cfg.subcommand == "flow") return run_flow(cfg);
  if (cfg.subcommand == "stability") return run_stability(cfg);
  if (cfg.subcommand == "sweep") return run_sweep(cfg);
  throw BadFlag("unknown subcommand '" + cfg.subcommand + "'");
}

int run_cli(int argc, const char* const* argv) {
  try {
    return dispatch(parse_config(argc, argv));
  } catch (const HelpShown&) {
    return 0;
  } catch (const Error& e) {
    std::cerr << e.code() << '\t' << e.what() << '\n';
    return static_cast<int>(e.error_class());
  } catch (const std::exception& e) {
    std::cerr << "InternalError\t" << e.what() << '\n';
    return 2;
  }
}

}  // namespace phan
