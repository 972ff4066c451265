#include "phan/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace phan {

namespace {

const char* kTrajectoryHeader =
    "t,total_energy,dissipation,u_l2,u_linf,phi_min,phi_max,dist_to_zero,"
    "dist_to_star,div_residual";

std::string json_number(double v) {
  if (!std::isfinite(v)) return "null";
  return format_double(v);
}

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::stringstream ss(line);
  while (std::getline(ss, item, sep)) out.push_back(item);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream is(path);
  if (!is) throw IoError("cannot open " + path.string() + " for reading");
  return is;
}

const char* status_name(RunStatus s) {
  switch (s) {
    case RunStatus::Converged: return "converged";
    case RunStatus::Diverged: return "diverged";
    default: return "time_end";
  }
}

const char* class_name(LimitClass c) {
  switch (c) {
    case LimitClass::P: return "P";
    case LimitClass::HAN: return "HAN";
    default: return "ambiguous";
  }
}

const char* kind_name(DecayKind k) {
  switch (k) {
    case DecayKind::Exponential: return "exponential";
    case DecayKind::Algebraic: return "algebraic";
    default: return "inconclusive";
  }
}

}  // namespace

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_trajectory_csv(std::ostream& os,
                          const std::vector<Diagnostics>& samples) {
  os << kTrajectoryHeader << '\n';
  for (const Diagnostics& d : samples) {
    os << format_double(d.t) << ',' << format_double(d.total_energy) << ','
       << format_double(d.dissipation) << ',' << format_double(d.u_l2) << ','
       << format_double(d.u_linf) << ',' << format_double(d.phi_min) << ','
       << format_double(d.phi_max) << ',' << format_double(d.dist_to_zero)
       << ',' << (d.dist_to_star ? format_double(*d.dist_to_star) : "") << ','
       << format_double(d.div_residual) << '\n';
  }
  if (!os) throw IoError("trajectory CSV write failed");
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<Diagnostics>& samples) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_trajectory_csv(os, samples);
}

std::vector<Diagnostics> read_trajectory_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != kTrajectoryHeader)
    throw IoError("bad trajectory CSV header");
  std::vector<Diagnostics> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 10) throw IoError("bad trajectory CSV row");
    Diagnostics d;
    d.t = std::stod(cells[0]);
    d.total_energy = std::stod(cells[1]);
    d.dissipation = std::stod(cells[2]);
    d.u_l2 = std::stod(cells[3]);
    d.u_linf = std::stod(cells[4]);
    d.phi_min = std::stod(cells[5]);
    d.phi_max = std::stod(cells[6]);
    d.dist_to_zero = std::stod(cells[7]);
    if (!cells[8].empty()) d.dist_to_star = std::stod(cells[8]);
    d.div_residual = std::stod(cells[9]);
    out.push_back(d);
  }
  return out;
}

std::vector<Diagnostics> read_trajectory_csv(
    const std::filesystem::path& path) {
  auto is = open_input(path);
  return read_trajectory_csv(is);
}

void write_profile_csv(std::ostream& os, const Profile1D& profile) {
  os << "x3,phi\n";
  for (int k = 0; k < profile.nodes(); ++k)
    os << format_double(profile.grid.x_normal_node(k)) << ','
       << format_double(profile.values[k]) << '\n';
  if (!os) throw IoError("profile CSV write failed");
}

void write_profile_csv(const std::filesystem::path& path,
                       const Profile1D& profile) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  write_profile_csv(os, profile);
}

std::vector<std::pair<double, double>> read_profile_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line != "x3,phi")
    throw IoError("bad profile CSV header");
  std::vector<std::pair<double, double>> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto cells = split(line, ',');
    if (cells.size() != 2) throw IoError("bad profile CSV row");
    out.emplace_back(std::stod(cells[0]), std::stod(cells[1]));
  }
  return out;
}

std::vector<std::pair<double, double>> read_profile_csv(
    const std::filesystem::path& path) {
  auto is = open_input(path);
  return read_profile_csv(is);
}

std::string eigen_json(const PhysParams& params, const EigenResult& result) {
  std::ostringstream os;
  os << "{\"h\":" << json_number(params.h) << ",\"lh\":"
     << json_number(params.lh) << ",\"d\":" << json_number(params.d)
     << ",\"d_c\":" << json_number(params.d_c)
     << ",\"lambda1\":" << json_number(result.lambda1)
     << ",\"residual\":" << json_number(result.residual)
     << ",\"iterations\":" << result.iterations << "}";
  return os.str();
}

std::string equilibrium_summary_json(const PhysParams& params,
                                     const EquilibriumProfile& profile) {
  std::ostringstream os;
  os << "{\"h\":" << json_number(params.h) << ",\"lh\":"
     << json_number(params.lh) << ",\"d\":" << json_number(params.d)
     << ",\"d_c\":" << json_number(params.d_c)
     << ",\"energy\":" << json_number(profile.energy)
     << ",\"bvp_residual\":" << json_number(profile.bvp_residual)
     << ",\"iterations\":" << profile.iterations
     << ",\"method\":\"" << profile.method << "\""
     << ",\"wall_angle\":" << json_number(profile.profile.wall_value()) << "}";
  return os.str();
}

std::string stability_json(const PhysParams& params, double mu1, double nu1) {
  std::ostringstream os;
  os << "{\"h\":" << json_number(params.h) << ",\"lh\":"
     << json_number(params.lh) << ",\"d\":" << json_number(params.d)
     << ",\"d_c\":" << json_number(params.d_c)
     << ",\"mu1\":" << json_number(mu1) << ",\"nu1\":" << json_number(nu1)
     << "}";
  return os.str();
}

std::string flow_summary_json(const PhysParams& params,
                              const Trajectory& trajectory) {
  const Diagnostics& last = trajectory.samples.back();
  std::ostringstream os;
  os << "{\"h\":" << json_number(params.h) << ",\"lh\":"
     << json_number(params.lh) << ",\"d\":" << json_number(params.d)
     << ",\"status\":\"" << status_name(trajectory.status) << "\""
     << ",\"t_final\":" << json_number(last.t)
     << ",\"total_energy\":" << json_number(last.total_energy)
     << ",\"dissipation\":" << json_number(last.dissipation)
     << ",\"u_linf\":" << json_number(last.u_linf)
     << ",\"dist_to_zero\":" << json_number(last.dist_to_zero)
     << ",\"dist_to_star\":"
     << (last.dist_to_star ? json_number(*last.dist_to_star) : "null")
     << ",\"initial_velocity_projected\":"
     << (trajectory.initial_velocity_projected ? "true" : "false") << "}";
  return os.str();
}

std::string decay_fit_json(const DecayFit& fit) {
  std::ostringstream os;
  os << "{\"kind\":\"" << kind_name(fit.kind) << "\""
     << ",\"kappa\":" << json_number(fit.kappa)
     << ",\"alpha\":" << json_number(fit.alpha)
     << ",\"r_squared\":" << json_number(fit.r_squared)
     << ",\"window\":[" << json_number(fit.window_lo) << ","
     << json_number(fit.window_hi) << "]}";
  return os.str();
}

std::string transition_report_json(const TransitionReport& report) {
  std::ostringstream os;
  os << "{\"d_values\":[";
  for (size_t i = 0; i < report.d_values.size(); ++i)
    os << (i ? "," : "") << json_number(report.d_values[i]);
  os << "],\"classifications\":[";
  for (size_t i = 0; i < report.entries.size(); ++i)
    os << (i ? "," : "") << "\"" << class_name(report.entries[i].classification)
       << "\"";
  os << "],\"kappa_by_d\":[";
  for (size_t i = 0; i < report.entries.size(); ++i)
    os << (i ? "," : "") << json_number(report.entries[i].fit.kappa);
  os << "],\"d_transition_empirical\":[" << json_number(report.bracket_lo)
     << "," << json_number(report.bracket_hi) << "]"
     << ",\"d_c_theory\":" << json_number(report.d_c_theory)
     << ",\"single_switch\":" << (report.single_switch ? "true" : "false")
     << "}";
  return os.str();
}

void write_text_file(const std::filesystem::path& path,
                     const std::string& text) {
  std::ofstream os(path);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  os << text << '\n';
  if (!os) throw IoError("write failed for " + path.string());
}

}  // namespace phan
