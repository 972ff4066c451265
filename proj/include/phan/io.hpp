#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "phan/analysis.hpp"
#include "phan/hydroflow.hpp"
#include "phan/spectral.hpp"

namespace phan {

// Shortest fixed-width contract: every floating-point value is written
// with 17 significant digits, enough to round-trip a double exactly.
std::string format_double(double v);

void write_trajectory_csv(std::ostream& os,
                          const std::vector<Diagnostics>& samples);
void write_trajectory_csv(const std::filesystem::path& path,
                          const std::vector<Diagnostics>& samples);
std::vector<Diagnostics> read_trajectory_csv(std::istream& is);
std::vector<Diagnostics> read_trajectory_csv(const std::filesystem::path& path);

void write_profile_csv(std::ostream& os, const Profile1D& profile);
void write_profile_csv(const std::filesystem::path& path,
                       const Profile1D& profile);
// returns (x3, phi) pairs
std::vector<std::pair<double, double>> read_profile_csv(std::istream& is);
std::vector<std::pair<double, double>> read_profile_csv(
    const std::filesystem::path& path);

std::string eigen_json(const PhysParams& params, const EigenResult& result);
std::string equilibrium_summary_json(const PhysParams& params,
                                     const EquilibriumProfile& profile);
std::string stability_json(const PhysParams& params, double mu1, double nu1);
std::string flow_summary_json(const PhysParams& params,
                              const Trajectory& trajectory);
std::string decay_fit_json(const DecayFit& fit);
std::string transition_report_json(const TransitionReport& report);

void write_text_file(const std::filesystem::path& path,
                     const std::string& text);

}  // namespace phan
