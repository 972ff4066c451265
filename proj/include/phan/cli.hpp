#pragma once

#include <string>
#include <vector>

namespace phan {

struct RunConfig {
  std::string subcommand;
  double h = 1.0;
  double lh = 1.0;
  double d = 1.0;
  std::vector<double> d_list;
  int dim = 1;
  int n_tangential = 16;
  int n_normal = 128;
  double dt = 1e-3;
  double t_end = 50.0;
  int sample_every = 10;
  double tol_root = 1e-12;
  double tol_eq = 1e-10;
  double tol_conv = 1e-9;
  long seed = 0;
  std::string out;  // falls back to NEMATIC_PHAN_OUT, then "."
  int jobs = 1;
};

// CLI flags override config-file values override defaults; the file is
// JSON with flat keys named after the long flags.
RunConfig parse_config(int argc, const char* const* argv);

int dispatch(const RunConfig& config);

// parse + dispatch with the exit-code contract: 0 success, 1 config,
// 2 numerical failure, 3 I/O; errors printed as `code<TAB>message`.
int run_cli(int argc, const char* const* argv);

}  // namespace phan
