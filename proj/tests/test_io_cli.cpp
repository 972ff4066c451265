#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phan/cli.hpp"
#include "phan/io.hpp"

using namespace phan;
namespace fs = std::filesystem;

namespace {

fs::path fresh_dir(const std::string& tag) {
  const fs::path p = fs::temp_directory_path() / ("phan_test_" + tag);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int cli(std::initializer_list<const char*> args) {
  std::vector<const char*> argv{"nematic-phan"};
  argv.insert(argv.end(), args.begin(), args.end());
  return run_cli(static_cast<int>(argv.size()), argv.data());
}

}  // namespace

TEST_CASE("doubles round-trip through the 17-digit format") {
  for (double v : {0.1, 1.0 / 3.0, 6.02e23, -7.3e-301, 0.0,
                   0.98251619801056289}) {
    CHECK(std::stod(format_double(v)) == v);
  }
}

TEST_CASE("trajectory CSV round trips exactly") {
  std::vector<Diagnostics> samples(3);
  samples[0] = {0.0, 1.25, 0.5, 0.1, 0.2, 0.0, 3.1, 0.7, std::nullopt, 1e-16};
  samples[1] = {0.5, 1.0 / 3.0, 0.25, 0.05, 0.1, 0.0, 2.9, 0.6, 0.123, 2e-16};
  samples[2] = {1.0, 0.9, 0.1, 0.01, 0.02, 0.0, 2.5, 0.5, 0.001, 0.0};
  std::ostringstream out;
  write_trajectory_csv(out, samples);
  const std::string text = out.str();
  CHECK(text.rfind("t,total_energy,dissipation,u_l2,u_linf,phi_min,phi_max,"
                   "dist_to_zero,dist_to_star,div_residual\n",
                   0) == 0);
  std::istringstream in(text);
  const auto back = read_trajectory_csv(in);
  REQUIRE(back.size() == 3);
  for (size_t i = 0; i < 3; ++i) {
    CHECK(back[i].t == samples[i].t);
    CHECK(back[i].total_energy == samples[i].total_energy);
    CHECK(back[i].dist_to_zero == samples[i].dist_to_zero);
    CHECK(back[i].dist_to_star.has_value() ==
          samples[i].dist_to_star.has_value());
    if (back[i].dist_to_star)
      CHECK(*back[i].dist_to_star == *samples[i].dist_to_star);
    CHECK(back[i].div_residual == samples[i].div_residual);
  }
}

TEST_CASE("malformed trajectory CSV is rejected") {
  std::istringstream bad_header("time,energy\n0,1\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad_header), IoError);
  std::istringstream bad_row(
      "t,total_energy,dissipation,u_l2,u_linf,phi_min,phi_max,"
      "dist_to_zero,dist_to_star,div_residual\n0,1,2\n");
  CHECK_THROWS_AS(read_trajectory_csv(bad_row), IoError);
}

TEST_CASE("profile CSV round trips exactly") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const Grid g = make_grid_1d(p, 17);
  Profile1D f = make_profile(g);
  for (int j = 0; j <= g.nn; ++j)
    f.values[j] = std::sin(3.0 * j) / (j + 1.0);
  std::ostringstream out;
  write_profile_csv(out, f);
  CHECK(out.str().rfind("x3,phi\n", 0) == 0);
  std::istringstream in(out.str());
  const auto rows = read_profile_csv(in);
  REQUIRE(rows.size() == static_cast<size_t>(g.nn + 1));
  for (int j = 0; j <= g.nn; ++j) {
    CHECK(rows[j].first == g.x_normal_node(j));
    CHECK(rows[j].second == f.values[j]);
  }
}

TEST_CASE("summary JSON carries full-precision numbers") {
  const PhysParams p = validate_params(1.0, 1.0, 1.2);
  const EigenResult r = solve_lambda1(p);
  const std::string json = eigen_json(p, r);
  CHECK(json.find("\"lambda1\"") != std::string::npos);
  CHECK(json.find(format_double(r.lambda1)) != std::string::npos);
  CHECK(json.find(format_double(p.d_c)) != std::string::npos);

  DecayFit fit;
  fit.kind = DecayKind::Exponential;
  fit.kappa = 1.0 / 3.0;
  fit.r_squared = 0.999;
  const std::string fj = decay_fit_json(fit);
  CHECK(fj.find("\"exponential\"") != std::string::npos);
  CHECK(fj.find(format_double(1.0 / 3.0)) != std::string::npos);
}

TEST_CASE("config file values are overridden by flags") {
  const fs::path dir = fresh_dir("config");
  const fs::path cfg = dir / "run.json";
  write_text_file(cfg, R"({"d": 0.6, "n-normal": 64, "dt": 0.002})");
  const std::string cfg_path = cfg.string();
  const char* argv[] = {"nematic-phan", "equilibrium", "--config",
                        cfg_path.c_str(), "--d", "0.9"};
  const RunConfig rc = parse_config(6, argv);
  CHECK(rc.subcommand == "equilibrium");
  CHECK(rc.d == 0.9);          // flag wins
  CHECK(rc.n_normal == 64);    // file value
  CHECK(rc.dt == 0.002);       // file value
  CHECK(rc.h == 1.0);          // default
}

TEST_CASE("unknown config keys and bad values are configuration errors") {
  const fs::path dir = fresh_dir("badcfg");
  const fs::path cfg = dir / "run.json";
  write_text_file(cfg, R"({"dee": 0.6})");
  const std::string cfg_path = cfg.string();
  const char* argv[] = {"nematic-phan", "eigen", "--config",
                        cfg_path.c_str()};
  CHECK_THROWS_AS(parse_config(4, argv), UnknownKey);

  const char* neg[] = {"nematic-phan", "eigen", "--d", "-1"};
  CHECK_THROWS_AS(parse_config(4, neg), BadValue);

  const char* mystery[] = {"nematic-phan", "eigen", "--what", "1"};
  CHECK_THROWS_AS(parse_config(4, mystery), BadFlag);

  const char* nosub[] = {"nematic-phan"};
  CHECK_THROWS_AS(parse_config(1, nosub), BadFlag);
}

TEST_CASE("exit codes follow the error taxonomy") {
  const fs::path dir = fresh_dir("exitcodes");
  CHECK(cli({"eigen", "--d", "0.785", "--out",
             (dir / "ok").string().c_str()}) == 0);
  CHECK(cli({"eigen", "--d", "-1"}) == 1);
  CHECK(cli({"flow", "--nonsense"}) == 1);
}

TEST_CASE("artifacts are deterministic byte for byte") {
  const fs::path a = fresh_dir("det_a");
  const fs::path b = fresh_dir("det_b");
  for (const fs::path& dir : {a, b}) {
    REQUIRE(cli({"equilibrium", "--d", "1.2", "--n-normal", "96", "--out",
                 dir.string().c_str()}) == 0);
  }
  for (const char* name :
       {"equilibrium_profile.csv", "equilibrium_summary.json"}) {
    const std::string sa = slurp(a / name);
    CHECK(!sa.empty());
    CHECK(sa == slurp(b / name));
  }
}

TEST_CASE("flow subcommand writes a readable trajectory") {
  const fs::path dir = fresh_dir("flow");
  REQUIRE(cli({"flow", "--d", "1.2", "--n-normal", "64", "--dt", "2e-3",
               "--t-end", "2.0", "--sample-every", "10", "--out",
               dir.string().c_str()}) == 0);
  const auto samples = read_trajectory_csv(dir / "trajectory.csv");
  CHECK(samples.size() > 5);
  CHECK(samples.front().t <= samples.back().t);
  const std::string summary = slurp(dir / "flow_summary.json");
  CHECK(summary.find("\"status\"") != std::string::npos);
}

TEST_CASE("default output directory comes from the environment") {
  const fs::path dir = fresh_dir("envout");
  setenv("NEMATIC_PHAN_OUT", dir.string().c_str(), 1);
  const char* argv[] = {"nematic-phan", "eigen"};
  const RunConfig rc = parse_config(2, argv);
  unsetenv("NEMATIC_PHAN_OUT");
  CHECK(rc.out == dir.string());
}
