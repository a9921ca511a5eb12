#include "gwtails/cli.hpp"

#include <unistd.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("gwtails_test_" + std::to_string(::rand()) + std::to_string(::getpid()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string str() const { return path.string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int run(std::vector<std::string> args) { return gwt::cli::run(args); }

}  // namespace

TEST_CASE("validate: presets pass, bad configs exit 2") {
  TempDir tmp;
  CHECK(run({"validate", "--preset", "example1"}) == 0);
  CHECK(run({"validate", "--preset", "nosuch"}) == 2);

  const auto bad = tmp.path / "bad.json";
  std::ofstream(bad) << "{\"p\": [0.1, 0.9], \"q\": [1, 0.0001]}";  // p0 != 0
  CHECK(run({"validate", "--model", bad.string()}) == 2);

  const auto good = tmp.path / "good.json";
  std::ofstream(good) << "{\"p\": [0, 1, 1], \"q\": [3, -1]}";
  CHECK(run({"validate", "--model", good.string()}) == 0);

  const auto malformed = tmp.path / "broken.json";
  std::ofstream(malformed) << "{\"p\": [0, 1";
  CHECK(run({"validate", "--model", malformed.string()}) == 2);
  CHECK(run({"density", "--model", malformed.string(), "--method", "integral",
             "--x-steps", "2", "--out", tmp.str()}) == 2);
}

TEST_CASE("density writes a deterministic profile and refuses to overwrite") {
  TempDir tmp;
  std::vector<std::string> args = {"density",  "--preset", "example1",     "--method",
                                   "integral", "--x-steps", "5",           "--x-min",
                                   "0.5",      "--x-max",  "2.5",          "--nodes",
                                   "20000",    "--y-max",  "200",          "--out",
                                   tmp.str()};
  CHECK(run(args) == 0);
  const auto csv = tmp.path / "density.csv";
  REQUIRE(fs::exists(csv));
  const std::string first = slurp(csv);
  CHECK(first.find("x,p_integral") != std::string::npos);
  CHECK(first.find("model=") != std::string::npos);

  CHECK(run(args) == 2);  // exists, no --force

  auto forced = args;
  forced.push_back("--force");
  CHECK(run(forced) == 0);
  CHECK(slurp(csv) == first);  // identical manifest => byte-identical output
}

TEST_CASE("poles, karlin, raster, mc outputs exist with provenance") {
  TempDir tmp;
  CHECK(run({"poles", "--preset", "example1", "--rmax", "40", "--out", tmp.str()}) == 0);
  const std::string poles = slurp(tmp.path / "poles.csv");
  CHECK(poles.find("re_omega,im_omega,re_res,im_res,depth,power,source_zero,propagation_k") !=
        std::string::npos);

  CHECK(run({"karlin", "--preset", "example1", "--terms", "2", "--harmonics", "6",
             "--theta-nodes", "20000", "--out", tmp.str()}) == 0);
  const std::string theta = slurp(tmp.path / "theta.csv");
  CHECK(theta.find("m,n,re,im,y_shift") != std::string::npos);

  CHECK(run({"raster", "--preset", "example1", "--nx", "16", "--ny", "16", "--width", "2",
             "--height", "2", "--angle", "--out", tmp.str()}) == 0);
  CHECK(slurp(tmp.path / "raster.pgm").substr(0, 3) == "P5\n");
  CHECK(slurp(tmp.path / "raster.json").find("\"model\"") != std::string::npos);
  CHECK(slurp(tmp.path / "angle.json").find("\"theta_hat\"") != std::string::npos);

  CHECK(run({"mc", "--preset", "example3", "--paths", "2000", "--seed", "3",
             "--export-samples", "--out", tmp.str()}) == 0);
  CHECK(slurp(tmp.path / "mc_stats.json").find("\"sample_mean\"") != std::string::npos);
  CHECK(fs::exists(tmp.path / "mc_samples.csv"));
}

TEST_CASE("exit codes: hypothesis violations map to 4, numeric failures to 3") {
  TempDir tmp;
  const auto shallow = tmp.path / "shallow.json";
  // Valid PGF but log_E r > -1: outside the tail-series regime.
  std::ofstream(shallow) << "{\"p\": [0, 1.4, -0.4], \"q\": [2, -1]}";
  CHECK(run({"density", "--model", shallow.string(), "--method", "left", "--x-steps", "2",
             "--out", tmp.str()}) == 4);
  CHECK(run({"density", "--model", shallow.string(), "--method", "right", "--x-steps", "2",
             "--out", tmp.str()}) == 4);

  // deg P > deg Q + 1 without the override.
  const auto steep = tmp.path / "steep.json";
  std::ofstream(steep) << "{\"p\": [0, 0.2, 0, 0.8], \"q\": [2, -1]}";
  CHECK(run({"poles", "--model", steep.string(), "--out", tmp.str()}) == 4);
  CHECK(run({"poles", "--model", steep.string(), "--asymptotic-only", "--rmax", "30",
             "--force", "--out", tmp.str()}) == 0);

  // Numeric failure: K sampled far outside the analyticity strip.
  CHECK(run({"karlin", "--preset", "example1", "--terms", "1", "--harmonics", "2",
             "--theta-nodes", "1000", "--y-shift", "40", "--force", "--out", tmp.str()}) == 3);
}

TEST_CASE("non-preset models run through the fully auto-tuned path") {
  // Derived y shift (angle estimate + magnitude backoff) and auto kappa
  // scaling, with all three methods cross-checking on a fresh model.
  TempDir tmp;
  const auto custom = tmp.path / "custom.json";
  std::ofstream(custom) << "{\"p\": [0, 1, 1], \"q\": [4, -2]}";
  CHECK(run({"density", "--model", custom.string(), "--method", "all", "--x-min", "0.3",
             "--x-max", "2.5", "--x-steps", "8", "--nodes", "200000", "--y-max", "2000",
             "--theta-nodes", "50000", "--out", tmp.str()}) == 0);
  const std::string csv = slurp(tmp.path / "density.csv");
  CHECK(csv.find("p_integral,p_right,p_left") != std::string::npos);
  // Parse the three columns and check cross-method agreement.
  std::istringstream in(csv);
  std::string line;
  std::getline(in, line);  // provenance
  std::getline(in, line);  // header
  double worst = 0.0;
  while (std::getline(in, line)) {
    double x, a, b, c;
    REQUIRE(std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &x, &a, &b, &c) == 4);
    worst = std::max({worst, std::abs(a - b), std::abs(a - c)});
  }
  CHECK(worst <= 1e-3);
}

TEST_CASE("compare emits the combined report") {
  TempDir tmp;
  CHECK(run({"compare", "--preset", "example3", "--x-steps", "8", "--x-min", "0.3",
             "--x-max", "2.4", "--nodes", "50000", "--y-max", "500", "--theta-nodes",
             "30000", "--terms", "12", "--harmonics", "16", "--paths", "20000", "--out",
             tmp.str()}) == 0);
  const std::string report = slurp(tmp.path / "compare.json");
  CHECK(report.find("max_disagreement") != std::string::npos);
  CHECK(report.find("l1_histogram") != std::string::npos);
  CHECK(report.find("ks_vs_integral") != std::string::npos);
  CHECK(fs::exists(tmp.path / "density.csv"));
}
