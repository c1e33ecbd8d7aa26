#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cstdio>
#include <fstream>
#include <sstream>

#include "cli.hpp"
#include "doctest.h"
#include "json.hpp"

using shrinkerlab::cli::run_command;

namespace {
std::string tmp_path(const std::string& name) {
  return std::string("/tmp/shrinkerlab_test_") + name;
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}
}  // namespace

TEST_CASE("profile solve and check round trip") {
  const std::string curve = tmp_path("al23.curve");
  CHECK(run_command({"profile", "solve", "--p", "2", "--q", "3", "--tol",
                     "1e-8", "--nodes", "128", "-o", curve}) == 0);
  CHECK(run_command({"profile", "check", "-i", curve, "--tol", "1e-7"}) == 0);
  std::remove(curve.c_str());
}

TEST_CASE("usage errors exit with 2") {
  CHECK(run_command({"profile"}) == 2);
  CHECK(run_command({"no-such-command"}) == 2);
  CHECK(run_command({"profile", "check"}) == 2);  // missing required -i
}

TEST_CASE("numerical aborts exit with 1 and the module error name") {
  // inadmissible rotation number
  CHECK(run_command({"profile", "solve", "--p", "3", "--q", "4"}) == 1);
  CHECK(run_command({"profile", "check", "-i", "/no/such/file"}) == 1);
}

TEST_CASE("constants command emits target and measurement") {
  CHECK(run_command({"constants", "--target-k", "2"}) == 0);
  CHECK(run_command({"constants", "--target-k", "1", "--nodes", "128",
                     "--axial", "129"}) == 0);
}

TEST_CASE("grid build writes a snapshot") {
  const std::string snap = tmp_path("grid.txt");
  CHECK(run_command({"grid", "build", "--nodes", "64", "--axial", "65", "-o",
                     snap}) == 0);
  const std::string text = slurp(snap);
  CHECK(text.rfind("shrinkerlab-grid v1", 0) == 0);
  std::remove(snap.c_str());
}

TEST_CASE("geometry eval emits summary and csv") {
  const std::string csv = tmp_path("geom.csv");
  const std::string js = tmp_path("geom.json");
  CHECK(run_command({"geometry", "eval", "--nodes", "64", "--axial", "65",
                     "--field", "radial", "--eps", "0.05", "-o", csv,
                     "--summary", js}) == 0);
  auto j = nlohmann::json::parse(slurp(js));
  CHECK(j["area"].get<double>() > 1.0);
  CHECK(slurp(csv).rfind("i,j,", 0) == 0);
  std::remove(csv.c_str());
  std::remove(js.c_str());
}

TEST_CASE("kernel verify passes on the round cylinder") {
  CHECK(run_command({"kernel", "verify", "--nodes", "256", "--axial", "129",
                     "--kernel-tol", "1e-6"}) == 0);
}

TEST_CASE("loja sweep produces deterministic reports") {
  const std::string cfg = tmp_path("demo.cfg");
  {
    std::ofstream os(cfg);
    os << "[cylinder]\nprofile = round\nnodes = 96\naxial = 97\n"
          "ambient_dim = 4\n"
          "[family]\nkind = mixed\nseed = 3\neps = 3e-2, 1e-2\n"
          "[harness]\nR = 14\nl = 50\n";
  }
  const std::string p1 = tmp_path("runA");
  const std::string p2 = tmp_path("runB");
  CHECK(run_command({"loja", "sweep", "--config", cfg, "-o", p1}) == 0);
  CHECK(run_command({"loja", "sweep", "--config", cfg, "-o", p2}) == 0);
  auto j1 = nlohmann::json::parse(slurp(p1 + "_reports.json"));
  auto j2 = nlohmann::json::parse(slurp(p2 + "_reports.json"));
  CHECK(j1["reports"].dump() == j2["reports"].dump());
  CHECK(j1["reports"].size() == 7);
  // the sweep CSVs exist for plotting
  CHECK(!slurp(p1 + "_ord1.csv").empty());
  for (const std::string pre : {p1, p2}) {
    for (const std::string n :
         {"_reports.json", "_manifest.json", "_ord1.csv", "_entire_tau_phi.csv",
          "_dtauP.csv", "_Pest.csv", "_entire_est.csv",
          "_lojasiewicz_first.csv", "_lojasiewicz_gradient.csv"})
      std::remove((pre + n).c_str());
  }
  std::remove(cfg.c_str());
}

TEST_CASE("interp check reports the exponent") {
  CHECK(run_command({"interp", "check", "--nodes", "48", "--axial", "129",
                     "--m", "4", "--j", "2", "--omega-max", "4"}) == 0);
}
