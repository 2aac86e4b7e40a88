#include <gtest/gtest.h>

#include <sys/wait.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include "json_writer.hpp"

namespace fs = std::filesystem;

namespace {

struct Invocation {
  int status = -1;
  std::string out;
};

Invocation run(const std::string& args) {
  const std::string command = std::string(SHRINKER_OT_CLI_PATH) + " " + args + " 2>/dev/null";
  Invocation r;
  FILE* pipe = popen(command.c_str(), "r");
  if (!pipe) return r;
  std::array<char, 4096> buf{};
  std::size_t n = 0;
  while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) r.out.append(buf.data(), n);
  const int raw = pclose(pipe);
  r.status = WIFEXITED(raw) ? WEXITSTATUS(raw) : -1;
  return r;
}

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / "shrinker_ot_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Cli, ModelInfoReportsEntropy) {
  const Invocation r = run("model-info --model cylinder --n 3 --k 1");
  ASSERT_EQ(r.status, 0);
  const auto doc = shrinker_ot::cli::Json::parse(r.out);
  EXPECT_EQ(doc["schema_version"], 1);
  EXPECT_NEAR(doc["constants"]["mu_closed_form"].get<double>(), std::log(2.0) - 1.0, 1e-12);
  EXPECT_NEAR(doc["constants"]["mu_quadrature"].get<double>(), std::log(2.0) - 1.0, 1e-6);
}

TEST(Cli, GaussianMainPassesAndIsReproducible) {
  const Invocation a = run("check main --model gaussian --n 2");
  const Invocation b = run("check main --model gaussian --n 2");
  ASSERT_EQ(a.status, 0);
  EXPECT_EQ(a.out, b.out);
  const auto doc = shrinker_ot::cli::Json::parse(a.out);
  EXPECT_EQ(doc["reports"][0]["lhs"].get<double>(), 0.0);
  EXPECT_TRUE(doc["passed"].get<bool>());
}

TEST(Cli, UsageErrorsExitTwo) {
  EXPECT_EQ(run("check nonsense").status, 2);
  EXPECT_EQ(run("check main --model cylinder --n 3 --k 3").status, 2);
  EXPECT_EQ(run("check main --model torus").status, 2);
  EXPECT_EQ(run("check talagrand --model gaussian --n 1").status, 2);
  EXPECT_EQ(run("check main --n two").status, 2);
  EXPECT_EQ(run("").status, 2);
  EXPECT_EQ(run("check talagrand --model cylinder --n 3").status, 2);
}

TEST(Cli, FailingCheckExitsOne) {
  // A drift limit of zero cannot be met by a nonzero LHS.
  EXPECT_EQ(run("check main --model cylinder --n 3 --k 1 --resolution 256 --drift-limit 0").status, 1);
}

TEST(Cli, ConfigFileWithFlagOverride) {
  const fs::path cfg = scratch("talagrand.cfg");
  std::ofstream(cfg) << "# translated Gaussian\nmodel = gaussian\nn = 2\nshift = 0.5\nresolution = 24\n";
  const Invocation r = run("check talagrand --config " + cfg.string() + " --shift 1.0");
  ASSERT_EQ(r.status, 0);
  const auto doc = shrinker_ot::cli::Json::parse(r.out);
  EXPECT_DOUBLE_EQ(doc["reports"][0]["constants"]["shift_norm"].get<double>(), 1.0);
  EXPECT_EQ(doc["config"]["resolution"], 24);

  const fs::path bad = scratch("bad.cfg");
  std::ofstream(bad) << "model = gaussian\nfrobnicate = 3\n";
  EXPECT_EQ(run("check main --config " + bad.string()).status, 2);
}

TEST(Cli, OutAndCsvFiles) {
  const fs::path out = scratch("growth.json");
  fs::remove(out);
  fs::remove(fs::path(out).replace_extension(".csv"));
  const Invocation r = run("check growth --model cylinder --n 3 --k 1 --out " + out.string() + " --csv");
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(r.out.empty());
  const auto doc = shrinker_ot::cli::Json::parse(slurp(out));
  EXPECT_EQ(doc["reports"].size(), 6u);
  const std::string csv = slurp(fs::path(out).replace_extension(".csv"));
  ASSERT_FALSE(csv.empty());
  EXPECT_NE(csv.substr(0, csv.find('\n')).find("theorem_id"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 7);
}

TEST(Cli, MomentsAndFit) {
  const Invocation m = run("moments --model gaussian --n 2 --values 2");
  ASSERT_EQ(m.status, 0);
  const auto doc = shrinker_ot::cli::Json::parse(m.out);
  ASSERT_FALSE(doc["moments"].empty());
  const Invocation f = run("fit-potential --model cylinder --n 3 --k 1 --s 0,1");
  ASSERT_EQ(f.status, 0);
  EXPECT_NE(f.out.find("\"fits\""), std::string::npos);
}

TEST(Cli, SweepResolution) {
  const Invocation r = run("sweep resolution --model gaussian --n 2 --values 256,512");
  ASSERT_EQ(r.status, 0);
  const auto doc = shrinker_ot::cli::Json::parse(r.out);
  ASSERT_EQ(doc["rows"].size(), 2u);
  EXPECT_EQ(doc["rows"][1]["value"], 512);
  EXPECT_EQ(doc["rows"][1]["report"]["lhs"].get<double>(), 0.0);
}
