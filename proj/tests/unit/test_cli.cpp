#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "cli.hpp"

namespace fs = std::filesystem;

namespace {

struct Result {
  int code = 0;
  std::string out;
  std::string err;
};

Result invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "lsmdp");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = lsmdp::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::vector<std::vector<std::string>> read_csv_simple(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  for (std::string line; std::getline(in, line);) {
    std::vector<std::string> cells;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) cells.push_back(cell);
    rows.push_back(cells);
  }
  return rows;
}

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    root_ = fs::temp_directory_path() /
            ("lsmdp-cli-" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(root_);
    fs::create_directories(root_);
  }
  void TearDown() override { fs::remove_all(root_); }
  std::string dir(const std::string& name) const { return (root_ / name).string(); }

  // Runs once, reruns from the manifest into a second directory and compares
  // every output file byte for byte.
  void expect_reproducible(const std::string& command, std::vector<std::string> args) {
    args.insert(args.begin(), command);
    args.push_back("--out");
    args.push_back(dir("first"));
    const auto first = invoke(args);
    ASSERT_NE(first.code, 1) << first.err;
    const auto second = invoke({"--config", dir("first") + "/manifest.ini", command, "--out", dir("second")});
    ASSERT_EQ(second.code, first.code) << second.err;
    EXPECT_EQ(second.out, first.out);
    std::size_t compared = 0;
    for (const auto& entry : fs::directory_iterator(dir("first"))) {
      const auto name = entry.path().filename().string();
      if (name.rfind("manifest", 0) == 0) continue;
      EXPECT_EQ(slurp(entry.path()), slurp(fs::path(dir("second")) / name)) << name;
      ++compared;
    }
    EXPECT_GT(compared, 0U);
    fs::remove_all(dir("first"));
    fs::remove_all(dir("second"));
  }

  fs::path root_;
};

}  // namespace

TEST_F(Cli, ClassifyHillClimbing) {
  const auto r = invoke({"classify", "--objective", "onemax:n=8", "--policy", "hc", "--out", dir("o")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "exploitation-oriented\n");
  EXPECT_TRUE(fs::exists(dir("o") + "/classify.json"));
  EXPECT_TRUE(fs::exists(dir("o") + "/classify.csv"));
  EXPECT_TRUE(fs::exists(dir("o") + "/manifest.ini"));
  const auto manifest = nlohmann::json::parse(slurp(dir("o") + "/manifest.json"));
  EXPECT_EQ(manifest.at("command"), "classify");
  EXPECT_EQ(manifest.at("config").at("policy"), "hc");
  EXPECT_TRUE(manifest.contains("version"));
}

TEST_F(Cli, ClassifyAnnealing) {
  const auto r = invoke({"classify", "--objective", "onemax:n=8", "--policy", "sa:T0=10,rate=0.9", "--out",
                         dir("o")});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out.rfind("balanced (C=", 0), 0U);
}

TEST_F(Cli, ClassifyInconclusiveExitCode) {
  const auto r = invoke({"classify", "--objective", "onemax:n=6", "--policy", "sa:T0=10,rate=0.9", "--horizon",
                         "5", "--out", dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitInconclusive);
  EXPECT_EQ(r.out, "inconclusive\n");
}

TEST_F(Cli, BadPolicyNamesDescriptor) {
  const auto r = invoke({"classify", "--objective", "onemax:n=8", "--policy", "bogus", "--out", dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitUsage);
  EXPECT_NE(r.err.find("bogus"), std::string::npos);
  EXPECT_FALSE(fs::exists(dir("o")));
}

TEST_F(Cli, BadObjectiveAndFormat) {
  auto r = invoke({"classify", "--objective", "onemax:n=x", "--policy", "hc", "--out", dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitUsage);
  r = invoke({"simulate", "--objective", "onemax:n=4", "--policy", "hc", "--format", "xml", "--out", dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitUsage);
  EXPECT_NE(r.err.find("xml"), std::string::npos);
  r = invoke({"frobnicate"});
  EXPECT_EQ(r.code, lsmdp::cli::kExitUsage);
  r = invoke({"classify", "--objective", "onemax:n=4", "--policy", "hc", "--reachable-from", "01", "--out",
              dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitUsage);
}

TEST_F(Cli, ResourceLimitExitCode) {
  auto r = invoke({"gamma", "--objective", "onemax:n=25", "--out", dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitResourceLimit);
  r = invoke({"value", "--objective", "onemax:n=15", "--out", dir("o")});
  EXPECT_EQ(r.code, lsmdp::cli::kExitResourceLimit);
}

TEST_F(Cli, Help) {
  const auto r = invoke({"--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("classify"), std::string::npos);
  const auto sub = invoke({"classify", "--help"});
  EXPECT_NE(sub.out.find("bit i-1 holds variable i"), std::string::npos);
}

TEST_F(Cli, ValueGapIsNonnegative) {
  const auto r = invoke({"value", "--objective", "onemax:n=3", "--policy", "hc", "--discount", "0.9", "--out",
                         dir("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv_simple(dir("o") + "/value.csv");
  ASSERT_EQ(rows.size(), 9U);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"state", "f", "v_policy", "v_optimal", "gap"}));
  for (std::size_t k = 1; k < rows.size(); ++k) EXPECT_GE(std::stod(rows[k][4]), 0.0) << k;
  EXPECT_TRUE(fs::exists(dir("o") + "/greedy_policy.csv"));
}

TEST_F(Cli, ValueOfZeroObjective) {
  const auto r = invoke({"value", "--objective", "zero:n=3", "--policy", "walk", "--out", dir("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto rows = read_csv_simple(dir("o") + "/value.csv");
  for (std::size_t k = 1; k < rows.size(); ++k) {
    for (std::size_t c = 1; c < 5; ++c) EXPECT_EQ(std::stod(rows[k][c]), 0.0);
  }
}

TEST_F(Cli, ValueOfAnnealingUsesHorizon) {
  const auto r = invoke({"value", "--objective", "onemax:n=3", "--policy", "sa:T0=1,rate=0.5", "--out", dir("o")});
  EXPECT_EQ(r.code, 0) << r.err;
}

TEST_F(Cli, SimulateWritesTrajectories) {
  const auto r = invoke({"simulate", "--objective", "onemax:n=8", "--policy", "sa:T0=2,rate=0.95", "--seeds", "5",
                         "--horizon", "50", "--trajectories", "--out", dir("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  std::ifstream in(dir("o") + "/trajectories.jsonl");
  std::size_t lines = 0;
  for (std::string line; std::getline(in, line);) ++lines;
  EXPECT_EQ(lines, 5U);
  const auto manifest = nlohmann::json::parse(slurp(dir("o") + "/manifest.json"));
  EXPECT_EQ(manifest.at("seeds").size(), 5U);
  for (const char* f : {"summary.json", "summary.csv", "plot_best.csv", "plot_exploration.csv"}) {
    EXPECT_TRUE(fs::exists(dir("o") + "/" + f)) << f;
  }
}

TEST_F(Cli, CompareOneRowPerPolicy) {
  const auto r = invoke({"compare", "--objective", "onemax:n=12", "--policy", "hc", "--policy",
                         "sa:T0=5,rate=0.98", "--seeds", "10", "--horizon", "500", "--out", dir("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  const auto summary = nlohmann::json::parse(slurp(dir("o") + "/compare.json"));
  ASSERT_EQ(summary.at("policies").size(), 2U);
  for (const auto& row : summary.at("policies")) {
    EXPECT_TRUE(row.contains("hit_rate"));
    EXPECT_TRUE(row.contains("best"));
  }
  std::ifstream in(dir("o") + "/compare.csv");
  std::string header, hc, sa;
  std::getline(in, header);
  std::getline(in, hc);
  std::getline(in, sa);
  EXPECT_NE(header.find("hit_rate"), std::string::npos);
  EXPECT_EQ(hc.rfind("hc,", 0), 0U);
  EXPECT_EQ(sa.rfind("\"sa:T0=5,rate=0.98\",", 0), 0U);
}

TEST_F(Cli, GammaOutputs) {
  const auto r = invoke({"gamma", "--objective", "onemax:n=5", "--start", "00000", "--out", dir("o")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_NE(r.out.find("local maxima: 1 of 32"), std::string::npos);
  EXPECT_NE(r.out.find("gamma reached 0 at t=5"), std::string::npos);
  const auto rows = read_csv_simple(dir("o") + "/gamma_trajectory.csv");
  EXPECT_EQ(rows.size(), 102U);
}

TEST_F(Cli, FormatSelection) {
  const auto r = invoke({"classify", "--objective", "onemax:n=4", "--policy", "hc", "--format", "json", "--out",
                         dir("o")});
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir("o") + "/classify.json"));
  EXPECT_FALSE(fs::exists(dir("o") + "/classify.csv"));
}

TEST_F(Cli, OutputDirectoryFromEnvironment) {
  ::setenv("LSMDP_OUT_DIR", dir("env").c_str(), 1);
  const auto r = invoke({"classify", "--objective", "onemax:n=4", "--policy", "hc"});
  ::unsetenv("LSMDP_OUT_DIR");
  ASSERT_EQ(r.code, 0);
  EXPECT_TRUE(fs::exists(dir("env") + "/classify.json"));
}

TEST_F(Cli, CommandLineOverridesConfig) {
  ASSERT_EQ(invoke({"classify", "--objective", "onemax:n=6", "--policy", "hc", "--out", dir("a")}).code, 0);
  const auto r = invoke({"--config", dir("a") + "/manifest.ini", "classify", "--policy", "walk", "--out", dir("b")});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.out, "exploration-oriented\n");
  const auto manifest = nlohmann::json::parse(slurp(dir("b") + "/manifest.json"));
  EXPECT_EQ(manifest.at("config").at("objective"), "onemax:n=6");
  EXPECT_EQ(manifest.at("config").at("policy"), "walk");
}

TEST_F(Cli, ManifestRerunsAreByteIdentical) {
  const std::string cnf = std::string("maxsat:path=") + LSMDP_TEST_DATA + "/cnf/valid/random_3sat_10.cnf";
  expect_reproducible("classify", {"--objective", "trap:n=8,k=4", "--policy", "sa:T0=3,rate=0.8"});
  expect_reproducible("classify", {"--objective", "onemax:n=6", "--policy", "hc", "--reachable-from", "000011"});
  expect_reproducible("gamma", {"--objective", "nk:n=8,k=2,seed=3", "--policy", "walk", "--start", "00000000",
                                "--steps", "30", "--seed", "9"});
  expect_reproducible("value", {"--objective", "leadingones:n=4", "--policy", "metropolis:T=0.5", "--discount",
                                "0.8"});
  expect_reproducible("simulate", {"--objective", cnf, "--policy", "sa:T0=2,rate=0.99", "--seeds", "7",
                                   "--seed", "123", "--horizon", "80", "--trajectories", "--format", "csv,json"});
  expect_reproducible("compare", {"--objective", "onemax:n=9", "--policy", "hc", "--policy", "walk", "--policy",
                                  "hc:literal", "--seeds", "4", "--start", "000000000", "--horizon", "30",
                                  "--bucket-width", "7"});
}
