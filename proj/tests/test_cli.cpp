#include <gtest/gtest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <vector>

#include "cli.hpp"

namespace {

namespace fs = std::filesystem;

const std::string kConfigDir = WW_CONFIG_DIR;

struct Result {
  int code;
  std::string out, err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "weakwhittle");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = weakwhittle::cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

fs::path temp_file(const std::string& name, const std::string& content = "") {
  const fs::path p = fs::temp_directory_path() / ("ww_test_" + name);
  if (!content.empty()) {
    std::ofstream f(p);
    f << content;
  }
  return p;
}

}  // namespace

TEST(Cli, HelpListsEveryKey) {
  const auto r = run({"--help"});
  EXPECT_EQ(r.code, 0);
  for (const auto& k : weakwhittle::cli::kConfigKeys) EXPECT_NE(r.out.find(k.path), std::string::npos) << k.path;
}

TEST(Cli, SubcommandHelp) {
  const auto r = run({"mc", "--help"});
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find("--workers"), std::string::npos);
  EXPECT_NE(r.out.find("mc.replications"), std::string::npos);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"simulate"}).code, 2);
  EXPECT_EQ(run({"simulate", "--config", "/nonexistent.cfg", "--n", "10"}).code, 2);
}

TEST(Cli, UnknownKeyRejected) {
  const auto cfg = temp_file("unknown.cfg", "seed: 1\nmodel:\n  type: arma\n  phi: [0.5]\n  bogus: 3\n");
  const auto r = run({"simulate", "--config", cfg.string(), "--n", "10"});
  EXPECT_EQ(r.code, 2);
  EXPECT_NE(r.err.find("model.bogus"), std::string::npos) << r.err;
}

TEST(Cli, SimulateIsDeterministicAndEchoesConfig) {
  const auto a = run({"simulate", "--config", kConfigDir + "/ar1.cfg", "--n", "100", "--seed", "7"});
  const auto b = run({"simulate", "--config", kConfigDir + "/ar1.cfg", "--n", "100", "--seed", "7"});
  ASSERT_EQ(a.code, 0) << a.err;
  EXPECT_EQ(a.out, b.out);
  std::istringstream lines(a.out);
  std::size_t count = 0;
  for (std::string line; std::getline(lines, line);)
    if (!line.empty() && line[0] != '#') ++count;
  EXPECT_EQ(count, 100u);
  EXPECT_NE(a.err.find("# seed: 7"), std::string::npos) << a.err;
}

TEST(Cli, SimulateThenEstimate) {
  const auto series = temp_file("ar1.txt");
  const auto sim = run({"simulate", "--config", kConfigDir + "/ar1.cfg", "--out", series.string()});
  ASSERT_EQ(sim.code, 0) << sim.err;
  const auto est = run({"estimate", "--config", kConfigDir + "/ar1.cfg", "--input", series.string()});
  ASSERT_EQ(est.code, 0) << est.err;
  EXPECT_NE(est.out.find("beta_hat: [0.4"), std::string::npos) << est.out;
  EXPECT_NE(est.out.find("C1: {ok: true"), std::string::npos);
  const auto csv = run({"estimate", "--config", kConfigDir + "/ar1.cfg", "--input", series.string(), "--format", "csv"});
  EXPECT_EQ(csv.out.rfind("beta_0,sigma2_hat,contrast", 0), 0u) << csv.out;
  fs::remove(series);
}

TEST(Cli, CheckArch) {
  const auto r = run({"check", "--config", kConfigDir + "/arch.cfg", "--m", "9"});
  EXPECT_EQ(r.code, 0) << r.out << r.err;
  EXPECT_NE(r.out.find("threshold: 9\n"), std::string::npos) << r.out;
  EXPECT_NE(r.out.find("overall: pass"), std::string::npos);
}

TEST(Cli, CheckFailsBelowThreshold) {
  const auto cfg = temp_file("arch_slow.cfg",
                             "model:\n  type: arch_inf\n  b0: 1\n  b: [0.1, 0.01]\n  decay: {class: riemannian, rate: 5}\n");
  const auto r = run({"check", "--config", cfg.string(), "--m", "9"});
  EXPECT_EQ(r.code, 1) << r.out;
  EXPECT_NE(r.out.find("overall: fail"), std::string::npos);
}

TEST(Cli, McReportIndependentOfWorkers) {
  const auto a = run({"mc", "--config", kConfigDir + "/whittle_ar1.cfg", "--n", "256", "--workers", "1", "--format", "csv"});
  const auto b = run({"mc", "--config", kConfigDir + "/whittle_ar1.cfg", "--n", "256", "--workers", "3", "--format", "csv"});
  EXPECT_EQ(a.out, b.out);
  EXPECT_FALSE(a.out.empty()) << a.err;
  EXPECT_NE(a.out.find("nvar_beta[0]"), std::string::npos);
}

TEST(Cli, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(kConfigDir)) {
    if (entry.path().extension() != ".cfg") continue;
    EXPECT_NO_THROW(weakwhittle::cli::load_config(entry.path().string())) << entry.path();
  }
}
