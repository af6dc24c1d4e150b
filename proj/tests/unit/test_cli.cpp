#include <gtest/gtest.h>
#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct CliRun {
  int code;
  std::string out;
};

CliRun run(const std::string& args) {
  const std::string cmd = std::string(PERRON_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* p = popen(cmd.c_str(), "r");
  std::string out;
  char buf[4096];
  while (std::size_t n = fread(buf, 1, sizeof buf, p)) out.append(buf, n);
  const int status = pclose(p);
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, out};
}

fs::path write_config(const std::string& name, const std::string& text) {
  const fs::path dir = fs::temp_directory_path() / "perron_cli_test";
  fs::create_directories(dir);
  const fs::path p = dir / name;
  std::ofstream(p) << text;
  return p;
}

const char* kSmall = R"cfg(
order = 3
coefficients = [0, -1, 0]
perturbations = ["0.01/(1+t)^2", "0", "0.02/(1+t)^2"]
t0 = 0
t_end = 15
step = 0.05
lambda = "index:2"
)cfg";

}  // namespace

TEST(Cli, Version) {
  const CliRun r = run("--version");
  EXPECT_EQ(r.code, 0);
  EXPECT_NE(r.out.find(PERRON_VERSION), std::string::npos);
}

TEST(Cli, AnalyzeReportsRoots) {
  const CliRun r = run("analyze -c " + write_config("small.cfg", kSmall).string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("tool"), "perron");
  EXPECT_EQ(j.at("command"), "analyze");
  EXPECT_TRUE(j.contains("config_hash"));
}

TEST(Cli, FormulaKindsRun) {
  const std::string cfg = write_config("small.cfg", kSmall).string();
  for (const char* k : {"general", "levinson", "hartman_wintner", "refined", "refined_remainder", "ladder"})
    EXPECT_EQ(run("formula -c " + cfg + " -k " + k).code, 0) << k;
  EXPECT_EQ(run("formula -c " + cfg + " -k nonsense").code, 2);
}

TEST(Cli, SolveIsReproducible) {
  const std::string cfg = write_config("small.cfg", kSmall).string();
  const CliRun a = run("solve -c " + cfg), b = run("solve -c " + cfg);
  ASSERT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
}

TEST(Cli, ConfigErrorsExitTwo) {
  std::string bad = kSmall;
  bad.replace(bad.find("[\"0.01/(1+t)^2\", \"0\", \"0.02/(1+t)^2\"]"), 37, "[]");
  EXPECT_EQ(run("analyze -c " + write_config("bad.cfg", bad).string()).code, 2);
  EXPECT_EQ(run("analyze -c /nonexistent/file.cfg").code, 2);
  EXPECT_EQ(run("analyze").code, 2);
  EXPECT_EQ(run("frobnicate").code, 2);
}

TEST(Cli, NumericFailureExitsThree) {
  const std::string big = R"cfg(
order = 5
coefficients = [0, 4, 0, -5, 0]
perturbations = ["20/(1+t)", "20/(1+t)", "0", "20/(1+t)", "0"]
t0 = 0
t_end = 30
step = 0.05
lambda = "index:3"
)cfg";
  EXPECT_EQ(run("solve -c " + write_config("big.cfg", big).string()).code, 3);
}

TEST(Cli, Example5WritesCsv) {
  const fs::path dir = fs::temp_directory_path() / "perron_cli_test" / "ex5";
  fs::remove_all(dir);
  const CliRun r = run("example5 --csv-dir " + dir.string());
  ASSERT_EQ(r.code, 0);
  const auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("command"), "example5");
  EXPECT_TRUE(fs::exists(dir / "example5.csv"));
}
