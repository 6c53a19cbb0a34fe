#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <string>

#include <json.hpp>

#include "rslab/suites.hpp"

namespace {

struct RunResult {
  int status = -1;
  std::string out;
};

// Runs the CLI through the shell; stderr is merged into the captured output when merge is set.
RunResult run(const std::string& args, bool merge = false, const std::string& env = "") {
  const std::string cmd = env + (env.empty() ? "" : " ") + std::string(RSLAB_CLI_PATH) + " " + args + (merge ? " 2>&1" : " 2>/dev/null");
  RunResult r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[4096];
  std::size_t got;
  while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, got);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("rslab_cli_test_" + std::to_string(::getpid()) + "_" + name);
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

}  // namespace

TEST(Cli, VerifyCauchyPassesWithResidualTable) {
  const auto r = run("verify cauchy");
  EXPECT_EQ(r.status, 0);
  EXPECT_NE(r.out.find("cauchy.identity"), std::string::npos);
  EXPECT_NE(r.out.find("PASS"), std::string::npos);
}

TEST(Cli, ReportLinesCarryAnchorAndSeed) {
  const auto path = temp_path("aux.jsonl");
  ASSERT_EQ(run("verify aux --seed 11 --output " + path.string()).status, 0);
  std::ifstream in(path);
  std::string line;
  std::size_t lines = 0;
  const auto& reg = rslab::anchor_registry();
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    EXPECT_EQ(j.at("seed").get<rslab::u64>(), 11u);
    const std::string key = j.at("suite").get<std::string>() + "." + j.at("check").get<std::string>();
    ASSERT_TRUE(reg.count(key)) << key;
    EXPECT_EQ(j.at("anchor").get<std::string>(), reg.at(key));
    EXPECT_TRUE(j.at("pass").get<bool>());
    ++lines;
  }
  EXPECT_EQ(lines, 1u + 2u * 64u);
  std::filesystem::remove(path);
}

TEST(Cli, InjectedFaultExitsTwoAndNamesIndex) {
  const auto r = run("verify doublesum --N 100 --inject 36", true);
  EXPECT_EQ(r.status, 2);
  EXPECT_NE(r.out.find("n=36"), std::string::npos);
  EXPECT_NE(r.out.find("reproduce: rslab verify doublesum --seed"), std::string::npos);
}

TEST(Cli, BadInputExitsThree) {
  EXPECT_EQ(run("verify nosuchsuite").status, 3);
  EXPECT_EQ(run("verify cauchy --N 0").status, 3);
  EXPECT_EQ(run("verify cauchy --N 2000000").status, 3);
  EXPECT_EQ(run("verify cauchy --mode approximate").status, 3);
  EXPECT_EQ(run("verify clgp --inject 5").status, 3);
  EXPECT_EQ(run("verify cauchy --config /nonexistent/rslab.cfg").status, 3);
  EXPECT_EQ(run("gauss --q 5 --chi-index 9").status, 3);
  EXPECT_EQ(run("funceq --q 6 --chi-index 0").status, 3);
  EXPECT_EQ(run("reduce --matrix '1,2;2,4'").status, 3);
  EXPECT_EQ(run("reduce --matrix '1,2'").status, 3);
  EXPECT_EQ(run("reduce --matrix '1,2;3,4' --p 4").status, 3);
  EXPECT_EQ(run("").status, 3);
}

TEST(Cli, DeterministicUnderFixedSeed) {
  const auto a = temp_path("a.jsonl"), b = temp_path("b.jsonl"), c = temp_path("c.jsonl");
  ASSERT_EQ(run("verify clgp --seed 99 --output " + a.string()).status, 0);
  ASSERT_EQ(run("verify clgp --seed 99 --output " + b.string()).status, 0);
  ASSERT_EQ(run("verify clgp --seed 100 --output " + c.string()).status, 0);
  EXPECT_EQ(slurp(a), slurp(b));
  EXPECT_NE(slurp(a), slurp(c));
  for (const auto& p : {a, b, c}) std::filesystem::remove(p);
}

TEST(Cli, SeedEnvironmentAndConfigPrecedence) {
  const auto cfg = temp_path("run.cfg"), out = temp_path("env.jsonl");
  {
    std::ofstream f(cfg);
    f << "# run settings\nmode = float\nN = 200\nseed = 5\n";
  }
  ASSERT_EQ(run("verify matid --config " + cfg.string() + " --output " + out.string(), false, "RS_LAB_SEED=77").status, 0);
  auto first = nlohmann::json::parse(slurp(out).substr(0, slurp(out).find('\n')));
  EXPECT_EQ(first.at("seed").get<rslab::u64>(), 77u);
  EXPECT_EQ(first.at("mode").get<std::string>(), "float");
  EXPECT_EQ(first.at("N").get<rslab::u64>(), 200u);
  ASSERT_EQ(run("verify matid --config " + cfg.string() + " --seed 3 --N 300 --output " + out.string(), false, "RS_LAB_SEED=77").status, 0);
  first = nlohmann::json::parse(slurp(out).substr(0, slurp(out).find('\n')));
  EXPECT_EQ(first.at("seed").get<rslab::u64>(), 3u);
  EXPECT_EQ(first.at("N").get<rslab::u64>(), 300u);
  {
    std::ofstream f(cfg);
    f << "N = 10\nunknown_key = 1\n";
  }
  EXPECT_EQ(run("verify matid --config " + cfg.string()).status, 3);
  std::filesystem::remove(cfg);
  std::filesystem::remove(out);
}

TEST(Cli, DumpCoeffsRows) {
  const auto r = run("dump coeffs --N 100");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(count_lines(r.out), 101u);  // header plus 100 rows
  EXPECT_NE(r.out.find("\n25,197,197\n"), std::string::npos);
}

TEST(Cli, DumpGaussGrid) {
  const auto r = run("dump gauss --q 12 --format jsonl");
  ASSERT_EQ(r.status, 0);
  // phi(12) = 4 characters times the beta_2 grid r/q2, q2 | 12, (r, q2) = 1: 1+1+2+2+2+4 = 12 points.
  EXPECT_EQ(count_lines(r.out), 48u);
  std::set<rslab::u64> chars;
  std::istringstream in(r.out);
  for (std::string line; std::getline(in, line);) chars.insert(nlohmann::json::parse(line).at("chi_index").get<rslab::u64>());
  EXPECT_EQ(chars.size(), 4u);
}

TEST(Cli, DumpTwistTable) {
  const auto r = run("dump twist --beta 1/3 --N 30");
  ASSERT_EQ(r.status, 0);
  EXPECT_EQ(count_lines(r.out), 31u);
  EXPECT_NE(r.out.find("\n3,6,6,0\n"), std::string::npos);
}

TEST(Cli, ReduceAndFunceqReports) {
  auto r = run("reduce --matrix '0,-1;1,0' --p 5 --qprime 6 --pprime 7");
  ASSERT_EQ(r.status, 0);
  auto j = nlohmann::json::parse(r.out);
  EXPECT_EQ(j.at("gamma1").get<std::string>(), "5");
  EXPECT_EQ(j.at("gamma2").get<std::string>(), "1/25");
  EXPECT_TRUE(j.at("verified").get<bool>());
  r = run("funceq --q 7 --chi-index 1 --points 0,1,2");
  ASSERT_EQ(r.status, 0);
  j = nlohmann::json::parse(r.out);
  EXPECT_LT(j.at("max_residual").get<double>(), 1e-8);
  EXPECT_EQ(j.at("samples").size(), 3u);
  r = run("gauss --q 3 --chi-index 1 --beta 1/3");
  ASSERT_EQ(r.status, 0);
  EXPECT_NEAR(nlohmann::json::parse(r.out).at("abs2").get<double>(), 3.0, 1e-12);
  r = run("twist --q 5 --chi-index 1 --N 100 --mode exact");
  ASSERT_EQ(r.status, 0);
  EXPECT_TRUE(nlohmann::json::parse(r.out).at("ok").get<bool>());
}
