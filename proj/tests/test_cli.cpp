#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <json.hpp>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

// Integration tests that drive the installed command line binary end to end.
// The binary path is injected by the build.

namespace {

struct RunResult {
  int exit_code;
  std::string output;  // stdout only
};

RunResult run_cli(const std::string& args) {
  const std::string cmd = std::string(MEMNET_CLI_PATH) + " " + args + " 2>/dev/null";
  std::array<char, 4096> buf{};
  std::string output;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::size_t got = 0;
  while ((got = fread(buf.data(), 1, buf.size(), pipe)) > 0) {
    output.append(buf.data(), got);
  }
  const int status = pclose(pipe);
  return RunResult{WEXITSTATUS(status), output};
}

int count_lines(const std::string& text) {
  int lines = 0;
  for (char c : text) {
    if (c == '\n') ++lines;
  }
  return lines;
}

}  // namespace

TEST_CASE("h2 subcommand reproduces the analytic value") {
  const auto r = run_cli(
      "h2 --family complete --n 3 --alpha 0.5 --beta 0.16666666666666666 --theta 1");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["method"] == "table_ii");
  CHECK(std::abs(doc["value"].get<double>() - 2.4) <= 1e-9);
  CHECK(doc["per_mode"].size() == 1);
  CHECK(doc["per_mode"][0]["multiplicity"] == 2);
  CHECK(doc["params"]["theta"] == 1);
}

TEST_CASE("beta-rel resolves against the spectrum") {
  const auto r = run_cli(
      "h2 --family complete --n 3 --alpha 0.5 --beta-rel 0.25 --theta 3 "
      "--method half_alpha_cf");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.output);
  CHECK(std::abs(doc["value"].get<double>() - 44.0 / 19.0) <= 1e-12);
}

TEST_CASE("region emits the full grid as CSV") {
  const auto r = run_cli(
      "region --family chain --n 15 --theta 2 --alpha-steps 50 --beta-steps 50 "
      "--format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(count_lines(r.output) == 2501);  // header + 50x50 cells
  CHECK(r.output.rfind("alpha,beta,stable\n", 0) == 0);
}

TEST_CASE("simulate is reproducible byte for byte") {
  const std::string args =
      "simulate --family complete --n 3 --alpha 0.5 --beta 0.16666666666666666 "
      "--theta 1 --seed 11 --trials 8 --horizon 3000 --burn-in 300";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  REQUIRE(a.exit_code == 0);
  CHECK(a.output == b.output);
  const auto doc = nlohmann::json::parse(a.output);
  CHECK(doc["trials"] == 8);
  CHECK(doc["seed"] == 11);
  CHECK(std::abs(doc["msd_estimate"].get<double>() - 2.4) < 0.2);
}

TEST_CASE("exit codes follow the error taxonomy") {
  // 2: parameter errors (bad flags, missing seed, unknown flag).
  CHECK(run_cli("simulate --family complete --n 3 --alpha 0.5 --beta 0.1 --theta 1")
            .exit_code == 2);
  CHECK(run_cli("h2 --family complete --n 3 --alpha 0.5 --theta 1").exit_code == 2);
  CHECK(run_cli("h2 --family complete --n 3 --alpha 0.5 --beta 0.1 --no-such-flag")
            .exit_code == 2);
  CHECK(run_cli("graph --family barabasi_albert --n 10 --m 2").exit_code == 2);
  CHECK(run_cli("graph --family nosuch --n 5").exit_code == 2);
  // 3: precondition errors (unstable parameters, gain out of range).
  CHECK(run_cli("h2 --family complete --n 3 --alpha 1.0 --beta 0.7 --theta 1")
            .exit_code == 3);
  CHECK(run_cli("optimal-depth --family complete --n 3 --alpha 1.0 --beta 0.7 "
                "--theta-max 3")
            .exit_code == 3);
  // 0: help.
  CHECK(run_cli("--help").exit_code == 0);
  CHECK(run_cli("h2 --help").exit_code == 0);
}

TEST_CASE("graph round trips through the edge-list format") {
  const std::string path = "/tmp/memnet_cli_test_graph.edges";
  const auto save = run_cli("graph --family ring2 --n 9 --out " + path);
  REQUIRE(save.exit_code == 0);
  const auto loaded = run_cli("graph --graph-file " + path + " --format json");
  REQUIRE(loaded.exit_code == 0);
  const auto doc = nlohmann::json::parse(loaded.output);
  CHECK(doc["n"] == 9);
  CHECK(doc["edges"].size() == 18);  // 2d-regular ring: n*d edges
  CHECK(doc["connected"] == true);
  std::remove(path.c_str());
}

TEST_CASE("figure fig1 emits reference gains and the sweep table") {
  const auto r = run_cli(
      "figure --id fig1 --family ring2 --n 20 --theta-max 10 --beta-steps 8 "
      "--format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.find("# inv_lambda2=") != std::string::npos);
  CHECK(r.output.find("beta,optimal_theta,h2") != std::string::npos);
  CHECK(count_lines(r.output) == 4 + 8);  // 3 comments + header + rows

  const auto json_run = run_cli(
      "figure --id fig1 --family ring2 --n 20 --theta-max 10 --beta-steps 8");
  const auto doc = nlohmann::json::parse(json_run.output);
  CHECK(doc["rows"].size() == 8);
  CHECK(doc["ref"].contains("inv_lambda_n"));
}

TEST_CASE("figure fig2 sweeps the memory factor at fixed gain") {
  const auto r = run_cli(
      "figure --id fig2 --family complete --n 15 --beta-rel 0.3 --theta-max 4 "
      "--alpha-steps 5 --format csv");
  REQUIRE(r.exit_code == 0);
  CHECK(r.output.rfind("alpha,theta,h2\n", 0) == 0);
  CHECK(count_lines(r.output) == 1 + 5 * 4);
}

TEST_CASE("optimal-depth JSON carries the depth profile") {
  const auto r = run_cli(
      "optimal-depth --family complete --n 3 --alpha 0.5 --beta 0.16666666666666666 "
      "--theta-max 10");
  REQUIRE(r.exit_code == 0);
  const auto doc = nlohmann::json::parse(r.output);
  CHECK(doc["optimal_theta"] == 10);
  CHECK(doc["beta_region"] == "low");
  CHECK(doc["values"].size() == 10);
  CHECK(std::abs(doc["values"][0]["h2"].get<double>() - 2.4) <= 1e-12);
}

TEST_CASE("outputs are deterministic across runs") {
  const std::string args =
      "figure --id fig3 --family chain --n 8 --beta-rel 0.3 --theta-max 6 --format csv";
  const auto a = run_cli(args);
  const auto b = run_cli(args);
  CHECK(a.output == b.output);
  CHECK(a.output.rfind("theta,h2\n", 0) == 0);
}
