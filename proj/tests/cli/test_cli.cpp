// Copyright 2026 The triferm Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Drives the installed binary end to end. The binary path comes from the
// build (TRIFERM_BIN_PATH) and may be overridden with the TRIFERM_BIN
// environment variable.

#include <sys/wait.h>
#include <unistd.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>
#include <json.hpp>

namespace fs = std::filesystem;

namespace {

std::string binary_path() {
  if (const char* env = std::getenv("TRIFERM_BIN")) return env;
#ifdef TRIFERM_BIN_PATH
  return TRIFERM_BIN_PATH;
#else
  FAIL("TRIFERM_BIN not set");
  return {};
#endif
}

struct CommandResult {
  int exit_code;
  std::string output;
};

CommandResult run_cli(const std::string& args, const std::string& env_prefix = {}) {
  static int counter = 0;
  fs::path log = fs::temp_directory_path() / ("triferm_cli_log_" + std::to_string(::getpid()) + "_" +
                                              std::to_string(counter++));
  std::string command = env_prefix + binary_path() + " " + args + " > " + log.string() + " 2>&1";
  int status = std::system(command.c_str());
  std::ifstream in(log);
  std::stringstream text;
  text << in.rdbuf();
  fs::remove(log);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, text.str()};
}

fs::path fresh_dir(const std::string& tag) {
  static int counter = 0;
  fs::path dir = fs::temp_directory_path() / ("triferm_cli_" + tag + "_" + std::to_string(::getpid()) +
                                              "_" + std::to_string(counter++));
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::stringstream text;
  text << in.rdbuf();
  return text.str();
}

constexpr double kPi = std::numbers::pi;

std::string num(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

}  // namespace

TEST_CASE("simulate at the even-parity setting writes the four-outcome distribution") {
  fs::path dir = fresh_dir("sim_even");
  auto result = run_cli("simulate --alpha " + num(kPi / 3.0) + " --beta " +
                        num(kPi / 3.0) + " --gamma " + num(kPi / 3.0) +
                        " --out " + dir.string());
  REQUIRE(result.exit_code == 0);

  auto j = nlohmann::json::parse(slurp(dir / "distribution.json"));
  REQUIRE(std::abs(j["theta"].get<double>() - kPi / 2.0) < 1e-9);
  REQUIRE(std::abs(j["keep_probability"].get<double>() - 0.25) < 1e-12);
  REQUIRE(std::abs(j["parity_expectation"].get<double>() - 1.0) < 1e-9);
  REQUIRE(std::abs(j["probabilities"]["+++"].get<double>() - 0.25) < 1e-9);
  REQUIRE(std::abs(j["probabilities"]["++-"].get<double>()) < 1e-9);

  // CSV carries the same numbers
  std::string csv = slurp(dir / "distribution.csv");
  REQUIRE(csv.rfind("outcome,probability\n", 0) == 0);
  REQUIRE(csv.find("+--,0.25") != std::string::npos);

  auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
  REQUIRE(manifest["command"] == "simulate");
  REQUIRE(manifest["outputs"].size() == 2);
}

TEST_CASE("simulate covers the odd-parity and wrapped-phase settings") {
  fs::path odd = fresh_dir("sim_odd");
  auto result = run_cli("simulate --alpha " + num(2.0 * kPi / 3.0) + " --beta " +
                        num(2.0 * kPi / 3.0) + " --gamma " + num(2.0 * kPi / 3.0) +
                        " --out " + odd.string());
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(odd / "distribution.json"));
  REQUIRE(std::abs(j["parity_expectation"].get<double>() + 1.0) < 1e-9);

  // all-zero settings put the phase at -pi/2, reported reduced as 3pi/2
  fs::path zero = fresh_dir("sim_zero");
  result = run_cli("simulate --alpha 0 --beta 0 --gamma 0 --out " + zero.string());
  REQUIRE(result.exit_code == 0);
  j = nlohmann::json::parse(slurp(zero / "distribution.json"));
  REQUIRE(std::abs(j["theta"].get<double>() - 3.0 * kPi / 2.0) < 1e-9);
  REQUIRE(std::abs(j["parity_expectation"].get<double>() + 1.0) < 1e-9);
}

TEST_CASE("simulate accepts degrees") {
  fs::path dir = fresh_dir("sim_deg");
  auto result = run_cli("simulate --alpha 60 --beta 60 --gamma 60 --degrees --out " + dir.string());
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "distribution.json"));
  REQUIRE(std::abs(j["theta"].get<double>() - kPi / 2.0) < 1e-9);
}

TEST_CASE("sweep writes one row per grid point with the sine law") {
  fs::path dir = fresh_dir("sweep");
  auto result = run_cli("sweep --steps 5 --out " + dir.string());
  REQUIRE(result.exit_code == 0);

  std::istringstream csv(slurp(dir / "sweep.csv"));
  std::string line;
  REQUIRE(std::getline(csv, line));
  REQUIRE(line == "theta,parity,p_+++,p_++-,p_+-+,p_+--,p_-++,p_-+-,p_--+,p_---");
  std::vector<double> parities;
  while (std::getline(csv, line)) {
    if (line.empty()) continue;
    auto first = line.find(',');
    auto second = line.find(',', first + 1);
    parities.push_back(std::stod(line.substr(first + 1, second - first - 1)));
  }
  REQUIRE(parities.size() == 5);
  const double expected[] = {0.0, 1.0, 0.0, -1.0, 0.0};
  for (std::size_t i = 0; i < parities.size(); ++i) REQUIRE(std::abs(parities[i] - expected[i]) < 1e-9);
}

TEST_CASE("sweep with the minimum two steps writes two rows") {
  fs::path dir = fresh_dir("sweep_min");
  REQUIRE(run_cli("sweep --steps 2 --out " + dir.string()).exit_code == 0);
  std::istringstream csv(slurp(dir / "sweep.csv"));
  std::string line;
  std::size_t rows = 0;
  REQUIRE(std::getline(csv, line));  // header
  while (std::getline(csv, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 2);
}

TEST_CASE("sweep with too few steps is a usage error") {
  fs::path dir = fresh_dir("sweep_bad");
  auto result = run_cli("sweep --steps 0 --out " + dir.string());
  REQUIRE(result.exit_code == 1);
  REQUIRE_FALSE(fs::exists(dir / "sweep.csv"));
}

TEST_CASE("hv-sym reports the constant-strategy count and exits zero") {
  fs::path dir = fresh_dir("hv_sym");
  auto result = run_cli("hv-sym --parties 3 --domain 2 --parity 1 --out " + dir.string());
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "theorem.json"));
  REQUIRE(j["satisfying_count"] == 4);
  REQUIRE(j["total_count"] == 64);
  REQUIRE(j["all_constant"] == true);
  REQUIRE(j["counterexample"].is_null());

  fs::path pair_dir = fresh_dir("hv_sym_pair");
  result = run_cli("hv-sym --parties 2 --domain 4 --parity -1 --out " + pair_dir.string());
  REQUIRE(result.exit_code == 0);
  j = nlohmann::json::parse(slurp(pair_dir / "theorem.json"));
  REQUIRE(j["satisfying_count"] == 2);
}

TEST_CASE("hv-sym guard failure leaves no partial output") {
  fs::path dir = fresh_dir("hv_sym_guard");
  auto result = run_cli("hv-sym --parties 3 --domain 30 --parity 1 --out " + dir.string());
  REQUIRE(result.exit_code == 1);
  REQUIRE_FALSE(fs::exists(dir / "theorem.json"));
  REQUIRE_FALSE(fs::exists(dir / "manifest.json"));
}

TEST_CASE("hv-asym fair mode emits samples, exchangeability and divergence") {
  fs::path dir = fresh_dir("hv_asym");
  auto result = run_cli("hv-asym --q 0 --mode fair --n 20000 --seed 31415 --out " + dir.string());
  REQUIRE(result.exit_code == 0);

  auto j = nlohmann::json::parse(slurp(dir / "hv_report.json"));
  REQUIRE(j["q"] == 0);
  REQUIRE(j["degenerate"] == false);
  REQUIRE(j["exchangeability"]["all_pass"] == true);
  REQUIRE(j["tv_distance_vs_quantum"].get<double>() < 0.03);

  std::istringstream samples(slurp(dir / "samples.csv"));
  std::string line;
  REQUIRE(std::getline(samples, line));
  REQUIRE(line == "index,outcome");
  std::size_t rows = 0;
  while (std::getline(samples, line))
    if (!line.empty()) ++rows;
  REQUIRE(rows == 20000);
}

TEST_CASE("hv-asym with q=1 emits only odd-parity samples") {
  fs::path dir = fresh_dir("hv_asym_odd");
  REQUIRE(run_cli("hv-asym --q 1 --n 5000 --seed 8 --out " + dir.string()).exit_code == 0);
  std::istringstream samples(slurp(dir / "samples.csv"));
  std::string line;
  REQUIRE(std::getline(samples, line));  // header
  while (std::getline(samples, line)) {
    if (line.empty()) continue;
    std::string signs = line.substr(line.find(',') + 1);
    int parity = 1;
    for (char c : signs) parity *= (c == '-') ? -1 : +1;
    REQUIRE(parity == -1);
  }
}

TEST_CASE("hv-asym in tables mode skips the quantum comparison") {
  fs::path dir = fresh_dir("hv_asym_tables");
  auto result = run_cli("hv-asym --q 1 --mode tables --table-i +- --table-j ++ --n 1000 --out " +
                        dir.string());
  REQUIRE(result.exit_code == 0);
  auto j = nlohmann::json::parse(slurp(dir / "hv_report.json"));
  REQUIRE(j["tv_distance_vs_quantum"].is_null());
  REQUIRE(j["mode"] == "tables");
}

TEST_CASE("hv-asym with n=0 writes an empty sample file and a degenerate report") {
  fs::path dir = fresh_dir("hv_asym_zero");
  auto result = run_cli("hv-asym --q 0 --n 0 --out " + dir.string());
  REQUIRE(result.exit_code == 0);
  REQUIRE(slurp(dir / "samples.csv") == "index,outcome\n");
  auto j = nlohmann::json::parse(slurp(dir / "hv_report.json"));
  REQUIRE(j["degenerate"] == true);
  REQUIRE(j["exchangeability"]["degenerate"] == true);
}

TEST_CASE("invalid hv-asym flags are usage errors") {
  REQUIRE(run_cli("hv-asym --q 2 --n 10").exit_code == 1);
  REQUIRE(run_cli("hv-asym --q 0 --mode tables --table-i xy --table-j ++ --n 10 --out " +
                  fresh_dir("hv_bad").string())
              .exit_code == 1);
}

TEST_CASE("unknown subcommands and missing flags are usage errors") {
  REQUIRE(run_cli("frobnicate").exit_code == 1);
  REQUIRE(run_cli("simulate --alpha 1").exit_code == 1);
  REQUIRE(run_cli("--version").exit_code == 0);
}

TEST_CASE("the default output directory comes from the environment") {
  fs::path dir = fresh_dir("env_dir");
  auto result = run_cli("simulate --alpha 1 --beta 1 --gamma 1",
                        "TRIFERM_OUT_DIR=" + dir.string() + " ");
  REQUIRE(result.exit_code == 0);
  REQUIRE(fs::exists(dir / "distribution.json"));
}

TEST_CASE("repeated runs with identical flags produce byte-identical data files") {
  fs::path first = fresh_dir("det_a");
  fs::path second = fresh_dir("det_b");
  const std::string sim_flags = "simulate --alpha 0.7 --beta -0.3 --gamma 2.9 --out ";
  REQUIRE(run_cli(sim_flags + first.string()).exit_code == 0);
  REQUIRE(run_cli(sim_flags + second.string()).exit_code == 0);
  REQUIRE(slurp(first / "distribution.json") == slurp(second / "distribution.json"));
  REQUIRE(slurp(first / "distribution.csv") == slurp(second / "distribution.csv"));

  fs::path run_a = fresh_dir("det_c");
  fs::path run_b = fresh_dir("det_d");
  const std::string asym_flags = "hv-asym --q 1 --n 5000 --seed 999 --out ";
  REQUIRE(run_cli(asym_flags + run_a.string()).exit_code == 0);
  REQUIRE(run_cli(asym_flags + run_b.string()).exit_code == 0);
  REQUIRE(slurp(run_a / "samples.csv") == slurp(run_b / "samples.csv"));
  REQUIRE(slurp(run_a / "hv_report.json") == slurp(run_b / "hv_report.json"));
}
