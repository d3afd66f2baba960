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

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "triferm/io.hpp"
#include "triferm/measurement.hpp"
#include "triferm/optics.hpp"
#include "triferm/version.hpp"

namespace fs = std::filesystem;
using namespace triferm;

namespace {

constexpr double kPi = std::numbers::pi;

// Exit codes: 0 success / theorem holds, 1 usage or I/O error,
// 2 theorem counterexample found.
constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCounterexample = 2;

void write_file_atomic(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << content;
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

struct OutputSet {
  fs::path dir;
  std::vector<std::string> written;

  void emit(const std::string& name, const std::string& content) {
    fs::path path = dir / name;
    write_file_atomic(path, content);
    written.push_back(path.string());
  }
};

void write_manifest(OutputSet& outputs, const std::string& command, Json parameters,
                    const Json& seed, std::chrono::steady_clock::time_point started) {
  const auto elapsed =
      std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - started);
  Json manifest{{"tool", std::string(kToolName)},
                {"version", std::string(kToolVersion)},
                {"command", command},
                {"parameters", std::move(parameters)},
                {"seed", seed},
                {"outputs", outputs.written},
                {"duration_ms", elapsed.count()}};
  outputs.emit("manifest.json", manifest.dump(2) + "\n");
}

struct SimulateArgs {
  double alpha = 0.0, beta = 0.0, gamma = 0.0;
  bool degrees = false;
  std::string out_dir = ".";
};

int run_simulate(const SimulateArgs& args) {
  const auto started = std::chrono::steady_clock::now();
  const double scale = args.degrees ? kPi / 180.0 : 1.0;
  CircuitConfig config{args.alpha * scale, args.beta * scale, args.gamma * scale};
  config.validate();

  auto selected = postselect_coincidence(build_prepared_state(config));
  StateVector final_state = apply_mode_map(selected.state, detection_layer());
  OutcomeDistribution dist = outcome_distribution(final_state);
  const double parity = parity_expectation(dist);
  const double theta = reduce_angle(config.theta());

  Json j{{"tool", std::string(kToolName)},
         {"version", std::string(kToolVersion)},
         {"alpha", config.alpha},
         {"beta", config.beta},
         {"gamma", config.gamma},
         {"theta", theta},
         {"keep_probability", selected.keep_probability},
         {"parity_expectation", parity}};
  j.update(distribution_to_json(dist));

  OutputSet outputs{args.out_dir};
  outputs.emit("distribution.json", j.dump(2) + "\n");
  outputs.emit("distribution.csv", distribution_to_csv(dist));
  write_manifest(outputs, "simulate",
                 Json{{"alpha", args.alpha},
                      {"beta", args.beta},
                      {"gamma", args.gamma},
                      {"degrees", args.degrees},
                      {"out", args.out_dir}},
                 Json(nullptr), started);

  std::cout << "theta=" << format_double(theta)
            << " keep_probability=" << format_double(selected.keep_probability)
            << " parity_expectation=" << format_double(parity) << "\n";
  for (const auto& path : outputs.written) std::cout << "wrote " << path << "\n";
  return kExitOk;
}

struct SweepArgs {
  int steps = 0;
  std::string out_dir = ".";
};

int run_sweep(const SweepArgs& args) {
  const auto started = std::chrono::steady_clock::now();
  std::string csv = "theta,parity";
  OutcomeDistribution header_probe(3);
  for (std::size_t i = 0; i < header_probe.size(); ++i)
    csv += ",p_" + outcome_to_string(header_probe.outcome_at(i));
  csv += '\n';

  for (int k = 0; k < args.steps; ++k) {
    const double theta = 2.0 * kPi * k / (args.steps - 1);
    CircuitConfig config{theta + kPi / 2.0, 0.0, 0.0};
    OutcomeDistribution dist = outcome_distribution(build_final_state(config));
    csv += format_double(theta);
    csv += ',';
    csv += format_double(parity_expectation(dist));
    for (std::size_t i = 0; i < dist.size(); ++i) {
      csv += ',';
      csv += format_double(dist.probability(i));
    }
    csv += '\n';
  }

  OutputSet outputs{args.out_dir};
  outputs.emit("sweep.csv", csv);
  write_manifest(outputs, "sweep", Json{{"steps", args.steps}, {"out", args.out_dir}}, Json(nullptr),
                 started);
  std::cout << "wrote " << outputs.written.front() << " (" << args.steps << " rows)\n";
  return kExitOk;
}

struct HvSymArgs {
  int parties = 3;
  int domain = 2;
  int parity = +1;
  std::string out_dir = ".";
};

int run_hv_sym(const HvSymArgs& args) {
  const auto started = std::chrono::steady_clock::now();
  std::vector<std::size_t> sizes(static_cast<std::size_t>(args.parties),
                                 static_cast<std::size_t>(args.domain));
  // verify_theorem enforces the enumeration guard before anything is written
  TheoremReport report = verify_theorem(sizes, ParityTarget::from_value(args.parity));

  Json j{{"parties", args.parties}, {"domain_size", args.domain}};
  j.update(theorem_report_to_json(report));

  OutputSet outputs{args.out_dir};
  outputs.emit("theorem.json", j.dump(2) + "\n");
  write_manifest(outputs, "hv-sym",
                 Json{{"parties", args.parties},
                      {"domain", args.domain},
                      {"parity", args.parity},
                      {"out", args.out_dir}},
                 Json(nullptr), started);

  std::cout << "satisfying=" << report.satisfying_count << " of " << report.total_count
            << " all_constant=" << (report.all_constant ? "true" : "false") << "\n";
  for (const auto& path : outputs.written) std::cout << "wrote " << path << "\n";
  return report.holds() ? kExitOk : kExitCounterexample;
}

struct HvAsymArgs {
  int q = 0;
  std::string mode = "fair";
  std::size_t n = 100000;
  std::uint64_t seed = 12345;
  std::string independent = "DE";
  std::string table_i, table_j;
  std::string out_dir = ".";
};

ResponseTable parse_table(const std::string& signs, const char* flag) {
  if (signs.empty()) throw std::invalid_argument(std::string(flag) + " must be a nonempty +/- string");
  ResponseTable table;
  for (char c : signs) {
    if (c == '+')
      table.signs.push_back(+1);
    else if (c == '-')
      table.signs.push_back(-1);
    else
      throw std::invalid_argument(std::string(flag) + " must contain only '+' and '-'");
  }
  return table;
}

int run_hv_asym(const HvAsymArgs& args) {
  const auto started = std::chrono::steady_clock::now();

  AsymmetricConfig cfg;
  cfg.q = args.q;
  if (args.independent == "DE")
    cfg.independent = {0, 1}, cfg.enforced = 2;
  else if (args.independent == "DF")
    cfg.independent = {0, 2}, cfg.enforced = 1;
  else
    cfg.independent = {1, 2}, cfg.enforced = 0;
  if (args.mode == "tables")
    cfg.tables = {parse_table(args.table_i, "--table-i"), parse_table(args.table_j, "--table-j")};
  cfg.validate();

  AsymmetricRun run = run_asymmetric(cfg, args.seed, args.n);
  ExchangeabilityReport exchangeability = exchangeability_report(run.samples, args.q);

  Json report{{"q", args.q},
              {"mode", args.mode},
              {"n", args.n},
              {"seed", args.seed},
              {"independent", cfg.independent},
              {"enforced", cfg.enforced},
              {"degenerate", args.n == 0}};
  report["exchangeability"] = exchangeability_to_json(exchangeability);
  if (cfg.fair_coin_mode()) {
    const double angle = (args.q == 0) ? kPi / 3.0 : 2.0 * kPi / 3.0;
    DivergenceReport divergence = compare_to_quantum(cfg, CircuitConfig{angle, angle, angle},
                                                     args.n, args.seed);
    report["tv_distance_vs_quantum"] = divergence.tv_distance;
  } else {
    report["tv_distance_vs_quantum"] = nullptr;
  }

  OutputSet outputs{args.out_dir};
  outputs.emit("samples.csv", samples_to_csv(run.samples));
  outputs.emit("hv_report.json", report.dump(2) + "\n");
  write_manifest(outputs, "hv-asym",
                 Json{{"q", args.q},
                      {"mode", args.mode},
                      {"n", args.n},
                      {"independent", args.independent},
                      {"table_i", args.table_i},
                      {"table_j", args.table_j},
                      {"out", args.out_dir}},
                 Json(args.seed), started);

  std::cout << "n=" << args.n << " all_pass="
            << (exchangeability.all_pass ? "true" : (exchangeability.degenerate ? "degenerate" : "false"))
            << "\n";
  for (const auto& path : outputs.written) std::cout << "wrote " << path << "\n";
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-source fermionic interferometer: parity correlations and hidden-variable tests"};
  app.set_version_flag("--version", std::string(kToolVersion));
  app.require_subcommand(1);

  SimulateArgs sim_args;
  auto* sim = app.add_subcommand("simulate", "Outcome distribution for one phase setting");
  sim->add_option("--alpha", sim_args.alpha, "Phase shift on arm a'")->required();
  sim->add_option("--beta", sim_args.beta, "Phase shift on arm b'")->required();
  sim->add_option("--gamma", sim_args.gamma, "Phase shift on arm c'")->required();
  sim->add_flag("--degrees", sim_args.degrees, "Interpret angles in degrees");
  sim->add_option("--out", sim_args.out_dir, "Output directory")->envname("TRIFERM_OUT_DIR");

  SweepArgs sweep_args;
  auto* sweep = app.add_subcommand("sweep", "Parity expectation over a uniform phase grid");
  sweep->add_option("--steps", sweep_args.steps, "Grid points over [0, 2pi], inclusive")
      ->required()
      ->check(CLI::Range(2, 1000000));
  sweep->add_option("--out", sweep_args.out_dir, "Output directory")->envname("TRIFERM_OUT_DIR");

  HvSymArgs sym_args;
  auto* sym = app.add_subcommand("hv-sym", "Exhaustive check that per-particle hidden values are inert");
  sym->add_option("--parties", sym_args.parties, "Number of stations")->required()->check(CLI::Range(1, 24));
  sym->add_option("--domain", sym_args.domain, "Hidden-value domain size per party")
      ->required()
      ->check(CLI::Range(1, 64));
  sym->add_option("--parity", sym_args.parity, "Enforced parity, +1 or -1")
      ->required()
      ->check(CLI::IsMember({1, -1}));
  sym->add_option("--out", sym_args.out_dir, "Output directory")->envname("TRIFERM_OUT_DIR");

  HvAsymArgs asym_args;
  auto* asym = app.add_subcommand("hv-asym", "Monte-Carlo run of the two-independent-stations model");
  asym->add_option("--q", asym_args.q, "Parity exponent: 0 (even) or 1 (odd)")
      ->required()
      ->check(CLI::IsMember({0, 1}));
  asym->add_option("--mode", asym_args.mode, "fair (coin flips) or tables (local response tables)")
      ->check(CLI::IsMember({"fair", "tables"}));
  asym->add_option("--n", asym_args.n, "Number of trials");
  asym->add_option("--seed", asym_args.seed, "RNG seed");
  asym->add_option("--independent", asym_args.independent, "Which stations answer independently")
      ->check(CLI::IsMember({"DE", "DF", "EF"}));
  asym->add_option("--table-i", asym_args.table_i, "Response table for the first independent station");
  asym->add_option("--table-j", asym_args.table_j, "Response table for the second independent station");
  asym->add_option("--out", asym_args.out_dir, "Output directory")->envname("TRIFERM_OUT_DIR");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (sim->parsed()) return run_simulate(sim_args);
    if (sweep->parsed()) return run_sweep(sweep_args);
    if (sym->parsed()) return run_hv_sym(sym_args);
    if (asym->parsed()) return run_hv_asym(asym_args);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
