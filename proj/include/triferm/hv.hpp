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

#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "triferm/measurement.hpp"
#include "triferm/optics.hpp"
#include "triferm/rng.hpp"

namespace triferm {

/// The parity value the coincidence statistics enforce: +1 (q=0, phase pi/2)
/// or -1 (q=1, phase 3pi/2). Stored as q so value = (-1)^q by construction.
class ParityTarget {
 public:
  static ParityTarget from_q(int q) {
    if (q != 0 && q != 1) throw std::invalid_argument("ParityTarget: q must be 0 or 1");
    return ParityTarget(q);
  }
  static ParityTarget from_value(int value) {
    if (value != +1 && value != -1) throw std::invalid_argument("ParityTarget: value must be +1 or -1");
    return ParityTarget(value == +1 ? 0 : 1);
  }
  static ParityTarget even() { return ParityTarget(0); }
  static ParityTarget odd() { return ParityTarget(1); }

  int q() const { return q_; }
  int value() const { return q_ == 0 ? +1 : -1; }

 private:
  explicit ParityTarget(int q) : q_(q) {}
  int q_;
};

/// One party's deterministic response over its finite hidden-value domain:
/// signs[v] is the answer the party gives when its hidden value is v.
struct ResponseTable {
  std::vector<int> signs;

  void validate() const {
    if (signs.empty()) throw std::invalid_argument("ResponseTable: empty domain");
    for (int s : signs)
      if (s != +1 && s != -1) throw std::invalid_argument("ResponseTable: entries must be +1 or -1");
  }

  bool is_constant() const {
    return std::all_of(signs.begin(), signs.end(), [&](int s) { return s == signs.front(); });
  }
};

/// Fixed per run: the macroscopic settings and the opaque shared label the
/// responses may also depend on. No distribution is placed over the label;
/// everything below is evaluated at one fixed context.
struct StrategyContext {
  CircuitConfig settings{};
  std::uint64_t shared_label = 0;
};

/// A full assignment of response functions, one per party, at a fixed
/// context. The parties' hidden values vary independently over their
/// domains; the context does not.
struct SymmetricStrategy {
  std::vector<ResponseTable> responses;
  StrategyContext context{};

  void validate() const {
    if (responses.empty()) throw std::invalid_argument("SymmetricStrategy: no parties");
    for (const auto& r : responses) r.validate();
  }
};

/// True iff the product of the parties' answers equals target.value() for
/// EVERY combination of hidden values — the hidden values are independent,
/// so each may be replaced freely without touching the others.
inline bool check_symmetric_strategy(const SymmetricStrategy& strategy, ParityTarget target) {
  strategy.validate();
  const std::size_t parties = strategy.responses.size();
  std::vector<std::size_t> value(parties, 0);
  while (true) {
    int product = 1;
    for (std::size_t i = 0; i < parties; ++i) product *= strategy.responses[i].signs[value[i]];
    if (product != target.value()) return false;
    std::size_t i = 0;
    for (; i < parties; ++i) {
      if (++value[i] < strategy.responses[i].signs.size()) break;
      value[i] = 0;
    }
    if (i == parties) return true;
  }
}

namespace detail {

/// Total strategies is 2^(sum of domain sizes); enforce the desk-scale guard.
inline std::size_t guarded_table_bits(std::span<const std::size_t> domain_sizes) {
  if (domain_sizes.empty()) throw std::invalid_argument("no parties");
  std::size_t bits = 0;
  for (std::size_t s : domain_sizes) {
    if (s == 0) throw std::invalid_argument("domain size must be positive");
    bits += s;
  }
  if (bits > 24)
    throw std::invalid_argument("strategy space exceeds the 2^24 enumeration guard");
  return bits;
}

inline SymmetricStrategy decode_strategy(std::uint64_t code, std::span<const std::size_t> domain_sizes,
                                         const StrategyContext& context) {
  SymmetricStrategy s;
  s.context = context;
  s.responses.reserve(domain_sizes.size());
  std::size_t offset = 0;
  for (std::size_t size : domain_sizes) {
    ResponseTable table;
    table.signs.reserve(size);
    for (std::size_t v = 0; v < size; ++v)
      table.signs.push_back(((code >> (offset + v)) & 1u) ? -1 : +1);
    offset += size;
    s.responses.push_back(std::move(table));
  }
  return s;
}

}  // namespace detail

/// Exhaustively scans all 2^(sum |domains|) response-table assignments and
/// returns exactly those that pass check_symmetric_strategy.
inline std::vector<SymmetricStrategy> enumerate_strategies(std::span<const std::size_t> domain_sizes,
                                                           ParityTarget target,
                                                           const StrategyContext& context = {}) {
  const std::size_t bits = detail::guarded_table_bits(domain_sizes);
  std::vector<SymmetricStrategy> satisfying;
  for (std::uint64_t code = 0; code < (std::uint64_t{1} << bits); ++code) {
    SymmetricStrategy s = detail::decode_strategy(code, domain_sizes, context);
    if (check_symmetric_strategy(s, target)) satisfying.push_back(std::move(s));
  }
  return satisfying;
}

/// Outcome of the exhaustive scan: if all_constant, every satisfying strategy
/// ignores its hidden values (answers are functions of the context alone).
struct TheoremReport {
  std::vector<std::size_t> domain_sizes;
  int target_value = +1;
  std::uint64_t total_count = 0;
  std::uint64_t satisfying_count = 0;
  bool all_constant = true;
  std::optional<SymmetricStrategy> counterexample;  // first non-constant satisfying strategy

  bool holds() const { return all_constant; }
};

/// Scans the full strategy space and reports whether any satisfying strategy
/// actually uses its hidden values. The expected answer is no: a lone
/// hidden-value flip at one party would flip the product, so only constant
/// tables can keep the parity pinned.
inline TheoremReport verify_theorem(std::span<const std::size_t> domain_sizes, ParityTarget target,
                                    const StrategyContext& context = {}) {
  const std::size_t bits = detail::guarded_table_bits(domain_sizes);
  TheoremReport report;
  report.domain_sizes.assign(domain_sizes.begin(), domain_sizes.end());
  report.target_value = target.value();
  report.total_count = std::uint64_t{1} << bits;
  for (std::uint64_t code = 0; code < report.total_count; ++code) {
    SymmetricStrategy s = detail::decode_strategy(code, domain_sizes, context);
    if (!check_symmetric_strategy(s, target)) continue;
    ++report.satisfying_count;
    bool constant = std::all_of(s.responses.begin(), s.responses.end(),
                                [](const ResponseTable& t) { return t.is_constant(); });
    if (!constant && !report.counterexample) {
      report.all_constant = false;
      report.counterexample = std::move(s);
    }
  }
  return report;
}

/// Role assignment for the asymmetric model: two stations answer on their
/// own (from local tables or fair coins), the third answers whatever the
/// parity constraint demands. Which stations are "independent" is an input;
/// the model itself offers no physical criterion for choosing them.
struct AsymmetricConfig {
  std::array<int, 2> independent{0, 1};
  int enforced = 2;
  int q = 0;
  /// Local response tables for the two independent stations; hidden values
  /// are drawn uniformly over each table's domain. Empty means fair-coin
  /// mode: the answers are pure coin flips, no hidden values at all.
  std::optional<std::array<ResponseTable, 2>> tables;

  bool fair_coin_mode() const { return !tables.has_value(); }

  static AsymmetricConfig fair(int q_value) {
    AsymmetricConfig cfg;
    cfg.q = q_value;
    cfg.validate();
    return cfg;
  }

  void validate() const {
    std::array<int, 3> stations{independent[0], independent[1], enforced};
    std::array<int, 3> sorted = stations;
    std::sort(sorted.begin(), sorted.end());
    if (sorted != std::array<int, 3>{0, 1, 2})
      throw std::invalid_argument("AsymmetricConfig: stations must partition {0,1,2}");
    if (q != 0 && q != 1) throw std::invalid_argument("AsymmetricConfig: q must be 0 or 1");
    if (tables) {
      (*tables)[0].validate();
      (*tables)[1].validate();
    }
  }
};

struct AsymmetricRun {
  std::vector<Outcome> samples;
  std::vector<std::uint64_t> outcome_counts;  // indexed like OutcomeDistribution
};

/// Monte-Carlo run of the asymmetric model. Every emitted outcome satisfies
/// the parity constraint exactly; that is the defining equation, not a
/// statistical tendency.
inline AsymmetricRun run_asymmetric(const AsymmetricConfig& cfg, std::uint64_t seed, std::size_t n) {
  cfg.validate();
  SplitMix64 rng(seed);
  AsymmetricRun run;
  run.samples.reserve(n);
  run.outcome_counts.assign(8, 0);
  const int parity = (cfg.q == 0) ? +1 : -1;
  for (std::size_t k = 0; k < n; ++k) {
    int r_i, r_j;
    if (cfg.fair_coin_mode()) {
      r_i = rng.next_sign();
      r_j = rng.next_sign();
    } else {
      const auto& [table_i, table_j] = *cfg.tables;
      r_i = table_i.signs[rng.next_below(table_i.signs.size())];
      r_j = table_j.signs[rng.next_below(table_j.signs.size())];
    }
    Outcome o;
    o.signs.assign(3, 0);
    o.signs[cfg.independent[0]] = r_i;
    o.signs[cfg.independent[1]] = r_j;
    o.signs[cfg.enforced] = parity * r_i * r_j;
    if (outcome_parity(o) != parity) throw std::logic_error("run_asymmetric: parity constraint violated");
    ++run.outcome_counts[OutcomeDistribution::index_of(o)];
    run.samples.push_back(std::move(o));
  }
  return run;
}

struct PairUniformity {
  std::array<int, 2> pair;       // the stations treated as independent
  double max_abs_deviation;      // max |freq - 1/4| over the four sign pairs
  double bound;                  // 3 sigma binomial bound, 3*sqrt(3/16/n)
  bool uniform_ok;
  bool enforced_ok;              // third sign == (-1)^q * product, every sample
};

struct ExchangeabilityReport {
  std::size_t sample_count = 0;
  int q = 0;
  bool degenerate = false;  // no samples, uniformity test undefined
  std::vector<PairUniformity> assignments;
  bool all_pass = false;
};

/// Tests the closing claim of the asymmetric model: the samples cannot tell
/// which two stations were the "independent" ones. For each of the three
/// role assignments the pair's joint distribution must be uniform over the
/// four sign pairs (3 sigma) and the remaining station must equal (-1)^q
/// times their product — which the parity constraint already guarantees.
inline ExchangeabilityReport exchangeability_report(std::span<const Outcome> samples, int q) {
  if (q != 0 && q != 1) throw std::invalid_argument("exchangeability_report: q must be 0 or 1");
  const int parity = (q == 0) ? +1 : -1;
  for (const auto& o : samples) {
    if (o.signs.size() != 3) throw std::invalid_argument("exchangeability_report: need 3-station outcomes");
    if (outcome_parity(o) != parity)
      throw std::invalid_argument("exchangeability_report: sample violates the parity constraint");
  }

  ExchangeabilityReport report;
  report.sample_count = samples.size();
  report.q = q;
  if (samples.empty()) {
    report.degenerate = true;
    return report;
  }

  const double n = static_cast<double>(samples.size());
  const double bound = 3.0 * std::sqrt(0.25 * 0.75 / n);
  constexpr std::array<std::array<int, 2>, 3> pairs{{{0, 1}, {0, 2}, {1, 2}}};
  report.all_pass = true;
  for (const auto& pair : pairs) {
    const int third = 3 - pair[0] - pair[1];
    std::array<std::uint64_t, 4> counts{};
    bool enforced_ok = true;
    for (const auto& o : samples) {
      int si = o.signs[pair[0]], sj = o.signs[pair[1]];
      counts[(si < 0 ? 2 : 0) + (sj < 0 ? 1 : 0)]++;
      if (o.signs[third] != parity * si * sj) enforced_ok = false;
    }
    double max_dev = 0.0;
    for (auto c : counts) max_dev = std::max(max_dev, std::abs(static_cast<double>(c) / n - 0.25));
    bool uniform_ok = max_dev <= bound;
    report.assignments.push_back({pair, max_dev, bound, uniform_ok, enforced_ok});
    if (!uniform_ok || !enforced_ok) report.all_pass = false;
  }
  return report;
}

struct DivergenceReport {
  double tv_distance = 1.0;
  bool degenerate = false;  // n == 0
  std::size_t sample_count = 0;
};

/// Total-variation distance between the asymmetric model's empirical
/// distribution and the circuit's exact one. Defined only at the two phases
/// where the parity constraint exists, so the circuit phase must match q.
inline DivergenceReport compare_to_quantum(const AsymmetricConfig& cfg, const CircuitConfig& config,
                                           std::size_t n, std::uint64_t seed) {
  cfg.validate();
  config.validate();
  const double theta = reduce_angle(config.theta());
  const double expected = (cfg.q == 0) ? std::numbers::pi / 2.0 : 3.0 * std::numbers::pi / 2.0;
  if (std::abs(theta - expected) > 1e-9)
    throw std::invalid_argument("compare_to_quantum: circuit phase does not match q");

  DivergenceReport report;
  report.sample_count = n;
  if (n == 0) {
    report.degenerate = true;
    report.tv_distance = 1.0;
    return report;
  }
  AsymmetricRun run = run_asymmetric(cfg, seed, n);
  OutcomeDistribution empirical = OutcomeDistribution::from_samples(run.samples, 3);
  OutcomeDistribution quantum = outcome_distribution(build_final_state(config));
  report.tv_distance = total_variation(empirical, quantum);
  return report;
}

}  // namespace triferm
