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

#include <bit>
#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "triferm/rng.hpp"
#include "triferm/state.hpp"

namespace triferm {

/// One detector result per station: +1 for the unprimed output, -1 for the
/// primed one.
struct Outcome {
  std::vector<int> signs;

  auto operator<=>(const Outcome& other) const = default;
};

inline int outcome_parity(const Outcome& o) {
  int p = 1;
  for (int s : o.signs) p *= s;
  return p;
}

inline std::string outcome_to_string(const Outcome& o) {
  std::string s;
  s.reserve(o.signs.size());
  for (int v : o.signs) s += (v > 0) ? '+' : '-';
  return s;
}

inline Outcome outcome_from_string(std::string_view s) {
  Outcome o;
  o.signs.reserve(s.size());
  for (char c : s) {
    if (c == '+')
      o.signs.push_back(+1);
    else if (c == '-')
      o.signs.push_back(-1);
    else
      throw std::invalid_argument("outcome_from_string: expected only '+' and '-'");
  }
  return o;
}

/// Probability table over the 2^N sign tuples, indexed so that all-plus is 0
/// and the leftmost station is the most significant bit ('+' sorts before
/// '-', matching the string form).
class OutcomeDistribution {
 public:
  explicit OutcomeDistribution(std::size_t station_count)
      : station_count_(station_count), probs_(std::size_t{1} << station_count, 0.0) {
    if (station_count == 0 || station_count > 20)
      throw std::invalid_argument("OutcomeDistribution: station count out of range");
  }

  static std::size_t index_of(const Outcome& o) {
    std::size_t idx = 0;
    for (int s : o.signs) idx = (idx << 1) | (s < 0 ? 1u : 0u);
    return idx;
  }

  Outcome outcome_at(std::size_t index) const {
    Outcome o;
    o.signs.resize(station_count_);
    for (std::size_t s = 0; s < station_count_; ++s)
      o.signs[s] = (index >> (station_count_ - 1 - s)) & 1u ? -1 : +1;
    return o;
  }

  std::size_t station_count() const { return station_count_; }
  std::size_t size() const { return probs_.size(); }

  double probability(std::size_t index) const { return probs_.at(index); }
  double probability(const Outcome& o) const { return probs_.at(index_of(o)); }

  void set_probability(std::size_t index, double p) {
    if (!(p >= 0.0) || !(p <= 1.0 + 1e-12)) throw std::invalid_argument("probability out of [0,1]");
    probs_.at(index) = p;
  }

  double total() const {
    double t = 0.0;
    for (double p : probs_) t += p;
    return t;
  }

  /// Empirical distribution from a sample set; all-zero when samples is empty.
  static OutcomeDistribution from_samples(std::span<const Outcome> samples, std::size_t station_count) {
    OutcomeDistribution dist(station_count);
    if (samples.empty()) return dist;
    std::vector<std::uint64_t> counts(dist.size(), 0);
    for (const auto& o : samples) {
      if (o.signs.size() != station_count)
        throw std::invalid_argument("from_samples: outcome width mismatch");
      ++counts[index_of(o)];
    }
    for (std::size_t i = 0; i < counts.size(); ++i)
      dist.probs_[i] = static_cast<double>(counts[i]) / static_cast<double>(samples.size());
    return dist;
  }

 private:
  std::size_t station_count_;
  std::vector<double> probs_;
};

/// Squared amplitudes of a unit-norm coincidence state over d..f'. Every term
/// must place exactly one particle at each station; anything else means
/// post-selection was skipped.
inline OutcomeDistribution outcome_distribution(const StateVector& state) {
  OutcomeDistribution dist(state.particle_count());
  std::vector<double> probs(dist.size(), 0.0);
  for (const auto& [term, amp] : state.terms()) {
    Outcome o;
    o.signs.assign(state.particle_count(), 0);
    for (ModeId m : term.modes) {
      auto station = detector_station(m);
      if (!station) throw std::invalid_argument("outcome_distribution: mode " + std::string(mode_name(m)) +
                                                " is not a detected output");
      if (static_cast<std::size_t>(*station) >= o.signs.size())
        throw std::invalid_argument("outcome_distribution: station index exceeds the particle count");
      if (o.signs[*station] != 0)
        throw std::invalid_argument("outcome_distribution: two particles at one station (state not post-selected)");
      o.signs[*station] = detector_sign(m);
    }
    probs[OutcomeDistribution::index_of(o)] += std::norm(amp);
  }
  for (std::size_t i = 0; i < probs.size(); ++i) dist.set_probability(i, probs[i]);
  return dist;
}

/// Expected product of the station signs, in [-1, 1].
inline double parity_expectation(const OutcomeDistribution& dist) {
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    int parity = (std::popcount(i) % 2 == 0) ? +1 : -1;
    total += parity * dist.probability(i);
  }
  return total;
}

/// P(station's sign = +1), marginalizing the others.
inline double station_marginal_plus(const OutcomeDistribution& dist, std::size_t station) {
  if (station >= dist.station_count()) throw std::invalid_argument("station index out of range");
  double total = 0.0;
  const std::size_t bit = dist.station_count() - 1 - station;
  for (std::size_t i = 0; i < dist.size(); ++i)
    if (!((i >> bit) & 1u)) total += dist.probability(i);
  return total;
}

/// 0.5 * sum |p - q| over outcomes.
inline double total_variation(const OutcomeDistribution& a, const OutcomeDistribution& b) {
  if (a.station_count() != b.station_count())
    throw std::invalid_argument("total_variation: station counts differ");
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::abs(a.probability(i) - b.probability(i));
  return 0.5 * sum;
}

/// n i.i.d. draws by inverse-CDF walk over the canonical outcome order, fed
/// by a fresh SplitMix64 stream. Same seed, same sequence.
inline std::vector<Outcome> sample(const OutcomeDistribution& dist, std::uint64_t seed, std::size_t n) {
  const double total = dist.total();
  if (n > 0 && std::abs(total - 1.0) > 1e-9)
    throw std::invalid_argument("sample: distribution does not sum to 1");
  SplitMix64 rng(seed);
  std::vector<Outcome> out;
  out.reserve(n);
  for (std::size_t k = 0; k < n; ++k) {
    double u = rng.next_double();
    double cum = 0.0;
    std::size_t idx = dist.size() - 1;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      cum += dist.probability(i);
      if (u < cum) {
        idx = i;
        break;
      }
    }
    out.push_back(dist.outcome_at(idx));
  }
  return out;
}

}  // namespace triferm
