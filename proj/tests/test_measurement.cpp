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

#include <cmath>
#include <map>
#include <numbers>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include "triferm/measurement.hpp"
#include "triferm/optics.hpp"

using namespace triferm;

namespace {

constexpr double kPi = std::numbers::pi;

CircuitConfig config_for_theta(double theta) {
  return CircuitConfig{theta / 3.0 + kPi / 6.0, theta / 3.0 + kPi / 6.0, theta / 3.0 + kPi / 6.0};
}

}  // namespace

TEST_CASE("even-parity entangled state yields four equiprobable outcomes") {
  OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(kPi / 2.0)));
  std::map<std::string, double> expected = {
      {"+++", 0.25}, {"+--", 0.25}, {"-+-", 0.25}, {"--+", 0.25}};
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const std::string key = outcome_to_string(dist.outcome_at(i));
    const double want = expected.count(key) ? expected[key] : 0.0;
    REQUIRE(std::abs(dist.probability(i) - want) < 1e-12);
  }
  REQUIRE(std::abs(parity_expectation(dist) - 1.0) < 1e-12);
}

TEST_CASE("odd-parity entangled state yields the complementary four outcomes") {
  OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(3.0 * kPi / 2.0)));
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const int parity = outcome_parity(dist.outcome_at(i));
    REQUIRE(std::abs(dist.probability(i) - (parity < 0 ? 0.25 : 0.0)) < 1e-12);
  }
  REQUIRE(std::abs(parity_expectation(dist) + 1.0) < 1e-12);
}

TEST_CASE("a single product term is a deterministic outcome") {
  StateVector s(3);
  s.add_scaled(BasisTerm{{ModeId::d, ModeId::e, ModeId::f}}, Cplx{1.0, 0.0});
  OutcomeDistribution dist = outcome_distribution(s);
  REQUIRE(dist.probability(Outcome{{+1, +1, +1}}) == 1.0);
  REQUIRE(std::abs(dist.total() - 1.0) < 1e-12);
}

TEST_CASE("outcome_distribution rejects non-coincident and upstream states") {
  StateVector bunched(3);
  bunched.add_scaled(BasisTerm{{ModeId::d, ModeId::dp, ModeId::f}}, Cplx{1.0, 0.0});
  REQUIRE_THROWS_AS(outcome_distribution(bunched), std::invalid_argument);

  StateVector upstream(3);
  upstream.add_scaled(BasisTerm{{ModeId::a, ModeId::b, ModeId::c}}, Cplx{1.0, 0.0});
  REQUIRE_THROWS_AS(outcome_distribution(upstream), std::invalid_argument);
}

TEST_CASE("parity expectation interpolates as sin theta") {
  OutcomeDistribution quarter = outcome_distribution(build_final_state(config_for_theta(kPi / 4.0)));
  REQUIRE(std::abs(parity_expectation(quarter) - std::sin(kPi / 4.0)) < 1e-12);

  for (int k = 0; k < 16; ++k) {
    const double theta = 2.0 * kPi * k / 16.0;
    OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(theta)));
    REQUIRE(std::abs(dist.total() - 1.0) < 1e-12);
    REQUIRE(std::abs(parity_expectation(dist) - std::sin(theta)) < 1e-12);
  }
}

TEST_CASE("every station's marginal stays one half across the phase grid") {
  for (int k = 0; k < 16; ++k) {
    const double theta = 2.0 * kPi * k / 16.0;
    OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(theta)));
    for (std::size_t station = 0; station < 3; ++station)
      REQUIRE(std::abs(station_marginal_plus(dist, station) - 0.5) < 1e-12);
  }
}

TEST_CASE("outcome indexing round-trips and orders '+' before '-'") {
  OutcomeDistribution dist(3);
  REQUIRE(OutcomeDistribution::index_of(Outcome{{+1, +1, +1}}) == 0);
  REQUIRE(OutcomeDistribution::index_of(Outcome{{-1, -1, -1}}) == 7);
  REQUIRE(OutcomeDistribution::index_of(Outcome{{+1, -1, +1}}) == 2);
  for (std::size_t i = 0; i < 8; ++i)
    REQUIRE(OutcomeDistribution::index_of(dist.outcome_at(i)) == i);
  REQUIRE(outcome_to_string(dist.outcome_at(5)) == "-+-");
  REQUIRE(outcome_from_string("-+-") == dist.outcome_at(5));
  REQUIRE_THROWS_AS(outcome_from_string("+0-"), std::invalid_argument);
}

TEST_CASE("sampling with n=0 returns nothing") {
  OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(kPi / 2.0)));
  REQUIRE(sample(dist, 1, 0).empty());
}

TEST_CASE("samples from the even-parity state all have parity +1 and uniform frequencies") {
  OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(kPi / 2.0)));
  const std::size_t n = 100000;
  auto draws = sample(dist, 20260809, n);
  REQUIRE(draws.size() == n);

  std::map<std::string, std::size_t> counts;
  for (const auto& o : draws) {
    REQUIRE(outcome_parity(o) == +1);
    ++counts[outcome_to_string(o)];
  }
  REQUIRE(counts.size() == 4);
  for (const auto& [key, count] : counts)
    REQUIRE(std::abs(static_cast<double>(count) / n - 0.25) < 0.01);
}

TEST_CASE("sampling is reproducible from the seed") {
  OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(1.0)));
  auto first = sample(dist, 777, 512);
  auto second = sample(dist, 777, 512);
  REQUIRE(first == second);
  auto other = sample(dist, 778, 512);
  REQUIRE(first != other);
}

TEST_CASE("empirical distributions come back normalized") {
  OutcomeDistribution dist = outcome_distribution(build_final_state(config_for_theta(0.3)));
  auto draws = sample(dist, 5, 4096);
  OutcomeDistribution empirical = OutcomeDistribution::from_samples(draws, 3);
  REQUIRE(std::abs(empirical.total() - 1.0) < 1e-12);
  REQUIRE(total_variation(empirical, dist) < 0.05);
}
