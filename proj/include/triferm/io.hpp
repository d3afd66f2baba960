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

#include <cstdio>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "triferm/hv.hpp"
#include "triferm/measurement.hpp"

namespace triferm {

using Json = nlohmann::ordered_json;

/// Shortest form that round-trips a double exactly.
inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

inline Json distribution_to_json(const OutcomeDistribution& dist) {
  Json probs = Json::object();
  for (std::size_t i = 0; i < dist.size(); ++i)
    probs[outcome_to_string(dist.outcome_at(i))] = dist.probability(i);
  return Json{{"stations", dist.station_count()}, {"probabilities", std::move(probs)}};
}

inline OutcomeDistribution distribution_from_json(const Json& j) {
  OutcomeDistribution dist(j.at("stations").get<std::size_t>());
  for (const auto& [key, value] : j.at("probabilities").items()) {
    Outcome o = outcome_from_string(key);
    if (o.signs.size() != dist.station_count())
      throw std::invalid_argument("distribution_from_json: outcome width mismatch");
    dist.set_probability(OutcomeDistribution::index_of(o), value.get<double>());
  }
  return dist;
}

inline std::string distribution_to_csv(const OutcomeDistribution& dist) {
  std::string out = "outcome,probability\n";
  for (std::size_t i = 0; i < dist.size(); ++i) {
    out += outcome_to_string(dist.outcome_at(i));
    out += ',';
    out += format_double(dist.probability(i));
    out += '\n';
  }
  return out;
}

inline OutcomeDistribution distribution_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "outcome,probability")
    throw std::invalid_argument("distribution_from_csv: missing header");
  std::vector<std::pair<Outcome, double>> rows;
  std::size_t stations = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("distribution_from_csv: malformed row");
    Outcome o = outcome_from_string(line.substr(0, comma));
    stations = o.signs.size();
    rows.emplace_back(std::move(o), std::stod(line.substr(comma + 1)));
  }
  if (rows.empty()) throw std::invalid_argument("distribution_from_csv: no rows");
  OutcomeDistribution dist(stations);
  for (const auto& [o, p] : rows) dist.set_probability(OutcomeDistribution::index_of(o), p);
  return dist;
}

inline std::string samples_to_csv(std::span<const Outcome> samples) {
  std::string out = "index,outcome\n";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += outcome_to_string(samples[i]);
    out += '\n';
  }
  return out;
}

inline std::vector<Outcome> samples_from_csv(std::string_view csv) {
  std::istringstream in{std::string(csv)};
  std::string line;
  if (!std::getline(in, line) || line != "index,outcome")
    throw std::invalid_argument("samples_from_csv: missing header");
  std::vector<Outcome> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto comma = line.find(',');
    if (comma == std::string::npos) throw std::invalid_argument("samples_from_csv: malformed row");
    out.push_back(outcome_from_string(line.substr(comma + 1)));
  }
  return out;
}

inline Json strategy_to_json(const SymmetricStrategy& s) {
  Json tables = Json::array();
  for (const auto& r : s.responses) tables.push_back(r.signs);
  return Json{{"responses", std::move(tables)}};
}

inline Json theorem_report_to_json(const TheoremReport& report) {
  Json j{{"domain_sizes", report.domain_sizes},
         {"parity_target", report.target_value},
         {"total_count", report.total_count},
         {"satisfying_count", report.satisfying_count},
         {"all_constant", report.all_constant}};
  j["counterexample"] = report.counterexample ? strategy_to_json(*report.counterexample) : Json(nullptr);
  return j;
}

inline Json exchangeability_to_json(const ExchangeabilityReport& report) {
  Json assignments = Json::array();
  for (const auto& a : report.assignments) {
    assignments.push_back(Json{{"pair", a.pair},
                               {"max_abs_deviation", a.max_abs_deviation},
                               {"bound", a.bound},
                               {"uniform_ok", a.uniform_ok},
                               {"enforced_ok", a.enforced_ok}});
  }
  return Json{{"sample_count", report.sample_count},
              {"q", report.q},
              {"degenerate", report.degenerate},
              {"assignments", std::move(assignments)},
              {"all_pass", report.all_pass}};
}

}  // namespace triferm
