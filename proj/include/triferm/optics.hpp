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
#include <complex>
#include <map>
#include <numbers>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "triferm/state.hpp"

namespace triferm {

/// Wraps an angle into [0, 2*pi).
inline double reduce_angle(double x) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::fmod(x, two_pi);
  if (r < 0.0) r += two_pi;
  return r;
}

/// The three phase-shifter settings, in radians.
struct CircuitConfig {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;

  /// Effective interferometer phase: the only combination the coincidence
  /// statistics depend on.
  double theta() const { return alpha + beta + gamma - std::numbers::pi / 2.0; }

  void validate() const {
    if (!std::isfinite(alpha) || !std::isfinite(beta) || !std::isfinite(gamma))
      throw std::invalid_argument("CircuitConfig: angles must be finite");
  }
};

/// Single-particle mode transformation. Each listed input mode maps to a
/// superposition of output modes; unlisted modes map to themselves. An
/// optional domain restricts which modes the map may legally act on, so a
/// circuit stage rejects states that have not passed the previous stage.
class ModeMap {
 public:
  ModeMap() = default;

  void set_row(ModeId in, SingleParticleState image) {
    for (const auto& entry : image)
      if (!is_finite(entry.amp)) throw std::invalid_argument("ModeMap: non-finite amplitude");
    rows_[in] = std::move(image);
  }

  void set_domain(std::span<const ModeId> modes) {
    std::uint32_t mask = 0;
    for (ModeId m : modes) mask |= 1u << mode_index(m);
    domain_mask_ = mask;
  }

  bool in_domain(ModeId m) const {
    return !domain_mask_ || (*domain_mask_ & (1u << mode_index(m)));
  }

  /// Image of a mode; identity for unlisted modes.
  SingleParticleState image(ModeId m) const {
    auto it = rows_.find(m);
    if (it != rows_.end()) return it->second;
    return {{m, Cplx{1.0, 0.0}}};
  }

  const std::map<ModeId, SingleParticleState>& rows() const { return rows_; }

 private:
  std::map<ModeId, SingleParticleState> rows_;
  std::optional<std::uint32_t> domain_mask_;
};

/// True when the explicitly listed rows form an orthonormal set (the
/// transformed block of the map is unitary). Identity rows are not checked;
/// a layer map's rows cover exactly the modes its beam splitters consume.
inline bool rows_orthonormal(const ModeMap& map, double tol = 1e-12) {
  std::vector<std::array<Cplx, kModeCount>> dense;
  for (const auto& [in, image] : map.rows()) {
    std::array<Cplx, kModeCount> row{};
    for (const auto& entry : image) row[mode_index(entry.mode)] += entry.amp;
    dense.push_back(row);
  }
  for (std::size_t i = 0; i < dense.size(); ++i) {
    for (std::size_t j = i; j < dense.size(); ++j) {
      Cplx dot{0.0, 0.0};
      for (std::size_t k = 0; k < kModeCount; ++k) dot += std::conj(dense[i][k]) * dense[j][k];
      Cplx expected = (i == j) ? Cplx{1.0, 0.0} : Cplx{0.0, 0.0};
      if (std::abs(dot - expected) > tol) return false;
    }
  }
  return true;
}

/// Adds the rows of one 2x2 beam splitter: transmission 1/sqrt(2),
/// reflection i/sqrt(2), so
///   in1 -> (|out1> + i |out2>) / sqrt(2)
///   in2 -> (i |out1> + |out2>) / sqrt(2).
inline void add_beam_splitter(ModeMap& map, ModeId in1, ModeId in2, ModeId out1, ModeId out2) {
  const double s = std::numbers::sqrt2 / 2.0;
  map.set_row(in1, {{out1, Cplx{s, 0.0}}, {out2, Cplx{0.0, s}}});
  map.set_row(in2, {{out1, Cplx{0.0, s}}, {out2, Cplx{s, 0.0}}});
}

/// The three source beam splitters. Only one input port per splitter is ever
/// occupied, so a single row each suffices.
inline ModeMap source_layer() {
  const double s = std::numbers::sqrt2 / 2.0;
  ModeMap map;
  map.set_row(ModeId::A, {{ModeId::a, Cplx{s, 0.0}}, {ModeId::ap, Cplx{0.0, s}}});
  map.set_row(ModeId::B, {{ModeId::b, Cplx{s, 0.0}}, {ModeId::bp, Cplx{0.0, s}}});
  map.set_row(ModeId::C, {{ModeId::c, Cplx{s, 0.0}}, {ModeId::cp, Cplx{0.0, s}}});
  constexpr ModeId domain[] = {ModeId::A, ModeId::B, ModeId::C};
  map.set_domain(domain);
  return map;
}

/// The detection beam splitters with their cross wiring: D reads {a, c'},
/// E reads {b, a'}, F reads {c, b'}. Unprimed inputs take the direct port,
/// primed inputs the reflected one.
inline ModeMap detection_layer() {
  ModeMap map;
  add_beam_splitter(map, ModeId::a, ModeId::cp, ModeId::d, ModeId::dp);
  add_beam_splitter(map, ModeId::b, ModeId::ap, ModeId::e, ModeId::ep);
  add_beam_splitter(map, ModeId::c, ModeId::bp, ModeId::f, ModeId::fp);
  constexpr ModeId domain[] = {ModeId::a,  ModeId::ap, ModeId::b,
                               ModeId::bp, ModeId::c,  ModeId::cp};
  map.set_domain(domain);
  return map;
}

/// Replaces each particle's mode by its image superposition, expands, and
/// re-canonicalizes. Cross-terms that put two particles into one output mode
/// vanish identically and are skipped; terms that put two particles into one
/// *station* survive (post-selection removes them later).
inline StateVector apply_mode_map(const StateVector& state, const ModeMap& map) {
  const std::size_t n = state.particle_count();
  StateVector out(n, state.order());
  std::vector<SingleParticleState> images(n);
  std::vector<std::size_t> pick(n);
  std::vector<ModeId> modes(n);

  for (const auto& [term, amp] : state.terms()) {
    for (std::size_t i = 0; i < n; ++i) {
      if (!map.in_domain(term.modes[i]))
        throw std::invalid_argument("apply_mode_map: mode " + std::string(mode_name(term.modes[i])) +
                                    " outside map domain");
      images[i] = map.image(term.modes[i]);
    }
    std::fill(pick.begin(), pick.end(), std::size_t{0});
    while (true) {
      Cplx product = amp;
      std::uint32_t used = 0;
      bool excluded = false;
      for (std::size_t i = 0; i < n; ++i) {
        const auto& entry = images[i][pick[i]];
        std::uint32_t bit = 1u << mode_index(entry.mode);
        if (used & bit) {
          excluded = true;  // wedge of identical modes is zero
          break;
        }
        used |= bit;
        modes[i] = entry.mode;
        product *= entry.amp;
      }
      if (!excluded) out.add_product(modes, product);
      std::size_t i = 0;
      for (; i < n; ++i) {
        if (++pick[i] < images[i].size()) break;
        pick[i] = 0;
      }
      if (i == n) break;
    }
  }
  return out;
}

/// Multiplies every term containing `mode` by e^{i phase}.
inline StateVector apply_phase(const StateVector& state, ModeId mode, double phase) {
  if (!std::isfinite(phase)) throw std::invalid_argument("apply_phase: non-finite phase");
  const Cplx factor = std::polar(1.0, phase);
  StateVector out(state.particle_count(), state.order());
  for (const auto& [term, amp] : state.terms()) {
    bool hit = std::find(term.modes.begin(), term.modes.end(), mode) != term.modes.end();
    out.add_scaled(term, hit ? amp * factor : amp);
  }
  return out;
}

/// State just before the detection layer: one particle from each source
/// through its splitter, phase shifts on the primed arms. Eight terms of
/// squared magnitude 1/8.
inline StateVector build_prepared_state(const CircuitConfig& config,
                                        ModeOrder order = ModeOrder::canonical()) {
  config.validate();
  StateVector sources(3, order);
  constexpr ModeId inputs[] = {ModeId::A, ModeId::B, ModeId::C};
  sources.add_product(inputs, Cplx{1.0, 0.0});
  StateVector state = apply_mode_map(sources, source_layer());
  state = apply_phase(state, ModeId::ap, config.alpha);
  state = apply_phase(state, ModeId::bp, config.beta);
  state = apply_phase(state, ModeId::cp, config.gamma);
  return state;
}

struct PostselectResult {
  StateVector state;
  double keep_probability;
};

/// Drops every term in which two particles head into the same detection
/// splitter (D reads {a, c'}, E reads {b, a'}, F reads {c, b'}), then
/// renormalizes the survivors. Returns the pre-renormalization survivor
/// probability.
inline PostselectResult postselect_coincidence(const StateVector& state) {
  auto splitter_group = [](ModeId m) -> int {
    switch (m) {
      case ModeId::a:
      case ModeId::cp:
        return 0;
      case ModeId::b:
      case ModeId::ap:
        return 1;
      case ModeId::c:
      case ModeId::bp:
        return 2;
      default:
        throw std::invalid_argument("postselect_coincidence: mode " + std::string(mode_name(m)) +
                                    " is not an intermediate arm");
    }
  };

  StateVector kept(state.particle_count(), state.order());
  double keep_probability = 0.0;
  for (const auto& [term, amp] : state.terms()) {
    std::uint32_t groups = 0;
    bool collision = false;
    for (ModeId m : term.modes) {
      std::uint32_t bit = 1u << splitter_group(m);
      if (groups & bit) {
        collision = true;
        break;
      }
      groups |= bit;
    }
    if (!collision) {
      kept.add_scaled(term, amp);
      keep_probability += std::norm(amp);
    }
  }
  if (!kept.empty()) kept.normalize();
  return {std::move(kept), keep_probability};
}

/// Full pipeline: prepare, post-select on coincidence, pass through the
/// detection layer. Unit-norm state over the detected modes d..f'.
inline StateVector build_final_state(const CircuitConfig& config,
                                     ModeOrder order = ModeOrder::canonical()) {
  auto selected = postselect_coincidence(build_prepared_state(config, order));
  return apply_mode_map(selected.state, detection_layer());
}

}  // namespace triferm
