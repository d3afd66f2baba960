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

#include <cmath>
#include <complex>
#include <map>
#include <span>
#include <stdexcept>
#include <vector>

#include "triferm/basis.hpp"
#include "triferm/modes.hpp"

namespace triferm {

using Cplx = std::complex<double>;

/// Magnitude below which an accumulated amplitude is dropped. All amplitudes
/// in this library are products of 1/sqrt(2), i and unit phases, so anything
/// this small is a cancellation residue.
inline constexpr double kPruneTolerance = 1e-12;

inline bool is_finite(Cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

/// Sparse fermionic state: BasisTerm -> amplitude, all terms of one particle
/// count, signs relative to one ModeOrder. Treat as immutable once built.
class StateVector {
 public:
  explicit StateVector(std::size_t particle_count, ModeOrder order = ModeOrder::canonical())
      : particle_count_(particle_count), order_(order) {
    if (particle_count == 0) throw std::invalid_argument("StateVector: particle_count must be positive");
  }

  std::size_t particle_count() const { return particle_count_; }
  const ModeOrder& order() const { return order_; }
  const std::map<BasisTerm, Cplx>& terms() const { return terms_; }
  bool empty() const { return terms_.empty(); }
  std::size_t term_count() const { return terms_.size(); }

  /// Accumulates amp onto a canonical term, pruning the entry if the result
  /// falls below kPruneTolerance in magnitude.
  void add_scaled(const BasisTerm& term, Cplx amp) {
    if (term.modes.size() != particle_count_)
      throw std::invalid_argument("add_scaled: term length does not match particle count");
    if (!is_canonical(term, order_))
      throw std::invalid_argument("add_scaled: term is not canonical in this state's mode order");
    if (!is_finite(amp)) throw std::invalid_argument("add_scaled: non-finite amplitude");
    auto [it, inserted] = terms_.try_emplace(term, amp);
    if (!inserted) it->second += amp;
    if (std::abs(it->second) < kPruneTolerance) terms_.erase(it);
  }

  /// Canonicalizes an ordered mode product and accumulates amp times the
  /// exchange sign.
  void add_product(std::span<const ModeId> modes, Cplx amp) {
    auto canon = canonicalize(modes, order_);
    add_scaled(canon.term, amp * static_cast<double>(canon.sign));
  }

  Cplx amplitude(const BasisTerm& term) const {
    auto it = terms_.find(term);
    return it == terms_.end() ? Cplx{0.0, 0.0} : it->second;
  }

  double norm_squared() const {
    double total = 0.0;
    for (const auto& [term, amp] : terms_) total += std::norm(amp);
    return total;
  }

  /// Scales to unit norm. Throws on the zero state.
  void normalize() {
    double n2 = norm_squared();
    if (n2 <= 0.0) throw std::domain_error("normalize: zero state");
    double inv = 1.0 / std::sqrt(n2);
    for (auto& [term, amp] : terms_) amp *= inv;
  }

 private:
  std::map<BasisTerm, Cplx> terms_;
  std::size_t particle_count_;
  ModeOrder order_;
};

/// <a|b>. Both states must share particle count and mode order (amplitudes
/// in different orders carry different sign conventions).
inline Cplx inner_product(const StateVector& a, const StateVector& b) {
  if (a.particle_count() != b.particle_count())
    throw std::invalid_argument("inner_product: particle counts differ");
  if (!(a.order() == b.order())) throw std::invalid_argument("inner_product: mode orders differ");
  Cplx total{0.0, 0.0};
  for (const auto& [term, amp] : a.terms()) total += std::conj(amp) * b.amplitude(term);
  return total;
}

/// |<a|b>| / (|a| |b|) — 1 means equal up to a global phase.
inline double overlap_magnitude(const StateVector& a, const StateVector& b) {
  return std::abs(inner_product(a, b)) / std::sqrt(a.norm_squared() * b.norm_squared());
}

/// A single-particle superposition: list of (mode, amplitude).
struct ModeAmplitude {
  ModeId mode;
  Cplx amp;
};
using SingleParticleState = std::vector<ModeAmplitude>;

namespace detail {
inline SingleParticleState merge_duplicates(const SingleParticleState& factor) {
  SingleParticleState merged;
  for (const auto& entry : factor) {
    if (!is_finite(entry.amp)) throw std::invalid_argument("product_state: non-finite amplitude");
    bool found = false;
    for (auto& m : merged) {
      if (m.mode == entry.mode) {
        m.amp += entry.amp;
        found = true;
        break;
      }
    }
    if (!found) merged.push_back(entry);
  }
  return merged;
}
}  // namespace detail

/// Expands a product of single-particle superpositions over pairwise disjoint
/// mode sets into the antisymmetrized state, one cross-term at a time. Each
/// factor must be normalized.
inline StateVector product_state(std::span<const SingleParticleState> factors,
                                 ModeOrder order = ModeOrder::canonical()) {
  if (factors.empty()) throw std::invalid_argument("product_state: no factors");

  std::vector<SingleParticleState> merged;
  merged.reserve(factors.size());
  std::uint32_t used_modes = 0;
  for (const auto& factor : factors) {
    auto m = detail::merge_duplicates(factor);
    double n2 = 0.0;
    for (const auto& entry : m) {
      n2 += std::norm(entry.amp);
      std::uint32_t bit = 1u << mode_index(entry.mode);
      if (used_modes & bit)
        throw std::invalid_argument("product_state: factors share mode " +
                                    std::string(mode_name(entry.mode)));
      used_modes |= bit;
    }
    if (std::abs(n2 - 1.0) > 1e-9)
      throw std::invalid_argument("product_state: factor is not normalized");
    merged.push_back(std::move(m));
  }

  StateVector state(merged.size(), order);
  std::vector<ModeId> modes(merged.size());
  std::vector<std::size_t> pick(merged.size(), 0);
  // Odometer over one entry per factor.
  while (true) {
    Cplx amp{1.0, 0.0};
    for (std::size_t i = 0; i < merged.size(); ++i) {
      modes[i] = merged[i][pick[i]].mode;
      amp *= merged[i][pick[i]].amp;
    }
    state.add_product(modes, amp);
    std::size_t i = 0;
    for (; i < merged.size(); ++i) {
      if (++pick[i] < merged[i].size()) break;
      pick[i] = 0;
    }
    if (i == merged.size()) break;
  }
  return state;
}

}  // namespace triferm
