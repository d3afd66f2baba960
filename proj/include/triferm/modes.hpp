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

#include <array>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string_view>

namespace triferm {

/// Spatial modes of the three-source interferometer.
///
/// A, B, C feed the source beam splitters; a..c' are the arms between the
/// two splitter layers (primed arms carry the phase shifters); d..f' are
/// the detected outputs, grouped into stations D = {d, d'}, E = {e, e'},
/// F = {f, f'}.
///
/// The declaration order is the library's canonical mode order. Every
/// antisymmetrization sign is computed relative to a total order on modes;
/// this one is the default (see ModeOrder for rebasing).
enum class ModeId : std::uint8_t {
  A,
  B,
  C,
  a,
  ap,  // a'
  b,
  bp,  // b'
  c,
  cp,  // c'
  d,
  dp,  // d'
  e,
  ep,  // e'
  f,
  fp,  // f'
};

inline constexpr std::size_t kModeCount = 15;

constexpr std::size_t mode_index(ModeId m) { return static_cast<std::size_t>(m); }

constexpr std::array<ModeId, kModeCount> all_modes() {
  std::array<ModeId, kModeCount> out{};
  for (std::size_t i = 0; i < kModeCount; ++i) out[i] = static_cast<ModeId>(i);
  return out;
}

constexpr std::string_view mode_name(ModeId m) {
  constexpr std::array<std::string_view, kModeCount> names = {
      "A", "B", "C", "a", "a'", "b", "b'", "c", "c'", "d", "d'", "e", "e'", "f", "f'"};
  return names[mode_index(m)];
}

/// Station housing a detected output mode (0=D, 1=E, 2=F), or nullopt for
/// modes upstream of the detection layer.
constexpr std::optional<int> detector_station(ModeId m) {
  switch (m) {
    case ModeId::d:
    case ModeId::dp:
      return 0;
    case ModeId::e:
    case ModeId::ep:
      return 1;
    case ModeId::f:
    case ModeId::fp:
      return 2;
    default:
      return std::nullopt;
  }
}

/// Detector value convention: unprimed output +1, primed output -1.
constexpr int detector_sign(ModeId m) {
  switch (m) {
    case ModeId::d:
    case ModeId::e:
    case ModeId::f:
      return +1;
    case ModeId::dp:
    case ModeId::ep:
    case ModeId::fp:
      return -1;
    default:
      throw std::invalid_argument("detector_sign: mode is not a detected output");
  }
}

/// A total order on modes, stored as a rank table. All sign bookkeeping in a
/// StateVector is relative to one ModeOrder; observable distributions do not
/// depend on which one (the signs absorb the choice).
class ModeOrder {
 public:
  /// Declaration order of ModeId.
  static const ModeOrder& canonical() {
    static const ModeOrder instance{};
    return instance;
  }

  /// Builds an order from a rank table (rank[mode_index] = position). The
  /// table must be a permutation of 0..kModeCount-1.
  static ModeOrder from_ranks(const std::array<std::uint8_t, kModeCount>& ranks) {
    std::array<bool, kModeCount> seen{};
    for (auto r : ranks) {
      if (r >= kModeCount || seen[r]) throw std::invalid_argument("ModeOrder: ranks must be a permutation");
      seen[r] = true;
    }
    ModeOrder order;
    order.ranks_ = ranks;
    return order;
  }

  std::uint8_t rank(ModeId m) const { return ranks_[mode_index(m)]; }
  bool less(ModeId x, ModeId y) const { return rank(x) < rank(y); }

  bool operator==(const ModeOrder& other) const { return ranks_ == other.ranks_; }

 private:
  ModeOrder() {
    for (std::size_t i = 0; i < kModeCount; ++i) ranks_[i] = static_cast<std::uint8_t>(i);
  }
  std::array<std::uint8_t, kModeCount> ranks_;
};

}  // namespace triferm
