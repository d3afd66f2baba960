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
#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "triferm/modes.hpp"

namespace triferm {

/// One occupied mode per particle, held strictly increasing in the owning
/// StateVector's ModeOrder. The sign incurred by sorting an ordered product
/// into this form lives in the amplitude, not here.
struct BasisTerm {
  std::vector<ModeId> modes;

  auto operator<=>(const BasisTerm& other) const = default;

  std::string str() const {
    std::string s;
    for (std::size_t i = 0; i < modes.size(); ++i) {
      if (i) s += ',';
      s += mode_name(modes[i]);
    }
    return s;
  }
};

struct CanonicalTerm {
  BasisTerm term;
  int sign;  // +1 or -1, the parity of the sorting permutation
};

/// Sorts an ordered mode product into a BasisTerm, returning the permutation
/// parity as the fermionic exchange sign. Two identical fermions cannot
/// occupy one mode, so duplicates are rejected.
///
/// The sign is (-1)^(inversions of the input relative to `order`); any
/// sorting procedure yields the same parity.
inline CanonicalTerm canonicalize(std::span<const ModeId> modes,
                                  const ModeOrder& order = ModeOrder::canonical()) {
  BasisTerm term;
  term.modes.assign(modes.begin(), modes.end());
  int inversions = 0;
  for (std::size_t i = 0; i < term.modes.size(); ++i) {
    for (std::size_t j = i + 1; j < term.modes.size(); ++j) {
      if (term.modes[i] == term.modes[j])
        throw std::invalid_argument("canonicalize: duplicate mode " + std::string(mode_name(term.modes[i])) +
                                    " (exclusion)");
      if (order.less(term.modes[j], term.modes[i])) ++inversions;
    }
  }
  std::sort(term.modes.begin(), term.modes.end(),
            [&order](ModeId x, ModeId y) { return order.less(x, y); });
  return {std::move(term), (inversions % 2 == 0) ? +1 : -1};
}

inline bool is_canonical(const BasisTerm& term, const ModeOrder& order) {
  for (std::size_t i = 1; i < term.modes.size(); ++i) {
    if (!order.less(term.modes[i - 1], term.modes[i])) return false;
  }
  return true;
}

}  // namespace triferm
