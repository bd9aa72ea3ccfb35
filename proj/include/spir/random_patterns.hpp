// Copyright 2026 The spircap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "spir/pattern.hpp"

namespace spir {

// Random proper subsets of [0, N); `max_sets` draws before normalization.
template <typename Rng>
Pattern RandomPattern(Rng& rng, int n_servers, int max_sets, PatternKind kind) {
  std::uniform_int_distribution<std::uint32_t> mask_dist(
      1, (1u << n_servers) - 2);
  std::uniform_int_distribution<int> count_dist(1, max_sets);
  std::vector<ServerSet> sets;
  int count = count_dist(rng);
  for (int i = 0; i < count; ++i) {
    std::uint32_t mask = mask_dist(rng);
    ServerSet s;
    for (int n = 0; n < n_servers; ++n) {
      if (mask >> n & 1u) s.members.push_back(n);
    }
    sets.push_back(std::move(s));
  }
  return ReduceMaximal(std::move(sets), n_servers, kind);
}

/// A validated joint pattern: N in [2, max_n], coverage complete, no full set.
template <typename Rng>
Pattern RandomJointPattern(Rng& rng, int max_n = 6) {
  std::uniform_int_distribution<int> n_dist(2, max_n);
  int n = n_dist(rng);
  return CompleteCoverage(RandomPattern(rng, n, 2 * n, PatternKind::kJoint));
}

}  // namespace spir
