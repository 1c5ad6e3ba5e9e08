// Copyright 2026 The SJPC Authors
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

#include <cstdint>
#include <vector>

namespace sjpc {

/// Exact binomial coefficient C(n, k). Returns 0 when k > n.
/// Throws std::overflow_error if the value does not fit in 64 bits.
std::uint64_t choose(std::uint64_t n, std::uint64_t k);

/// A k-subset of the attribute indices {0, ..., d-1}: one node of the
/// attribute lattice. `rank` is the lexicographic rank among all k-subsets.
struct ColumnCombination {
  int d = 0;
  std::vector<int> indices;
  std::uint64_t rank = 0;

  int level() const { return static_cast<int>(indices.size()); }

  friend bool operator==(const ColumnCombination&, const ColumnCombination&) = default;
};

/// Lexicographic rank of a strictly increasing index set drawn from {0..d-1}.
std::uint64_t rank_combination(int d, const std::vector<int>& indices);

/// The rank-th k-subset of {0..d-1} in lexicographic order.
/// Throws std::invalid_argument for bad (d, k) and std::out_of_range for rank.
ColumnCombination unrank_combination(int d, int k, std::uint64_t rank);

/// All C(d, k) combinations, in lexicographic order (rank i at position i).
std::vector<ColumnCombination> enumerate_combinations(int d, int k);

/// sum_{j=k}^{i} (-1)^{i-j} C(i-k+1, j-k+1), evaluated term by term.
/// Equals (-1)^{i-k}; kept literal so the identity can be tested.
std::int64_t alternating_binomial_sum(int i, int k);

}  // namespace sjpc
