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

#include "sjpc/combinatorics.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>
#include <string>

#include "sjpc/hashing.hpp"

namespace sjpc {

std::uint64_t choose(std::uint64_t n, std::uint64_t k) {
  if (k > n) return 0;
  k = std::min(k, n - k);
  // result * (n - i) is always divisible by (i + 1) at step i.
  u128 result = 1;
  for (std::uint64_t i = 0; i < k; ++i) {
    result = result * (n - i) / (i + 1);
    if (result > std::numeric_limits<std::uint64_t>::max()) {
      throw std::overflow_error("choose(" + std::to_string(n) + ", " + std::to_string(k) +
                                ") overflows 64 bits");
    }
  }
  return static_cast<std::uint64_t>(result);
}

namespace {

void check_level(int d, int k) {
  if (d < 1 || k < 1 || k > d) {
    throw std::invalid_argument("combination level requires 1 <= k <= d, got d=" +
                                std::to_string(d) + " k=" + std::to_string(k));
  }
}

}  // namespace

std::uint64_t rank_combination(int d, const std::vector<int>& indices) {
  const int k = static_cast<int>(indices.size());
  check_level(d, k);
  std::uint64_t rank = 0;
  int next = 0;
  for (int pos = 0; pos < k; ++pos) {
    const int v = indices[pos];
    if (v < next || v >= d) {
      throw std::invalid_argument("combination indices must be strictly increasing and < d");
    }
    // Skip every subset that has a smaller value at this position.
    for (int u = next; u < v; ++u) {
      rank += choose(static_cast<std::uint64_t>(d - 1 - u), static_cast<std::uint64_t>(k - 1 - pos));
    }
    next = v + 1;
  }
  return rank;
}

ColumnCombination unrank_combination(int d, int k, std::uint64_t rank) {
  check_level(d, k);
  const std::uint64_t total = choose(d, k);
  if (rank >= total) {
    throw std::out_of_range("rank " + std::to_string(rank) + " out of range for C(" +
                            std::to_string(d) + "," + std::to_string(k) + ")");
  }
  ColumnCombination c{d, {}, rank};
  c.indices.reserve(k);
  std::uint64_t remaining = rank;
  int v = 0;
  for (int pos = 0; pos < k; ++pos) {
    for (;; ++v) {
      const std::uint64_t block = choose(static_cast<std::uint64_t>(d - 1 - v),
                                         static_cast<std::uint64_t>(k - 1 - pos));
      if (remaining < block) break;
      remaining -= block;
    }
    c.indices.push_back(v++);
  }
  return c;
}

std::vector<ColumnCombination> enumerate_combinations(int d, int k) {
  check_level(d, k);
  std::vector<ColumnCombination> out;
  out.reserve(choose(d, k));
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  for (std::uint64_t rank = 0;; ++rank) {
    out.push_back(ColumnCombination{d, idx, rank});
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == d - k + pos) --pos;
    if (pos < 0) break;
    ++idx[pos];
    for (int j = pos + 1; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  return out;
}

std::int64_t alternating_binomial_sum(int i, int k) {
  if (k < 0 || i < k) throw std::invalid_argument("alternating_binomial_sum requires i >= k >= 0");
  std::int64_t sum = 0;
  for (int j = k; j <= i; ++j) {
    const auto term = static_cast<std::int64_t>(choose(i - k + 1, j - k + 1));
    sum += ((i - j) % 2 == 0) ? term : -term;
  }
  return sum;
}

}  // namespace sjpc
