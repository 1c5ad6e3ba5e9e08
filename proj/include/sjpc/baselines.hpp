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

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sjpc/hashing.hpp"
#include "sjpc/subvalues.hpp"

namespace sjpc {

/// Ground truth from brute-force pairwise comparison. All vectors are indexed
/// by level (0..d).
struct ExactCounts {
  int d = 0;
  std::uint64_t n = 0;
  /// Ordered pairs of distinct records agreeing on exactly k fields.
  std::vector<std::uint64_t> x;
  /// Self-join size of the level-k sub-value stream at r = 1. y[0] = n^2.
  std::vector<std::uint64_t> y;
  /// Ordered pairs agreeing on at least s fields, plus the n self-pairs.
  std::vector<std::uint64_t> g;
};

/// Counts of (a, b) pairs across two relations; no self-pair concept.
struct CrossCounts {
  int d = 0;
  std::uint64_t n_a = 0;
  std::uint64_t n_b = 0;
  /// Pairs agreeing on exactly k fields.
  std::vector<std::uint64_t> x;

  std::uint64_t at_least(int s) const;
};

inline constexpr std::size_t kDefaultOracleCap = 50'000;

/// Thrown when an input exceeds a configured resource cap.
class ResourceCapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// O(n^2 d) oracle. y is computed separately from per-level frequency maps of
/// the encoded sub-values, so the two tables check each other.
ExactCounts exact_pair_counts(std::span<const Record> data, std::size_t cap = kDefaultOracleCap);

/// Same result as exact_pair_counts, pair loop split across OpenMP threads.
ExactCounts exact_pair_counts_parallel(std::span<const Record> data, int threads,
                                       std::size_t cap = kDefaultOracleCap);

CrossCounts exact_cross_pair_counts(std::span<const Record> a, std::span<const Record> b,
                                    std::size_t cap = kDefaultOracleCap);

/// Number of fields on which two equal-arity records agree.
int agreement(const Record& a, const Record& b);

/// One-pass uniform sample of up to `capacity` records without replacement.
class ReservoirSampler {
 public:
  ReservoirSampler(std::size_t capacity, std::uint64_t seed);

  void offer(std::span<const std::string_view> fields);
  void offer(const Record& rec);

  const std::vector<Record>& sample() const { return sample_; }
  std::uint64_t seen() const { return seen_; }

 private:
  std::size_t capacity_;
  Rng rng_;
  std::vector<Record> sample_;
  std::uint64_t seen_ = 0;
};

struct SamplingEstimate {
  int d = 0;
  int s = 1;
  std::uint64_t n = 0;
  std::size_t sample_size = 0;
  /// The stream ended with fewer records than the requested sample size.
  bool undersized = false;
  /// Scaled pair counts, indexed 0..d.
  std::vector<double> x;
  double g_s = 0.0;
};

/// Pairwise counts on `sample`, scaled by n(n-1) / (R(R-1)), plus n.
SamplingEstimate estimate_from_sample(std::span<const Record> sample, std::uint64_t n, int s);

/// Reservoir-samples `sample_size` records from the stream, then scales.
/// Throws std::invalid_argument when sample_size < 2.
SamplingEstimate random_sampling_estimate(std::span<const Record> stream, std::size_t sample_size, int s,
                                          std::uint64_t seed);

}  // namespace sjpc
