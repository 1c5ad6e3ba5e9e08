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
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "sjpc/combinatorics.hpp"
#include "sjpc/hashing.hpp"

namespace sjpc {

/// One input row: exactly d opaque byte-string fields (empty fields allowed).
struct Record {
  std::vector<std::string> fields;

  std::size_t arity() const { return fields.size(); }
  friend bool operator==(const Record&, const Record&) = default;
};

/// Borrowed field views of a record, for the hot path.
std::vector<std::string_view> field_views(const Record& rec);

/// A record projected onto one column combination, tagged and fingerprinted.
struct SubValue {
  ColumnCombination combination;
  std::vector<std::string> projected;
  std::string encoded;
  Fingerprint fp;
};

/// Per-level sampling: each record emits about r * C(d, k) sub-values at level k.
struct SamplingPlan {
  int d = 0;
  double r = 1.0;
  std::uint64_t fingerprint_seed = 0;

  SamplingPlan(int d, double r, std::uint64_t fingerprint_seed = 0);

  /// l_k = r * C(d, k), real valued.
  double expected_size(int k) const;
};

/// Bernoulli rounding of r * C(d, k): floor, plus one with probability equal
/// to the fractional part.
std::size_t sample_level_size(int d, int k, double r, Rng& rng);

/// (k, rank) header followed by length-prefixed fields. Injective over
/// (combination, values). Throws std::invalid_argument on arity mismatch.
std::string encode_subvalue(const ColumnCombination& c, std::span<const std::string_view> projected);
std::string encode_subvalue(const ColumnCombination& c, std::span<const std::string> projected);

/// Samples combinations without replacement and returns fully populated sub-values.
std::vector<SubValue> emit_subvalues(const Record& rec, int k, const SamplingPlan& plan, Rng& rng);

/// Reusable per-level sampler used by the estimator. Keeps the combination
/// table and scratch buffers so that the per-record path does not allocate.
class LevelSampler {
 public:
  LevelSampler(int d, int k, double r);

  int level() const { return k_; }
  std::size_t combination_count() const { return combos_.size(); }
  const ColumnCombination& combination(std::size_t rank) const { return combos_[rank]; }

  /// Draws the sample size, then that many distinct combination ranks
  /// (partial Fisher-Yates over the identity permutation).
  std::span<const std::uint32_t> draw(Rng& rng);

  /// Encodes the projection of `fields` (a full record) onto `c`.
  /// The returned view is valid until the next call.
  std::string_view encode(const ColumnCombination& c, std::span<const std::string_view> fields);

 private:
  int d_;
  int k_;
  double r_;
  std::vector<ColumnCombination> combos_;
  std::vector<std::uint32_t> ranks_;
  std::string buffer_;
};

}  // namespace sjpc
