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
#include <string>
#include <string_view>
#include <vector>

#include "sjpc/subvalues.hpp"

namespace sjpc {

/// Dataset families with a known duplication structure.
///  - near_uniform_40_60: 40% unique records, the rest in (d-1)-similar couples.
///  - skewed_20_80: 20% unique, the rest in groups of 16 mutually (d-1)-similar records.
///  - skewed_10_90: 10% unique, the rest in groups of 81, so that 10% of the
///    entities hold 90% of the records.
///  - planted_lemma1: every record has exactly one (d-1)-similar partner.
/// Members of a group share d-1 fields and differ in one field chosen per group.
enum class SyntheticKind { near_uniform_40_60, skewed_20_80, skewed_10_90, planted_lemma1 };

/// Throws std::invalid_argument for an unknown name.
SyntheticKind parse_synthetic_kind(std::string_view name);
std::string_view to_string(SyntheticKind kind);

/// Analytic ground truth of a generated dataset (same layout as ExactCounts).
struct SyntheticTruth {
  SyntheticKind kind{};
  std::uint64_t n = 0;
  int d = 0;
  std::uint64_t seed = 0;
  std::size_t group_size = 1;
  std::uint64_t groups = 0;
  std::uint64_t grouped_records = 0;
  std::vector<std::uint64_t> x;
  std::vector<std::uint64_t> g;
};

/// Random-access generator: record_at(i) is computed in O(d) from (seed, i),
/// so arbitrarily large streams can be produced without materializing them.
/// Every field value is 16 hex digits (two 32-bit integers); values that are
/// not meant to match are distinct by construction.
class SyntheticDataset {
 public:
  SyntheticDataset(SyntheticKind kind, std::uint64_t n, int d, std::uint64_t seed);

  std::uint64_t size() const { return truth_.n; }
  int arity() const { return truth_.d; }
  const SyntheticTruth& truth() const { return truth_; }

  void record_at(std::uint64_t position, Record& out) const;
  Record record_at(std::uint64_t position) const;
  std::vector<Record> materialize() const;

 private:
  SyntheticTruth truth_;
  std::uint64_t value_key_;
  std::uint64_t stride_;
  std::uint64_t offset_;
};

std::vector<Record> generate_synthetic(SyntheticKind kind, std::uint64_t n, int d, std::uint64_t seed);

}  // namespace sjpc
