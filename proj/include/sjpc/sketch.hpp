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
#include <iosfwd>
#include <span>
#include <vector>

#include "sjpc/hashing.hpp"

namespace sjpc {

/// How per-row estimates are combined across the depth of a sketch.
/// `median` is the production default; `mean` exists for tests that target
/// single-row unbiasedness.
enum class DepthAggregation { median, mean };

/// Lower median for an even count.
double aggregate(std::vector<double> values, DepthAggregation mode);

/// Fast-AGMS sketch: `depth` independent rows of `width` signed counters.
/// Each insert touches one counter per row, adding a +/-1 sign at a hashed
/// bucket. Two sketches are compatible iff width, depth, master seed and
/// level agree, which makes their hash functions identical.
class FastAgmsSketch {
 public:
  FastAgmsSketch(std::size_t width, std::size_t depth, std::uint64_t master_seed, int level);

  void insert(Fingerprint key);

  /// Sum of squared counters in one row.
  double row_f2(std::size_t row) const;
  /// Self-join size (second frequency moment) estimate.
  double estimate_f2(DepthAggregation mode = DepthAggregation::median) const;

  bool compatible_with(const FastAgmsSketch& other) const;
  /// Counter-wise addition. Throws std::invalid_argument if incompatible.
  void merge(const FastAgmsSketch& other);

  std::size_t width() const { return width_; }
  std::size_t depth() const { return depth_; }
  std::uint64_t master_seed() const { return master_seed_; }
  int level() const { return level_; }
  std::uint64_t items_inserted() const { return items_inserted_; }
  std::span<const std::int64_t> row(std::size_t j) const {
    return {counters_.data() + j * width_, width_};
  }
  std::span<const std::int64_t> counters() const { return counters_; }
  const Hash4Seed& bucket_seed(std::size_t j) const { return bucket_seeds_[j]; }
  const Hash4Seed& sign_seed(std::size_t j) const { return sign_seeds_[j]; }
  std::size_t counter_bytes() const { return counters_.size() * sizeof(std::int64_t); }

  /// Versioned little-endian blob: magic, version, width, depth, level,
  /// master seed, items inserted, then row-major 64-bit counters.
  void serialize(std::ostream& out) const;
  static FastAgmsSketch deserialize(std::istream& in);

  friend bool operator==(const FastAgmsSketch& a, const FastAgmsSketch& b) {
    return a.compatible_with(b) && a.items_inserted_ == b.items_inserted_ && a.counters_ == b.counters_;
  }

 private:
  std::size_t width_;
  std::size_t depth_;
  std::uint64_t master_seed_;
  int level_;
  std::vector<Hash4Seed> bucket_seeds_;
  std::vector<Hash4Seed> sign_seeds_;
  std::vector<std::int64_t> counters_;
  std::uint64_t items_inserted_ = 0;
};

/// Join size estimate: aggregate over rows of the counter dot products.
/// Throws std::invalid_argument if the sketches are incompatible.
double inner_product(const FastAgmsSketch& a, const FastAgmsSketch& b,
                     DepthAggregation mode = DepthAggregation::median);

FastAgmsSketch merged(FastAgmsSketch a, const FastAgmsSketch& b);

}  // namespace sjpc
