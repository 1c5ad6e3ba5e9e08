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
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <variant>
#include <vector>

#include "sjpc/hashing.hpp"
#include "sjpc/sketch.hpp"
#include "sjpc/subvalues.hpp"

namespace sjpc {

enum class EstimationMode { online_sketch, offline_exact };

/// What is subtracted from Y_k for self-pairs. `realized` uses the number of
/// sub-values actually emitted at level k; `expected` uses r * C(d, k) * n.
/// Both are unbiased; `realized` removes the variance of the per-record
/// rounding of the sample size.
enum class SelfPairTerm { realized, expected };

struct SjpcConfig {
  int d = 0;
  int s = 1;
  double r = 1.0;
  std::size_t width = 1000;
  std::size_t depth = 3;
  std::uint64_t master_seed = 1;
  bool clamp_negative = true;
  EstimationMode mode = EstimationMode::online_sketch;
  DepthAggregation aggregation = DepthAggregation::median;
  SelfPairTerm self_pairs = SelfPairTerm::realized;
  /// Selects the per-record sampling stream. Two relations that are joined
  /// must use different ids so their projection choices are independent.
  std::uint64_t stream_id = 0;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
  int levels() const { return d - s + 1; }
};

/// Thrown when a record does not have d fields.
class ArityError : public std::invalid_argument {
 public:
  ArityError(std::uint64_t position, std::size_t expected, std::size_t got);
  std::uint64_t position() const { return position_; }

 private:
  std::uint64_t position_;
};

using LevelMap = std::map<int, double>;
using FrequencyMap = std::unordered_map<std::uint64_t, std::uint64_t>;

struct VarianceBounds {
  double offline = 0.0;
  double online = 0.0;
};

enum class ReportKind { self_join, join };

struct EstimateReport {
  ReportKind kind = ReportKind::self_join;
  SjpcConfig config;
  std::uint64_t n = 0;
  /// Record count of the second relation (join reports only).
  std::uint64_t n_other = 0;
  LevelMap y;
  LevelMap x;
  LevelMap self_pairs;
  double pair_count = 0.0;
  /// Self-join: pair_count + n. Join: pair_count.
  double g_s = 0.0;
  std::optional<VarianceBounds> bounds;

  /// Estimate at a stricter threshold s' >= config.s, from the same X_k.
  double g_at(int s) const;
};

/// Downward recursion X_k = (Y_k - r C(d,k) n) / r^2 - sum_{j>k} C(j,k) X_j
/// for k = d..s. With `clamp`, each X_k is floored at 0 before lower levels
/// use it.
LevelMap solve_pair_counts(const LevelMap& y, int d, int s, double n, double r, bool clamp);

/// Same recursion with an explicit self-pair term per level.
LevelMap solve_pair_counts_with_self_pairs(const LevelMap& y, const LevelMap& self_pairs, int d, int s,
                                           double r, bool clamp);

/// Non-recursive alternating-sum form of the unclamped recursion.
LevelMap solve_pair_counts_closed_form(const LevelMap& y, int d, int s, double n, double r);

/// Constant term of the closed form at level k (collects the self-pair terms).
double closed_form_constant(int k, int d, double n, double r);

/// X_k = Y_k / r^2 - sum_{j>k} C(j,k) X_j; no self-pairs in a join.
LevelMap join_solve_pair_counts(const LevelMap& y, int d, int s, double r, bool clamp);

/// Upper bound on var[G_s / g_s] when Y_k is computed exactly.
double variance_bound_offline(int d, int s, double r, double g_s);

/// Upper bound on var[G_s / g_s] with a width-w, depth-1 sketch per level.
double variance_bound_online(int d, int s, double r, std::size_t w, double n, double g_s);

struct SuggestedParameters {
  double r = 1.0;
  std::size_t depth = 1;
  /// True when the required ratio exceeded 1; a wider sketch is then needed
  /// to reach the requested accuracy.
  bool saturated = false;
};

/// Sampling ratio and depth for selectivity error epsilon with failure
/// probability lambda at sketch width w.
SuggestedParameters suggest_parameters(double epsilon, double lambda, int d, int s, std::size_t w);

/// Random stream for the record at `position` in stream `stream_id`.
Rng record_rng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t position);

/// All one-pass state: one sketch (online) or one exact frequency map
/// (offline) per level k in [s, d], plus the record count.
///
/// Single writer. Partitions of a stream can be ingested into separate
/// states built from the same config and merged; the result equals serial
/// ingestion as long as each record is processed at its global position.
class SjpcState {
 public:
  explicit SjpcState(const SjpcConfig& config);

  const SjpcConfig& config() const { return config_; }
  std::uint64_t records() const { return n_; }

  /// Processes the next record; its stream position is records().
  void process_record(std::span<const std::string_view> fields);
  void process_record(const Record& rec);
  /// Processes a record at an explicit global stream position.
  void process_record_at(std::span<const std::string_view> fields, std::uint64_t position);

  /// Y_k: estimated (online) or exact (offline) self-join size at level k.
  double level_estimate(int k) const;
  /// Number of sub-values inserted at level k.
  std::uint64_t emitted(int k) const;

  /// Snapshot estimate; the state stays usable for further records.
  EstimateReport finalize() const;

  /// Throws std::invalid_argument unless the configs match.
  void merge(const SjpcState& other);
  /// Fresh state with the same configuration.
  SjpcState empty_clone() const { return SjpcState(config_); }

  /// Bytes held by level structures (counters or frequency map entries).
  std::size_t summary_bytes() const;

  const FastAgmsSketch& sketch(int k) const;
  const FrequencyMap& frequencies(int k) const;

 private:
  using LevelStore = std::variant<FastAgmsSketch, FrequencyMap>;

  std::size_t slot(int k) const;

  SjpcConfig config_;
  std::vector<LevelStore> levels_;
  std::vector<LevelSampler> samplers_;
  std::vector<std::uint64_t> emitted_;
  std::uint64_t n_ = 0;
};

/// Similarity join size between two states built with matching configs.
EstimateReport sjpc_join_finalize(const SjpcState& a, const SjpcState& b);

std::string_view to_string(EstimationMode mode);
std::string_view to_string(SelfPairTerm term);

}  // namespace sjpc
