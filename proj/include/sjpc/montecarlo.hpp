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
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "sjpc/estimator.hpp"
#include "sjpc/subvalues.hpp"

namespace sjpc {

/// Moments of repeated estimates of a known quantity.
struct ErrorStats {
  std::size_t trials = 0;
  double truth = 0.0;
  double mean_estimate = 0.0;
  /// Standard error of mean_estimate.
  double mean_se = 0.0;
  double mean_rel_err = 0.0;
  double std_rel_err = 0.0;
  /// Sample variance of estimate / truth.
  double var_ratio = 0.0;
  /// Standard error of var_ratio from the fourth central moment.
  double var_ratio_se = 0.0;
};

ErrorStats summarize(std::span<const double> estimates, double truth);

/// Seed of trial `trial` under a master seed.
std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial);

/// Runs the estimator `trials` times over `data` with derived seeds.
/// Result[t][s - config.s] is trial t's estimate of g_s, for s in [config.s, d].
/// Trials run in parallel; results do not depend on the thread count.
std::vector<std::vector<double>> sjpc_trials(std::span<const Record> data, const SjpcConfig& config,
                                             std::size_t trials, int threads);

/// Same layout for the random-sampling baseline.
std::vector<std::vector<double>> sampling_trials(std::span<const Record> data, std::size_t sample_size, int s_min,
                                                 std::uint64_t master_seed, std::size_t trials, int threads);

/// Average bytes of field payload per record.
double mean_record_bytes(std::span<const Record> data);

/// Records that fit in the memory of the estimator's (d-s+1) * w * t
/// 64-bit counters.
std::size_t equal_memory_sample_size(const SjpcConfig& config, double record_bytes);

struct MonteCarloOptions {
  /// config.s is the lowest threshold reported.
  SjpcConfig config;
  std::size_t trials = 30;
  /// Adds random-sampling rows when set.
  std::optional<std::size_t> sample_size;
  int threads = 1;
};

struct MonteCarloRow {
  int s = 0;
  std::string estimator;
  ErrorStats stats;
  double bound_offline = 0.0;
  double bound_online = 0.0;
};

/// `true_g[s]` holds the exact g_s for s in 0..d.
std::vector<MonteCarloRow> run_montecarlo(std::span<const Record> data, std::span<const std::uint64_t> true_g,
                                          const MonteCarloOptions& options);

void write_montecarlo_csv(std::ostream& out, std::span<const MonteCarloRow> rows);

}  // namespace sjpc
