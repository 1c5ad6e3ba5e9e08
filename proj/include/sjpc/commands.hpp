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
#include <string>
#include <string_view>

#include "sjpc/baselines.hpp"
#include "sjpc/estimator.hpp"

namespace sjpc {

inline constexpr std::string_view kVersion = "0.1.0";

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 1;
inline constexpr int input = 2;
inline constexpr int resource_cap = 3;
}  // namespace exit_code

// Every command writes its document to `out` (or to the --out path when
// set) and diagnostics to `err`, and returns a process exit code.
// An input path of "-" reads standard input.

struct EstimateOptions {
  std::string input = "-";
  /// config.d is ignored; the arity comes from `d` or the first line.
  SjpcConfig config;
  std::optional<int> d;
  char delimiter = '\t';
  int threads = 1;
  std::optional<std::string> out;
};

struct ExactOptions {
  std::string input = "-";
  std::optional<int> d;
  char delimiter = '\t';
  int threads = 1;
  std::size_t cap = kDefaultOracleCap;
  std::optional<std::string> out;
};

struct SampleOptions {
  std::string input = "-";
  std::optional<int> d;
  int s = 1;
  std::size_t sample_size = 1000;
  std::uint64_t seed = 1;
  char delimiter = '\t';
  std::optional<std::string> out;
};

struct JoinOptions {
  std::string input_a;
  std::string input_b;
  SjpcConfig config;
  std::optional<int> d;
  char delimiter = '\t';
  int threads = 1;
  std::optional<std::string> out;
};

struct GenOptions {
  std::string kind;
  std::uint64_t n = 0;
  int d = 5;
  std::uint64_t seed = 1;
  /// Record file; the truth sidecar goes to out + ".truth.json".
  std::string out;
  char delimiter = '\t';
};

struct MonteCarloCommandOptions {
  /// Exactly one of input / kind. Files get their truth from the exact oracle.
  std::optional<std::string> input;
  std::optional<std::string> kind;
  std::uint64_t n = 0;
  std::optional<int> d;
  std::uint64_t data_seed = 1;
  SjpcConfig config;
  std::size_t trials = 30;
  /// Random-sampling budget; defaults to the estimator's counter memory in
  /// record bytes. 0 disables the sampling rows.
  std::optional<std::size_t> sample_size;
  char delimiter = '\t';
  int threads = 1;
  std::size_t cap = kDefaultOracleCap;
  std::optional<std::string> out;
};

int cmd_estimate(const EstimateOptions& opts, std::ostream& out, std::ostream& err);
int cmd_exact(const ExactOptions& opts, std::ostream& out, std::ostream& err);
int cmd_sample(const SampleOptions& opts, std::ostream& out, std::ostream& err);
int cmd_join(const JoinOptions& opts, std::ostream& out, std::ostream& err);
int cmd_gen(const GenOptions& opts, std::ostream& out, std::ostream& err);
int cmd_montecarlo(const MonteCarloCommandOptions& opts, std::ostream& out, std::ostream& err);

}  // namespace sjpc
