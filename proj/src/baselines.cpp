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

#include "sjpc/baselines.hpp"

#include <omp.h>

#include <string>
#include <unordered_map>

#include "sjpc/combinatorics.hpp"
#include "sjpc/estimator.hpp"

namespace sjpc {

namespace {

int common_arity(std::span<const Record> data, int d) {
  for (std::size_t i = 0; i < data.size(); ++i) {
    if (d < 0) d = static_cast<int>(data[i].arity());
    if (data[i].arity() != static_cast<std::size_t>(d)) {
      throw ArityError(i, static_cast<std::size_t>(d), data[i].arity());
    }
  }
  return d < 0 ? 0 : d;
}

void check_cap(std::size_t n, std::size_t cap) {
  if (n > cap) {
    throw ResourceCapError("oracle input of " + std::to_string(n) + " records exceeds the cap of " +
                           std::to_string(cap));
  }
}

std::vector<std::uint64_t> level_self_join_sizes(std::span<const Record> data, int d) {
  std::vector<std::uint64_t> y(static_cast<std::size_t>(d) + 1, 0);
  y[0] = static_cast<std::uint64_t>(data.size()) * data.size();
  for (int k = 1; k <= d; ++k) {
    std::unordered_map<std::string, std::uint64_t> freq;
    for (const auto& c : enumerate_combinations(d, k)) {
      std::vector<std::string_view> projected(c.indices.size());
      for (const auto& rec : data) {
        for (std::size_t i = 0; i < c.indices.size(); ++i) {
          projected[i] = rec.fields[static_cast<std::size_t>(c.indices[i])];
        }
        ++freq[encode_subvalue(c, projected)];
      }
    }
    for (const auto& [key, count] : freq) y[k] += count * count;
  }
  return y;
}

ExactCounts assemble(std::span<const Record> data, int d, std::vector<std::uint64_t> x) {
  ExactCounts out;
  out.d = d;
  out.n = data.size();
  out.x = std::move(x);
  out.y = level_self_join_sizes(data, d);
  out.g.assign(static_cast<std::size_t>(d) + 1, 0);
  std::uint64_t running = out.n;
  for (int s = d; s >= 0; --s) {
    running += out.x[s];
    out.g[s] = running;
  }
  return out;
}

}  // namespace

std::uint64_t CrossCounts::at_least(int s) const {
  std::uint64_t sum = 0;
  for (int k = std::max(s, 0); k <= d; ++k) sum += x[k];
  return sum;
}

int agreement(const Record& a, const Record& b) {
  int same = 0;
  for (std::size_t i = 0; i < a.fields.size(); ++i) same += a.fields[i] == b.fields[i] ? 1 : 0;
  return same;
}

ExactCounts exact_pair_counts(std::span<const Record> data, std::size_t cap) {
  check_cap(data.size(), cap);
  const int d = common_arity(data, -1);
  std::vector<std::uint64_t> x(static_cast<std::size_t>(d) + 1, 0);
  for (std::size_t i = 0; i < data.size(); ++i) {
    for (std::size_t j = i + 1; j < data.size(); ++j) x[agreement(data[i], data[j])] += 2;
  }
  return assemble(data, d, std::move(x));
}

ExactCounts exact_pair_counts_parallel(std::span<const Record> data, int threads, std::size_t cap) {
  check_cap(data.size(), cap);
  const int d = common_arity(data, -1);
  const std::size_t levels = static_cast<std::size_t>(d) + 1;
  std::vector<std::uint64_t> x(levels, 0);
  const auto n = static_cast<std::int64_t>(data.size());

#pragma omp parallel num_threads(threads > 0 ? threads : 1)
  {
    std::vector<std::uint64_t> local(levels, 0);
#pragma omp for schedule(dynamic, 64)
    for (std::int64_t i = 0; i < n; ++i) {
      for (std::int64_t j = i + 1; j < n; ++j) local[agreement(data[i], data[j])] += 2;
    }
#pragma omp critical
    for (std::size_t k = 0; k < levels; ++k) x[k] += local[k];
  }
  return assemble(data, d, std::move(x));
}

CrossCounts exact_cross_pair_counts(std::span<const Record> a, std::span<const Record> b, std::size_t cap) {
  check_cap(std::max(a.size(), b.size()), cap);
  const int da = common_arity(a, -1);
  const int d = common_arity(b, a.empty() ? -1 : da);
  CrossCounts out;
  out.d = d;
  out.n_a = a.size();
  out.n_b = b.size();
  out.x.assign(static_cast<std::size_t>(d) + 1, 0);
  for (const auto& ra : a) {
    for (const auto& rb : b) ++out.x[agreement(ra, rb)];
  }
  return out;
}

ReservoirSampler::ReservoirSampler(std::size_t capacity, std::uint64_t seed)
    : capacity_(capacity), rng_(derive_seed(seed, {0x52534d50ULL})) {
  sample_.reserve(capacity);
}

void ReservoirSampler::offer(std::span<const std::string_view> fields) {
  ++seen_;
  if (sample_.size() < capacity_) {
    sample_.push_back(Record{{fields.begin(), fields.end()}});
    return;
  }
  const std::uint64_t slot = rng_.below(seen_);
  if (slot < capacity_) sample_[slot] = Record{{fields.begin(), fields.end()}};
}

void ReservoirSampler::offer(const Record& rec) {
  const auto views = field_views(rec);
  offer(views);
}

SamplingEstimate estimate_from_sample(std::span<const Record> sample, std::uint64_t n, int s) {
  SamplingEstimate est;
  est.d = common_arity(sample, -1);
  est.s = s;
  est.n = n;
  est.sample_size = sample.size();
  est.x.assign(static_cast<std::size_t>(est.d) + 1, 0.0);
  const double size = static_cast<double>(sample.size());
  if (sample.size() >= 2) {
    std::vector<std::uint64_t> counts(est.x.size(), 0);
    for (std::size_t i = 0; i < sample.size(); ++i) {
      for (std::size_t j = i + 1; j < sample.size(); ++j) counts[agreement(sample[i], sample[j])] += 2;
    }
    const double nn = static_cast<double>(n);
    const double scale = nn * (nn - 1.0) / (size * (size - 1.0));
    for (std::size_t k = 0; k < counts.size(); ++k) est.x[k] = static_cast<double>(counts[k]) * scale;
  }
  est.g_s = static_cast<double>(n);
  for (int k = std::max(s, 0); k <= est.d; ++k) est.g_s += est.x[k];
  return est;
}

SamplingEstimate random_sampling_estimate(std::span<const Record> stream, std::size_t sample_size, int s,
                                          std::uint64_t seed) {
  if (sample_size < 2) throw std::invalid_argument("random sampling needs a sample size of at least 2");
  ReservoirSampler reservoir(sample_size, seed);
  for (const auto& rec : stream) reservoir.offer(rec);
  SamplingEstimate est = estimate_from_sample(reservoir.sample(), reservoir.seen(), s);
  est.undersized = reservoir.seen() < sample_size;
  return est;
}

}  // namespace sjpc
