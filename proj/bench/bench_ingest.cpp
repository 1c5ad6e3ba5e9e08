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

// Serial reference paths against their OpenMP counterparts.

#include <benchmark/benchmark.h>
#include <omp.h>

#include <vector>

#include "sjpc/baselines.hpp"
#include "sjpc/estimator.hpp"
#include "sjpc/ingest.hpp"
#include "sjpc/synthetic.hpp"

namespace {

const std::vector<sjpc::Record>& dataset(std::uint64_t n) {
  static std::uint64_t cached_n = 0;
  static std::vector<sjpc::Record> data;
  if (cached_n != n) {
    data = sjpc::generate_synthetic(sjpc::SyntheticKind::skewed_20_80, n, 5, 1);
    cached_n = n;
  }
  return data;
}

sjpc::SjpcConfig config(sjpc::EstimationMode mode) {
  sjpc::SjpcConfig c;
  c.d = 5;
  c.s = 2;
  c.r = 0.5;
  c.mode = mode;
  return c;
}

void BM_IngestSerial(benchmark::State& state) {
  const auto& data = dataset(static_cast<std::uint64_t>(state.range(0)));
  const auto mode = static_cast<sjpc::EstimationMode>(state.range(1));
  for (auto _ : state) {
    sjpc::SjpcState st(config(mode));
    sjpc::ingest_serial(st, data, 0);
    benchmark::DoNotOptimize(st.level_estimate(2));
  }
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}

void BM_IngestParallel(benchmark::State& state) {
  const auto& data = dataset(static_cast<std::uint64_t>(state.range(0)));
  const auto mode = static_cast<sjpc::EstimationMode>(state.range(1));
  const int threads = omp_get_max_threads();
  for (auto _ : state) {
    sjpc::SjpcState st(config(mode));
    sjpc::ingest_parallel(st, data, 0, threads);
    benchmark::DoNotOptimize(st.level_estimate(2));
  }
  state.counters["threads"] = threads;
  state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(data.size()));
}

void BM_ExactSerial(benchmark::State& state) {
  const auto& data = dataset(static_cast<std::uint64_t>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(sjpc::exact_pair_counts(data).g[2]);
}

void BM_ExactParallel(benchmark::State& state) {
  const auto& data = dataset(static_cast<std::uint64_t>(state.range(0)));
  const int threads = omp_get_max_threads();
  for (auto _ : state) benchmark::DoNotOptimize(sjpc::exact_pair_counts_parallel(data, threads).g[2]);
  state.counters["threads"] = threads;
}

// Second argument: 0 = online sketch, 1 = offline exact.
BENCHMARK(BM_IngestSerial)->Args({100000, 0})->Args({100000, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_IngestParallel)->Args({100000, 0})->Args({100000, 1})->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactSerial)->Arg(4000)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_ExactParallel)->Arg(4000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
