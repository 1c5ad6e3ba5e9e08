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

#include "sjpc/montecarlo.hpp"

#include <omp.h>

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "sjpc/baselines.hpp"
#include "sjpc/ingest.hpp"

namespace sjpc {

ErrorStats summarize(std::span<const double> estimates, double truth) {
  ErrorStats st;
  st.trials = estimates.size();
  st.truth = truth;
  if (estimates.empty()) return st;
  const double n = static_cast<double>(estimates.size());
  double sum = 0.0;
  for (double e : estimates) sum += e;
  st.mean_estimate = sum / n;

  double m2 = 0.0;
  double m4 = 0.0;
  for (double e : estimates) {
    const double dev = e - st.mean_estimate;
    m2 += dev * dev;
    m4 += dev * dev * dev * dev;
  }
  const double var = estimates.size() > 1 ? m2 / (n - 1.0) : 0.0;
  st.mean_se = std::sqrt(var / n);
  if (truth != 0.0) {
    st.mean_rel_err = (st.mean_estimate - truth) / truth;
    st.std_rel_err = std::sqrt(var) / std::abs(truth);
    st.var_ratio = var / (truth * truth);
    const double pop_m2 = m2 / n;
    const double pop_m4 = m4 / n;
    st.var_ratio_se = std::sqrt(std::max(0.0, pop_m4 - pop_m2 * pop_m2) / n) / (truth * truth);
  }
  return st;
}

std::uint64_t trial_seed(std::uint64_t master_seed, std::size_t trial) {
  return derive_seed(master_seed, {0x545249414cULL, static_cast<std::uint64_t>(trial)});
}

std::vector<std::vector<double>> sjpc_trials(std::span<const Record> data, const SjpcConfig& config,
                                             std::size_t trials, int threads) {
  config.validate();
  std::vector<std::vector<double>> out(trials);
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for num_threads(threads > 0 ? threads : 1) schedule(dynamic, 1)
  for (std::int64_t t = 0; t < count; ++t) {
    SjpcConfig cfg = config;
    cfg.master_seed = trial_seed(config.master_seed, static_cast<std::size_t>(t));
    SjpcState state(cfg);
    ingest_serial(state, data, 0);
    const EstimateReport rep = state.finalize();
    auto& row = out[static_cast<std::size_t>(t)];
    for (int s = cfg.s; s <= cfg.d; ++s) row.push_back(rep.g_at(s));
  }
  return out;
}

std::vector<std::vector<double>> sampling_trials(std::span<const Record> data, std::size_t sample_size, int s_min,
                                                 std::uint64_t master_seed, std::size_t trials, int threads) {
  std::vector<std::vector<double>> out(trials);
  const auto count = static_cast<std::int64_t>(trials);
#pragma omp parallel for num_threads(threads > 0 ? threads : 1) schedule(dynamic, 1)
  for (std::int64_t t = 0; t < count; ++t) {
    const auto est = random_sampling_estimate(data, sample_size, s_min,
                                              trial_seed(master_seed ^ 0x53414d50ULL, static_cast<std::size_t>(t)));
    auto& row = out[static_cast<std::size_t>(t)];
    for (int s = s_min; s <= est.d; ++s) {
      double g = static_cast<double>(est.n);
      for (int k = s; k <= est.d; ++k) g += est.x[k];
      row.push_back(g);
    }
  }
  return out;
}

double mean_record_bytes(std::span<const Record> data) {
  if (data.empty()) return 0.0;
  double total = 0.0;
  for (const auto& rec : data) {
    for (const auto& f : rec.fields) total += static_cast<double>(f.size());
  }
  return total / static_cast<double>(data.size());
}

std::size_t equal_memory_sample_size(const SjpcConfig& config, double record_bytes) {
  if (!(record_bytes > 0.0)) throw std::invalid_argument("record size must be positive");
  const double counter_bytes = static_cast<double>(config.levels()) * static_cast<double>(config.width) *
                               static_cast<double>(config.depth) * sizeof(std::int64_t);
  return static_cast<std::size_t>(counter_bytes / record_bytes);
}

std::vector<MonteCarloRow> run_montecarlo(std::span<const Record> data, std::span<const std::uint64_t> true_g,
                                          const MonteCarloOptions& options) {
  const SjpcConfig& cfg = options.config;
  cfg.validate();
  if (options.trials < 2) throw std::invalid_argument("Monte-Carlo needs at least 2 trials");
  if (true_g.size() < static_cast<std::size_t>(cfg.d) + 1) throw std::invalid_argument("truth table too short");

  std::vector<MonteCarloRow> rows;
  auto append = [&](const std::string& name, const std::vector<std::vector<double>>& runs) {
    for (int s = cfg.s; s <= cfg.d; ++s) {
      std::vector<double> column;
      column.reserve(runs.size());
      for (const auto& run : runs) column.push_back(run[static_cast<std::size_t>(s - cfg.s)]);
      MonteCarloRow row;
      row.s = s;
      row.estimator = name;
      const double truth = static_cast<double>(true_g[s]);
      row.stats = summarize(column, truth);
      if (truth > 0.0) {
        row.bound_offline = variance_bound_offline(cfg.d, s, cfg.r, truth);
        row.bound_online = variance_bound_online(cfg.d, s, cfg.r, cfg.width, static_cast<double>(data.size()), truth);
      }
      rows.push_back(std::move(row));
    }
  };

  append("sjpc_" + std::string(to_string(cfg.mode)), sjpc_trials(data, cfg, options.trials, options.threads));
  if (options.sample_size) {
    append("random_sampling",
           sampling_trials(data, *options.sample_size, cfg.s, cfg.master_seed, options.trials, options.threads));
  }
  return rows;
}

void write_montecarlo_csv(std::ostream& out, std::span<const MonteCarloRow> rows) {
  out << "s,estimator,trials,true_g,mean_estimate,mean_rel_err,std_rel_err,var_ratio,bound_offline,bound_online\n";
  const auto old_precision = out.precision(10);
  for (const auto& row : rows) {
    out << row.s << ',' << row.estimator << ',' << row.stats.trials << ',' << row.stats.truth << ','
        << row.stats.mean_estimate << ',' << row.stats.mean_rel_err << ',' << row.stats.std_rel_err << ','
        << row.stats.var_ratio << ',' << row.bound_offline << ',' << row.bound_online << '\n';
  }
  out.precision(old_precision);
}

}  // namespace sjpc
