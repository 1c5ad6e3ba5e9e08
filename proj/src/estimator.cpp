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

#include "sjpc/estimator.hpp"

#include <cmath>
#include <string>

#include "sjpc/combinatorics.hpp"

namespace sjpc {

namespace {

double binom(int n, int k) { return static_cast<double>(choose(n, k)); }

void check_levels(int d, int s) {
  if (d < 1 || s < 1 || s > d) {
    throw std::invalid_argument("need 1 <= s <= d, got d=" + std::to_string(d) + " s=" + std::to_string(s));
  }
}

void check_ratio(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("sampling ratio must be in (0, 1]");
}

double at(const LevelMap& m, int k) {
  const auto it = m.find(k);
  if (it == m.end()) throw std::invalid_argument("missing value for level " + std::to_string(k));
  return it->second;
}

// Shared shape of the self-join and join recursions.
LevelMap downward_recursion(const LevelMap& y, const LevelMap* self_pairs, int d, int s, double r,
                            bool clamp) {
  check_levels(d, s);
  check_ratio(r);
  const double r2 = r * r;
  LevelMap x;
  for (int k = d; k >= s; --k) {
    double value = at(y, k);
    if (self_pairs != nullptr) value -= at(*self_pairs, k);
    value /= r2;
    for (int j = k + 1; j <= d; ++j) value -= binom(j, k) * x.at(j);
    if (clamp && value < 0.0) value = 0.0;
    x[k] = value;
  }
  return x;
}

double sum_values(const LevelMap& m) {
  double sum = 0.0;
  for (const auto& [k, v] : m) sum += v;
  return sum;
}

}  // namespace

void SjpcConfig::validate() const {
  check_levels(d, s);
  check_ratio(r);
  if (width < 1 || depth < 1) throw std::invalid_argument("sketch width and depth must be >= 1");
}

ArityError::ArityError(std::uint64_t position, std::size_t expected, std::size_t got)
    : std::invalid_argument("record " + std::to_string(position) + ": expected " + std::to_string(expected) +
                            " fields, got " + std::to_string(got)),
      position_(position) {}

double EstimateReport::g_at(int s) const {
  if (s < config.s || s > config.d) throw std::invalid_argument("threshold outside the estimated levels");
  double sum = 0.0;
  for (int k = s; k <= config.d; ++k) sum += x.at(k);
  return kind == ReportKind::self_join ? sum + static_cast<double>(n) : sum;
}

LevelMap solve_pair_counts(const LevelMap& y, int d, int s, double n, double r, bool clamp) {
  check_levels(d, s);
  LevelMap self_pairs;
  for (int k = s; k <= d; ++k) self_pairs[k] = r * binom(d, k) * n;
  return downward_recursion(y, &self_pairs, d, s, r, clamp);
}

LevelMap solve_pair_counts_with_self_pairs(const LevelMap& y, const LevelMap& self_pairs, int d, int s,
                                           double r, bool clamp) {
  return downward_recursion(y, &self_pairs, d, s, r, clamp);
}

double closed_form_constant(int k, int d, double n, double r) {
  check_ratio(r);
  // The self-pair terms -C(d,j) n / r pushed through the inverse of the
  // binomial triangle.
  double c = 0.0;
  for (int j = k; j <= d; ++j) {
    const double term = binom(j, k) * binom(d, j);
    c += ((j - k) % 2 == 0) ? term : -term;
  }
  return -(n / r) * c;
}

LevelMap solve_pair_counts_closed_form(const LevelMap& y, int d, int s, double n, double r) {
  check_levels(d, s);
  check_ratio(r);
  LevelMap x;
  for (int k = s; k <= d; ++k) {
    double acc = 0.0;
    for (int j = k; j <= d; ++j) {
      const double term = binom(j, k) * at(y, j);
      acc += ((j - k) % 2 == 0) ? term : -term;
    }
    x[k] = acc / (r * r) + closed_form_constant(k, d, n, r);
  }
  return x;
}

LevelMap join_solve_pair_counts(const LevelMap& y, int d, int s, double r, bool clamp) {
  return downward_recursion(y, nullptr, d, s, r, clamp);
}

namespace {

double bound_core(int d, int s, double r) {
  return binom(d, s) * binom(d, s) / r * binom(2 * (d - s), d - s);
}

}  // namespace

double variance_bound_offline(int d, int s, double r, double g_s) {
  check_levels(d, s);
  check_ratio(r);
  if (!(g_s > 0.0)) throw std::invalid_argument("variance bound requires g_s > 0");
  return bound_core(d, s, r) / g_s;
}

double variance_bound_online(int d, int s, double r, std::size_t w, double n, double g_s) {
  check_levels(d, s);
  check_ratio(r);
  if (!(g_s > 0.0)) throw std::invalid_argument("variance bound requires g_s > 0");
  if (w < 1) throw std::invalid_argument("variance bound requires w >= 1");
  if (n < 0.0) throw std::invalid_argument("variance bound requires n >= 0");
  const double two_over_w = 2.0 / static_cast<double>(w);
  const double skew = 1.0 + n / (r * g_s);
  return bound_core(d, s, r) * ((1.0 + two_over_w) / g_s + two_over_w * skew * skew);
}

SuggestedParameters suggest_parameters(double epsilon, double lambda, int d, int s, std::size_t w) {
  check_levels(d, s);
  if (!(epsilon > 0.0)) throw std::invalid_argument("epsilon must be positive");
  if (!(lambda > 0.0 && lambda < 1.0)) throw std::invalid_argument("lambda must be in (0, 1)");
  if (w < 1) throw std::invalid_argument("w must be >= 1");
  const double raw = 64.0 / (epsilon * epsilon * static_cast<double>(w)) * binom(d, s) * binom(d, s) *
                     binom(2 * (d - s), d - s);
  SuggestedParameters p;
  p.saturated = raw >= 1.0;
  p.r = std::min(1.0, raw);
  const double reps = std::ceil(2.0 * std::log(1.0 / lambda));
  p.depth = reps < 1.0 ? 1 : static_cast<std::size_t>(reps);
  return p;
}

Rng record_rng(std::uint64_t master_seed, std::uint64_t stream_id, std::uint64_t position) {
  return Rng(derive_seed(master_seed, {0x5245434fULL, stream_id, position}));
}

SjpcState::SjpcState(const SjpcConfig& config) : config_(config) {
  config_.validate();
  const int levels = config_.levels();
  levels_.reserve(levels);
  samplers_.reserve(levels);
  emitted_.assign(levels, 0);
  for (int k = config_.s; k <= config_.d; ++k) {
    if (config_.mode == EstimationMode::online_sketch) {
      levels_.emplace_back(std::in_place_type<FastAgmsSketch>, config_.width, config_.depth, config_.master_seed, k);
    } else {
      levels_.emplace_back(std::in_place_type<FrequencyMap>);
    }
    samplers_.emplace_back(config_.d, k, config_.r);
  }
}

std::size_t SjpcState::slot(int k) const {
  if (k < config_.s || k > config_.d) {
    throw std::invalid_argument("level " + std::to_string(k) + " outside [s, d]");
  }
  return static_cast<std::size_t>(k - config_.s);
}

void SjpcState::process_record(std::span<const std::string_view> fields) { process_record_at(fields, n_); }

void SjpcState::process_record(const Record& rec) {
  const auto views = field_views(rec);
  process_record_at(views, n_);
}

void SjpcState::process_record_at(std::span<const std::string_view> fields, std::uint64_t position) {
  if (fields.size() != static_cast<std::size_t>(config_.d)) {
    throw ArityError(position, static_cast<std::size_t>(config_.d), fields.size());
  }
  Rng rng = record_rng(config_.master_seed, config_.stream_id, position);
  for (std::size_t i = 0; i < samplers_.size(); ++i) {
    LevelSampler& sampler = samplers_[i];
    for (std::uint32_t rank : sampler.draw(rng)) {
      const Fingerprint fp = fingerprint(sampler.encode(sampler.combination(rank), fields), config_.master_seed);
      if (auto* sk = std::get_if<FastAgmsSketch>(&levels_[i])) {
        sk->insert(fp);
      } else {
        ++std::get<FrequencyMap>(levels_[i])[fp.value];
      }
      ++emitted_[i];
    }
  }
  ++n_;
}

double SjpcState::level_estimate(int k) const {
  const auto& store = levels_[slot(k)];
  if (const auto* sk = std::get_if<FastAgmsSketch>(&store)) return sk->estimate_f2(config_.aggregation);
  double sum = 0.0;
  for (const auto& [key, count] : std::get<FrequencyMap>(store)) {
    sum += static_cast<double>(count) * static_cast<double>(count);
  }
  return sum;
}

std::uint64_t SjpcState::emitted(int k) const { return emitted_[slot(k)]; }

EstimateReport SjpcState::finalize() const {
  EstimateReport rep;
  rep.kind = ReportKind::self_join;
  rep.config = config_;
  rep.n = n_;
  const double n = static_cast<double>(n_);
  for (int k = config_.s; k <= config_.d; ++k) {
    rep.y[k] = level_estimate(k);
    rep.self_pairs[k] = config_.self_pairs == SelfPairTerm::realized
                            ? static_cast<double>(emitted(k))
                            : config_.r * binom(config_.d, k) * n;
  }
  rep.x = solve_pair_counts_with_self_pairs(rep.y, rep.self_pairs, config_.d, config_.s, config_.r,
                                            config_.clamp_negative);
  rep.pair_count = sum_values(rep.x);
  rep.g_s = rep.pair_count + n;
  if (rep.g_s > 0.0) {
    rep.bounds = VarianceBounds{
        variance_bound_offline(config_.d, config_.s, config_.r, rep.g_s),
        variance_bound_online(config_.d, config_.s, config_.r, config_.width, n, rep.g_s)};
  }
  return rep;
}

namespace {

bool same_summary_shape(const SjpcConfig& a, const SjpcConfig& b) {
  return a.d == b.d && a.s == b.s && a.r == b.r && a.width == b.width && a.depth == b.depth &&
         a.master_seed == b.master_seed && a.mode == b.mode;
}

}  // namespace

void SjpcState::merge(const SjpcState& other) {
  if (!same_summary_shape(config_, other.config_) || config_.stream_id != other.config_.stream_id) {
    throw std::invalid_argument("cannot merge states with different configurations");
  }
  for (std::size_t i = 0; i < levels_.size(); ++i) {
    if (auto* sk = std::get_if<FastAgmsSketch>(&levels_[i])) {
      sk->merge(std::get<FastAgmsSketch>(other.levels_[i]));
    } else {
      auto& mine = std::get<FrequencyMap>(levels_[i]);
      for (const auto& [key, count] : std::get<FrequencyMap>(other.levels_[i])) mine[key] += count;
    }
    emitted_[i] += other.emitted_[i];
  }
  n_ += other.n_;
}

std::size_t SjpcState::summary_bytes() const {
  std::size_t bytes = 0;
  for (const auto& store : levels_) {
    if (const auto* sk = std::get_if<FastAgmsSketch>(&store)) {
      bytes += sk->counter_bytes();
    } else {
      bytes += std::get<FrequencyMap>(store).size() * 2 * sizeof(std::uint64_t);
    }
  }
  return bytes;
}

const FastAgmsSketch& SjpcState::sketch(int k) const {
  const auto* sk = std::get_if<FastAgmsSketch>(&levels_[slot(k)]);
  if (sk == nullptr) throw std::logic_error("state is in offline mode");
  return *sk;
}

const FrequencyMap& SjpcState::frequencies(int k) const {
  const auto* map = std::get_if<FrequencyMap>(&levels_[slot(k)]);
  if (map == nullptr) throw std::logic_error("state is in online mode");
  return *map;
}

EstimateReport sjpc_join_finalize(const SjpcState& a, const SjpcState& b) {
  const SjpcConfig& ca = a.config();
  const SjpcConfig& cb = b.config();
  if (!same_summary_shape(ca, cb)) {
    throw std::invalid_argument("join requires identical d, s, r, width, depth, seed and mode");
  }
  if (ca.r < 1.0 && ca.stream_id == cb.stream_id) {
    throw std::invalid_argument("joined relations need distinct sampling stream ids when r < 1");
  }
  EstimateReport rep;
  rep.kind = ReportKind::join;
  rep.config = ca;
  rep.n = a.records();
  rep.n_other = b.records();
  for (int k = ca.s; k <= ca.d; ++k) {
    if (ca.mode == EstimationMode::online_sketch) {
      rep.y[k] = inner_product(a.sketch(k), b.sketch(k), ca.aggregation);
    } else {
      const auto& fa = a.frequencies(k);
      const auto& fb = b.frequencies(k);
      const auto& small = fa.size() <= fb.size() ? fa : fb;
      const auto& large = fa.size() <= fb.size() ? fb : fa;
      double sum = 0.0;
      for (const auto& [key, count] : small) {
        if (const auto it = large.find(key); it != large.end()) {
          sum += static_cast<double>(count) * static_cast<double>(it->second);
        }
      }
      rep.y[k] = sum;
    }
  }
  rep.x = join_solve_pair_counts(rep.y, ca.d, ca.s, ca.r, ca.clamp_negative);
  rep.pair_count = sum_values(rep.x);
  rep.g_s = rep.pair_count;
  return rep;
}

std::string_view to_string(EstimationMode mode) {
  return mode == EstimationMode::online_sketch ? "online" : "offline";
}

std::string_view to_string(SelfPairTerm term) {
  return term == SelfPairTerm::realized ? "realized" : "expected";
}

}  // namespace sjpc
