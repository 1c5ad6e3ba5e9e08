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

#include "sjpc/subvalues.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace sjpc {

namespace {

void append_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void append_header(std::string& out, const ColumnCombination& c) {
  append_u32(out, static_cast<std::uint32_t>(c.level()));
  append_u64(out, c.rank);
}

void append_field(std::string& out, std::string_view field) {
  append_u32(out, static_cast<std::uint32_t>(field.size()));
  out.append(field);
}

void check_ratio(double r) {
  if (!(r > 0.0 && r <= 1.0)) throw std::invalid_argument("sampling ratio must be in (0, 1]");
}

}  // namespace

std::vector<std::string_view> field_views(const Record& rec) {
  return {rec.fields.begin(), rec.fields.end()};
}

SamplingPlan::SamplingPlan(int d_, double r_, std::uint64_t seed) : d(d_), r(r_), fingerprint_seed(seed) {
  if (d < 1) throw std::invalid_argument("sampling plan requires d >= 1");
  check_ratio(r);
}

double SamplingPlan::expected_size(int k) const { return r * static_cast<double>(choose(d, k)); }

std::size_t sample_level_size(int d, int k, double r, Rng& rng) {
  check_ratio(r);
  const auto total = choose(d, k);
  const double expected = r * static_cast<double>(total);
  const double whole = std::floor(expected);
  auto size = static_cast<std::size_t>(whole);
  const double frac = expected - whole;
  if (frac > 0.0 && rng.uniform01() < frac) ++size;
  return std::min<std::size_t>(size, total);
}

std::string encode_subvalue(const ColumnCombination& c, std::span<const std::string_view> projected) {
  if (projected.size() != c.indices.size()) {
    throw std::invalid_argument("sub-value arity " + std::to_string(projected.size()) +
                                " does not match combination level " + std::to_string(c.level()));
  }
  std::string out;
  append_header(out, c);
  for (auto field : projected) append_field(out, field);
  return out;
}

std::string encode_subvalue(const ColumnCombination& c, std::span<const std::string> projected) {
  std::vector<std::string_view> views(projected.begin(), projected.end());
  return encode_subvalue(c, views);
}

LevelSampler::LevelSampler(int d, int k, double r)
    : d_(d), k_(k), r_(r), combos_(enumerate_combinations(d, k)) {
  check_ratio(r);
  ranks_.resize(combos_.size());
}

std::span<const std::uint32_t> LevelSampler::draw(Rng& rng) {
  const std::size_t total = combos_.size();
  const std::size_t size = sample_level_size(d_, k_, r_, rng);
  // The permutation restarts from identity so a record's sample depends
  // only on its own random stream.
  std::iota(ranks_.begin(), ranks_.end(), 0U);
  if (size < total) {
    for (std::size_t i = 0; i < size; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(rng.below(total - i));
      std::swap(ranks_[i], ranks_[j]);
    }
  }
  return {ranks_.data(), size};
}

std::string_view LevelSampler::encode(const ColumnCombination& c, std::span<const std::string_view> fields) {
  buffer_.clear();
  append_header(buffer_, c);
  for (int idx : c.indices) append_field(buffer_, fields[static_cast<std::size_t>(idx)]);
  return buffer_;
}

std::vector<SubValue> emit_subvalues(const Record& rec, int k, const SamplingPlan& plan, Rng& rng) {
  if (static_cast<int>(rec.arity()) != plan.d) {
    throw std::invalid_argument("record arity does not match the sampling plan");
  }
  LevelSampler sampler(plan.d, k, plan.r);
  const auto views = field_views(rec);
  std::vector<SubValue> out;
  for (std::uint32_t rank : sampler.draw(rng)) {
    SubValue sv;
    sv.combination = sampler.combination(rank);
    for (int idx : sv.combination.indices) sv.projected.push_back(rec.fields[static_cast<std::size_t>(idx)]);
    sv.encoded = std::string(sampler.encode(sv.combination, views));
    sv.fp = fingerprint(sv.encoded, plan.fingerprint_seed);
    out.push_back(std::move(sv));
  }
  return out;
}

}  // namespace sjpc
