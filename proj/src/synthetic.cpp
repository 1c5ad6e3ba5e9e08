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

#include "sjpc/synthetic.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "sjpc/hashing.hpp"

namespace sjpc {

namespace {

struct KindShape {
  double grouped_fraction;
  std::size_t group_size;
};

KindShape shape_of(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::near_uniform_40_60: return {0.6, 2};
    case SyntheticKind::skewed_20_80: return {0.8, 16};
    case SyntheticKind::skewed_10_90: return {0.9, 81};
    case SyntheticKind::planted_lemma1: return {1.0, 2};
  }
  throw std::invalid_argument("unknown synthetic kind");
}

constexpr std::uint64_t kGroupTag = 1;
constexpr std::uint64_t kUniqueTag = 2;
constexpr std::uint64_t kSharedMember = 0xfff;

void write_hex(std::uint64_t v, std::string& out) {
  out.assign(16, '0');
  std::array<char, 16> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v, 16);
  const auto len = static_cast<std::size_t>(end - buf.data());
  out.replace(16 - len, len, buf.data(), len);
}

}  // namespace

SyntheticKind parse_synthetic_kind(std::string_view name) {
  if (name == "near_uniform_40_60") return SyntheticKind::near_uniform_40_60;
  if (name == "skewed_20_80") return SyntheticKind::skewed_20_80;
  if (name == "skewed_10_90") return SyntheticKind::skewed_10_90;
  if (name == "planted_lemma1") return SyntheticKind::planted_lemma1;
  throw std::invalid_argument("unknown dataset kind '" + std::string(name) + "'");
}

std::string_view to_string(SyntheticKind kind) {
  switch (kind) {
    case SyntheticKind::near_uniform_40_60: return "near_uniform_40_60";
    case SyntheticKind::skewed_20_80: return "skewed_20_80";
    case SyntheticKind::skewed_10_90: return "skewed_10_90";
    case SyntheticKind::planted_lemma1: return "planted_lemma1";
  }
  return "unknown";
}

SyntheticDataset::SyntheticDataset(SyntheticKind kind, std::uint64_t n, int d, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("synthetic dataset needs n >= 1");
  if (d < 2 || d > 255) throw std::invalid_argument("synthetic dataset needs 2 <= d <= 255");
  if (n >= (std::uint64_t{1} << 40)) throw std::invalid_argument("synthetic dataset size too large");

  const KindShape shape = shape_of(kind);
  SyntheticTruth& t = truth_;
  t.kind = kind;
  t.n = n;
  t.d = d;
  t.seed = seed;
  t.group_size = shape.group_size;

  const auto grouped = static_cast<std::uint64_t>(std::llround(shape.grouped_fraction * static_cast<double>(n)));
  const std::uint64_t full = grouped / shape.group_size;
  const std::uint64_t rest = grouped % shape.group_size;
  t.groups = full + (rest >= 2 ? 1 : 0);
  t.grouped_records = full * shape.group_size + (rest >= 2 ? rest : 0);

  std::uint64_t similar = full * shape.group_size * (shape.group_size - 1);
  if (rest >= 2) similar += rest * (rest - 1);
  t.x.assign(static_cast<std::size_t>(d) + 1, 0);
  t.x[d - 1] = similar;
  t.x[0] = n * (n - 1) - similar;
  t.g.assign(static_cast<std::size_t>(d) + 1, 0);
  std::uint64_t running = n;
  for (int s = d; s >= 0; --s) {
    running += t.x[s];
    t.g[s] = running;
  }

  value_key_ = mix64(seed ^ 0x53594e5448ULL);
  // Affine permutation of positions; stride must be coprime to n.
  stride_ = n == 1 ? 1 : 1 + mix64(value_key_ + 1) % (n - 1);
  while (std::gcd(stride_, n) != 1) stride_ = stride_ % (n - 1) + 1;
  offset_ = mix64(value_key_ + 2) % n;
}

void SyntheticDataset::record_at(std::uint64_t position, Record& out) const {
  if (position >= truth_.n) throw std::out_of_range("synthetic record position out of range");
  const auto index = static_cast<std::uint64_t>(
      (static_cast<u128>(position) * stride_ + offset_) % truth_.n);
  const int d = truth_.d;
  out.fields.resize(static_cast<std::size_t>(d));

  // mix64 is a bijection, so distinct (tag, entity, member, column) tuples
  // give distinct values.
  auto value = [&](std::uint64_t tag, std::uint64_t entity, std::uint64_t member, int column) {
    return mix64(value_key_ ^ ((tag << 60) | (entity << 20) | (member << 8) | static_cast<std::uint64_t>(column)));
  };

  if (index < truth_.grouped_records) {
    const std::uint64_t group = index / truth_.group_size;
    const std::uint64_t member = index % truth_.group_size;
    const auto varying = static_cast<int>(mix64(value_key_ ^ (group * 0x9e3779b97f4a7c15ULL)) % d);
    for (int c = 0; c < d; ++c) {
      const std::uint64_t v = value(kGroupTag, group, c == varying ? member : kSharedMember, c);
      write_hex(v, out.fields[c]);
    }
  } else {
    const std::uint64_t unique = index - truth_.grouped_records;
    for (int c = 0; c < d; ++c) write_hex(value(kUniqueTag, unique, 0, c), out.fields[c]);
  }
}

Record SyntheticDataset::record_at(std::uint64_t position) const {
  Record rec;
  record_at(position, rec);
  return rec;
}

std::vector<Record> SyntheticDataset::materialize() const {
  std::vector<Record> out(truth_.n);
  for (std::uint64_t i = 0; i < truth_.n; ++i) record_at(i, out[i]);
  return out;
}

std::vector<Record> generate_synthetic(SyntheticKind kind, std::uint64_t n, int d, std::uint64_t seed) {
  return SyntheticDataset(kind, n, d, seed).materialize();
}

}  // namespace sjpc
