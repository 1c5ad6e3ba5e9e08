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

#include "sjpc/sketch.hpp"

#include <algorithm>
#include <array>
#include <istream>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>
#include <string>

namespace sjpc {

namespace {

constexpr std::array<char, 8> kMagic{'S', 'J', 'P', 'C', 'F', 'A', 'G', 'M'};
constexpr std::uint32_t kFormatVersion = 1;

void put_u64(std::ostream& out, std::uint64_t v) {
  std::array<char, 8> buf;
  for (int i = 0; i < 8; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> buf;
  for (int i = 0; i < 4; ++i) buf[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(buf.data(), buf.size());
}

std::uint64_t get_u64(std::istream& in) {
  std::array<unsigned char, 8> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw std::runtime_error("truncated sketch blob");
  }
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

std::uint32_t get_u32(std::istream& in) {
  std::array<unsigned char, 4> buf;
  if (!in.read(reinterpret_cast<char*>(buf.data()), buf.size())) {
    throw std::runtime_error("truncated sketch blob");
  }
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | buf[i];
  return v;
}

}  // namespace

double aggregate(std::vector<double> values, DepthAggregation mode) {
  if (values.empty()) return 0.0;
  if (mode == DepthAggregation::mean) {
    return std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
  }
  const auto mid = values.begin() + static_cast<std::ptrdiff_t>((values.size() - 1) / 2);
  std::nth_element(values.begin(), mid, values.end());
  return *mid;
}

FastAgmsSketch::FastAgmsSketch(std::size_t width, std::size_t depth, std::uint64_t master_seed,
                               int level)
    : width_(width), depth_(depth), master_seed_(master_seed), level_(level) {
  if (width == 0 || depth == 0) throw std::invalid_argument("sketch width and depth must be >= 1");
  bucket_seeds_.reserve(depth);
  sign_seeds_.reserve(depth);
  for (std::size_t j = 0; j < depth; ++j) {
    bucket_seeds_.push_back(derive_hash4_seed(master_seed, level, static_cast<int>(j), HashPurpose::bucket));
    sign_seeds_.push_back(derive_hash4_seed(master_seed, level, static_cast<int>(j), HashPurpose::sign));
  }
  counters_.assign(width * depth, 0);
}

void FastAgmsSketch::insert(Fingerprint key) {
  if (items_inserted_ == static_cast<std::uint64_t>(std::numeric_limits<std::int64_t>::max())) {
    throw std::overflow_error("sketch counter capacity exhausted");
  }
  for (std::size_t j = 0; j < depth_; ++j) {
    counters_[j * width_ + hash4_bucket(bucket_seeds_[j], key, width_)] += hash4_sign(sign_seeds_[j], key);
  }
  ++items_inserted_;
}

double FastAgmsSketch::row_f2(std::size_t j) const {
  double sum = 0.0;
  for (std::int64_t c : row(j)) sum += static_cast<double>(c) * static_cast<double>(c);
  return sum;
}

double FastAgmsSketch::estimate_f2(DepthAggregation mode) const {
  std::vector<double> rows(depth_);
  for (std::size_t j = 0; j < depth_; ++j) rows[j] = row_f2(j);
  return aggregate(std::move(rows), mode);
}

bool FastAgmsSketch::compatible_with(const FastAgmsSketch& other) const {
  return width_ == other.width_ && depth_ == other.depth_ && master_seed_ == other.master_seed_ &&
         level_ == other.level_;
}

void FastAgmsSketch::merge(const FastAgmsSketch& other) {
  if (!compatible_with(other)) throw std::invalid_argument("cannot merge incompatible sketches");
  for (std::size_t i = 0; i < counters_.size(); ++i) counters_[i] += other.counters_[i];
  items_inserted_ += other.items_inserted_;
}

FastAgmsSketch merged(FastAgmsSketch a, const FastAgmsSketch& b) {
  a.merge(b);
  return a;
}

double inner_product(const FastAgmsSketch& a, const FastAgmsSketch& b, DepthAggregation mode) {
  if (!a.compatible_with(b)) throw std::invalid_argument("inner product of incompatible sketches");
  std::vector<double> rows(a.depth());
  for (std::size_t j = 0; j < a.depth(); ++j) {
    const auto ra = a.row(j);
    const auto rb = b.row(j);
    double sum = 0.0;
    for (std::size_t i = 0; i < ra.size(); ++i) sum += static_cast<double>(ra[i]) * static_cast<double>(rb[i]);
    rows[j] = sum;
  }
  return aggregate(std::move(rows), mode);
}

void FastAgmsSketch::serialize(std::ostream& out) const {
  out.write(kMagic.data(), kMagic.size());
  put_u32(out, kFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(width_));
  put_u32(out, static_cast<std::uint32_t>(depth_));
  put_u32(out, static_cast<std::uint32_t>(level_));
  put_u64(out, master_seed_);
  put_u64(out, items_inserted_);
  for (std::int64_t c : counters_) put_u64(out, static_cast<std::uint64_t>(c));
}

FastAgmsSketch FastAgmsSketch::deserialize(std::istream& in) {
  std::array<char, 8> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kMagic) {
    throw std::runtime_error("not a sketch blob (bad magic)");
  }
  if (const auto version = get_u32(in); version != kFormatVersion) {
    throw std::runtime_error("unsupported sketch blob version " + std::to_string(version));
  }
  const std::size_t width = get_u32(in);
  const std::size_t depth = get_u32(in);
  const int level = static_cast<int>(get_u32(in));
  const std::uint64_t seed = get_u64(in);
  FastAgmsSketch sk(width, depth, seed, level);
  sk.items_inserted_ = get_u64(in);
  for (auto& c : sk.counters_) c = static_cast<std::int64_t>(get_u64(in));
  return sk;
}

}  // namespace sjpc
