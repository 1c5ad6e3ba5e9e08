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

#include <cmath>
#include <map>
#include <set>
#include <stdexcept>

#include "doctest.h"
#include "oracle/oracle.hpp"
#include "sjpc/subvalues.hpp"

using namespace sjpc;

namespace {

// Byte layout written out by hand: u32 level, u64 rank, then u32-length-prefixed fields.
std::string reference_encoding(std::uint32_t level, std::uint64_t rank, const std::vector<std::string>& vals) {
  std::string out;
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(level >> (8 * i)));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>(rank >> (8 * i)));
  for (const auto& v : vals) {
    const auto len = static_cast<std::uint32_t>(v.size());
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>(len >> (8 * i)));
    out += v;
  }
  return out;
}

}  // namespace

TEST_CASE("integer sample sizes are exact") {
  Rng rng(1);
  for (int i = 0; i < 100; ++i) CHECK(sample_level_size(3, 2, 1.0, rng) == 3);
  CHECK(sample_level_size(6, 4, 0.4, rng) == 6);
  CHECK_THROWS_AS(sample_level_size(3, 2, 0.0, rng), std::invalid_argument);
  CHECK_THROWS_AS(sample_level_size(3, 2, 1.5, rng), std::invalid_argument);
}

TEST_CASE("Bernoulli rounding of fractional sample sizes") {
  Rng rng(2);
  const int draws = 100000;
  double sum = 0;
  for (int i = 0; i < draws; ++i) {
    const auto s = sample_level_size(3, 2, 0.5, rng);
    CHECK((s == 1 || s == 2));
    sum += static_cast<double>(s);
  }
  CHECK(std::abs(sum / draws - 1.5) < 0.01);

  sum = 0;
  for (int i = 0; i < draws; ++i) {
    const auto s = sample_level_size(6, 4, 0.5, rng);
    CHECK((s == 7 || s == 8));
    sum += static_cast<double>(s);
  }
  CHECK(std::abs(sum / draws - 7.5) < 0.01);
  CHECK(SamplingPlan(6, 0.5).expected_size(4) == 7.5);
}

TEST_CASE("encoding is tagged by combination and length-prefixed") {
  const auto ab = unrank_combination(3, 2, 0);
  const auto ac = unrank_combination(3, 2, 1);
  const std::vector<std::string> vals{"a1", "b1"};
  CHECK(encode_subvalue(ab, vals) != encode_subvalue(ac, vals));
  CHECK(encode_subvalue(ab, vals) == encode_subvalue(ab, vals));
  CHECK(encode_subvalue(ab, vals) == reference_encoding(2, 0, vals));
  CHECK(encode_subvalue(ac, vals) == reference_encoding(2, 1, vals));

  const std::vector<std::string> x{"a.b", "c"};
  const std::vector<std::string> y{"a", "b.c"};
  CHECK(encode_subvalue(ab, x) != encode_subvalue(ab, y));
  const std::vector<std::string> empty_fields{"", ""};
  CHECK(encode_subvalue(ab, empty_fields) == reference_encoding(2, 0, empty_fields));
  CHECK_THROWS_AS(encode_subvalue(ab, std::vector<std::string>{"a"}), std::invalid_argument);
}

TEST_CASE("full ratio emits every projection") {
  const auto t = oracle::table1();
  SamplingPlan plan(3, 1.0, 1);
  Rng rng(3);
  const auto subs = emit_subvalues(t[0], 2, plan, rng);
  REQUIRE(subs.size() == 3);
  std::set<std::vector<int>> cols;
  for (const auto& sv : subs) {
    cols.insert(sv.combination.indices);
    std::vector<std::string> expect;
    for (int c : sv.combination.indices) expect.push_back(t[0].fields[c]);
    CHECK(sv.projected == expect);
    CHECK(sv.encoded == reference_encoding(2, sv.combination.rank, expect));
    CHECK(sv.fp == fingerprint(sv.encoded, 1));
  }
  CHECK(cols == std::set<std::vector<int>>{{0, 1}, {0, 2}, {1, 2}});

  const auto top = emit_subvalues(t[0], 3, plan, rng);
  REQUIRE(top.size() == 1);
  CHECK(top[0].projected == t[0].fields);
  CHECK_THROWS_AS(emit_subvalues(Record{{"a", "b"}}, 2, plan, rng), std::invalid_argument);
}

TEST_CASE("each combination is included with probability r") {
  const Record rec{{"a", "b", "c", "d", "e", "f"}};
  SamplingPlan plan(6, 0.5);
  Rng rng(4);
  std::map<std::uint64_t, int> hits;
  const int records = 100000;
  for (int i = 0; i < records; ++i) {
    std::set<std::uint64_t> distinct;
    for (const auto& sv : emit_subvalues(rec, 5, plan, rng)) {
      ++hits[sv.combination.rank];
      distinct.insert(sv.combination.rank);
    }
    REQUIRE(distinct.size() == 3);
  }
  REQUIRE(hits.size() == 6);
  for (const auto& [rank, h] : hits) CHECK(std::abs(static_cast<double>(h) / records - 0.5) < 0.01);
}

TEST_CASE("level sampler draws distinct ranks and encodes like encode_subvalue") {
  LevelSampler sampler(5, 3, 0.7);
  CHECK(sampler.combination_count() == 10);
  const Record rec{{"p", "q", "r", "s", "t"}};
  const auto views = field_views(rec);
  Rng rng(5);
  for (int i = 0; i < 1000; ++i) {
    const auto ranks = sampler.draw(rng);
    CHECK((ranks.size() == 7));
    std::set<std::uint32_t> uniq(ranks.begin(), ranks.end());
    CHECK(uniq.size() == ranks.size());
    for (auto r : uniq) CHECK(r < 10);
  }
  const auto& c = sampler.combination(4);
  std::vector<std::string> proj;
  for (int idx : c.indices) proj.push_back(rec.fields[idx]);
  CHECK(std::string(sampler.encode(c, views)) == encode_subvalue(c, proj));
}
