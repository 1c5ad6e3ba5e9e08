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

#include "sjpc/hashing.hpp"

#define XXH_INLINE_ALL
#include "xxhash.h"

namespace sjpc {

std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path) {
  std::uint64_t h = mix64(master_seed ^ 0x5350'4a43'7365'6564ULL);
  std::uint64_t counter = 0;
  for (std::uint64_t step : path) {
    h = mix64(h + 0x9e3779b97f4a7c15ULL * ++counter + mix64(step));
  }
  return h;
}

Fingerprint fingerprint(std::string_view bytes, std::uint64_t master_seed) {
  return Fingerprint{XXH3_64bits_withSeed(bytes.data(), bytes.size(), master_seed)};
}

Hash4Seed derive_hash4_seed(std::uint64_t master_seed, int level, int row, HashPurpose purpose) {
  Hash4Seed seed;
  seed.purpose = purpose;
  seed.level = level;
  SplitMix64 stream(derive_seed(master_seed, {0x48415348ULL, static_cast<std::uint64_t>(level),
                                              static_cast<std::uint64_t>(row),
                                              static_cast<std::uint64_t>(purpose)}));
  for (auto& c : seed.coefficients) c = stream.below(kMersenne61);
  return seed;
}

}  // namespace sjpc
