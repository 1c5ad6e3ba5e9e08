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

#include <array>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <limits>
#include <string_view>

namespace sjpc {

/// 128-bit unsigned integer (GCC/Clang extension).
__extension__ using u128 = unsigned __int128;

inline constexpr std::uint64_t kMersenne61 = (std::uint64_t{1} << 61) - 1;

/// x mod (2^61 - 1) for x < 2^122.
constexpr std::uint64_t mod_mersenne61(u128 x) {
  std::uint64_t lo = static_cast<std::uint64_t>(x & kMersenne61);
  std::uint64_t hi = static_cast<std::uint64_t>(x >> 61);
  std::uint64_t r = lo + hi;
  r = (r & kMersenne61) + (r >> 61);
  return r >= kMersenne61 ? r - kMersenne61 : r;
}

/// SplitMix64 finalizer. A bijection on 64-bit words.
constexpr std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 30;
  x *= 0xbf58476d1ce4e5b9ULL;
  x ^= x >> 27;
  x *= 0x94d049bb133111ebULL;
  x ^= x >> 31;
  return x;
}

/// Counter-mode seed expansion: folds a structural path into a master seed.
std::uint64_t derive_seed(std::uint64_t master_seed, std::initializer_list<std::uint64_t> path);

/// Small, fast UniformRandomBitGenerator (SplitMix64 stream).
class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t seed = 0) : state_(seed) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    return mix64(state_);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform01() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

  /// Uniform integer in [0, bound), bound >= 1.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    std::uint64_t x = (*this)();
    u128 m = static_cast<u128>(x) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        x = (*this)();
        m = static_cast<u128>(x) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

 private:
  std::uint64_t state_;
};

using Rng = SplitMix64;

struct Fingerprint {
  std::uint64_t value = 0;
  friend auto operator<=>(const Fingerprint&, const Fingerprint&) = default;
};

/// Seeded 64-bit digest (XXH3) of a byte string.
Fingerprint fingerprint(std::string_view bytes, std::uint64_t master_seed);

enum class HashPurpose : std::uint8_t { bucket = 0, sign = 1 };

/// Coefficients of a degree-3 polynomial over Z_p, p = 2^61 - 1.
struct Hash4Seed {
  std::array<std::uint64_t, 4> coefficients{};
  HashPurpose purpose = HashPurpose::bucket;
  int level = 0;

  friend bool operator==(const Hash4Seed&, const Hash4Seed&) = default;
};

Hash4Seed derive_hash4_seed(std::uint64_t master_seed, int level, int row, HashPurpose purpose);

/// Polynomial evaluation at key mod p; 4-wise independent over the seed family.
constexpr std::uint64_t hash4_eval(const Hash4Seed& seed, std::uint64_t key) {
  const std::uint64_t x = mod_mersenne61(key);
  const auto& c = seed.coefficients;
  std::uint64_t acc = c[3];
  acc = mod_mersenne61(static_cast<u128>(acc) * x + c[2]);
  acc = mod_mersenne61(static_cast<u128>(acc) * x + c[1]);
  acc = mod_mersenne61(static_cast<u128>(acc) * x + c[0]);
  return acc;
}

/// Bucket in [0, w).
inline std::size_t hash4_bucket(const Hash4Seed& seed, Fingerprint key, std::size_t w) {
  return static_cast<std::size_t>(hash4_eval(seed, key.value) % w);
}

/// +1 or -1 from the low bit of an independent evaluation.
inline int hash4_sign(const Hash4Seed& seed, Fingerprint key) {
  return (hash4_eval(seed, key.value) & 1U) ? 1 : -1;
}

}  // namespace sjpc
