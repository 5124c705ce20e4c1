// genuin/rng.hpp

// Copyright 2026  The genuin authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef GENUIN_RNG_HPP_
#define GENUIN_RNG_HPP_

#include <cstdint>
#include <random>
#include <string_view>

namespace genuin {

// All randomness in the toolkit comes from MT19937-64 (std::mt19937_64, whose
// output sequence is fixed by the C++ standard). Bounded draws are done here
// rather than through std::uniform_int_distribution, whose algorithm is
// implementation-defined. Changing any of this changes every seeded output;
// bump kRngStreamVersion if that ever happens.
inline constexpr int kRngStreamVersion = 1;

using Rng = std::mt19937_64;

// SplitMix64 finalizer.
constexpr std::uint64_t Mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

// Child seed for stream `ordinal` of `seed`.
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::uint64_t ordinal) {
  return Mix64(Mix64(seed) ^ Mix64(ordinal + 0x632be59bd9b4e019ull));
}

// Child seed keyed by a label, e.g. "attacker-G".
constexpr std::uint64_t DeriveSeed(std::uint64_t seed, std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (char c : label) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ull;
  }
  return DeriveSeed(seed, h);
}

// Uniform on {0 .. 2^bits - 1}; top bits of one draw. bits == 0 draws nothing.
inline std::uint64_t DrawBits(Rng &rng, int bits) {
  if (bits <= 0) return 0;
  return rng() >> (64 - bits);
}

// Uniform on {0 .. n - 1} by rejection. n == 1 draws nothing.
inline std::uint64_t UniformBelow(Rng &rng, std::uint64_t n) {
  if (n <= 1) return 0;
  const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % n);
  std::uint64_t x;
  do {
    x = rng();
  } while (x >= limit);
  return x % n;
}

// Uniform double in [0, 1) with 53 random bits.
inline double UniformUnit(Rng &rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace genuin

#endif  // GENUIN_RNG_HPP_
