// Copyright 2026 The dkey Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DKEY_RANDOM_HPP
#define DKEY_RANDOM_HPP

#include <cstdint>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/uniform_int_distribution.hpp>

#include "dkey/integer.hpp"

namespace dkey {

// Boost.Random distributions are specified bit-for-bit, unlike the std ones,
// so seeded transcripts replay identically across standard libraries.
using Rng = boost::random::mt19937_64;

/// Uniform integer in [lo, hi].
inline Integer uniform_integer(Rng& rng, const Integer& lo, const Integer& hi) {
  boost::random::uniform_int_distribution<Integer> dist(lo, hi);
  return dist(rng);
}

inline std::uint64_t uniform_u64(Rng& rng, std::uint64_t lo, std::uint64_t hi) {
  boost::random::uniform_int_distribution<std::uint64_t> dist(lo, hi);
  return dist(rng);
}

inline int uniform_bit(Rng& rng) { return static_cast<int>(uniform_u64(rng, 0, 1)); }

/// SplitMix64 finalizer; derives independent child seeds from one root seed.
inline std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

}  // namespace dkey

#endif  // DKEY_RANDOM_HPP
