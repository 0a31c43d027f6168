// Copyright 2026 The pacverify Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PACVERIFY_RNG_HPP_
#define PACVERIFY_RNG_HPP_

#include <cstdint>
#include <random>

namespace pacverify {

using Seed = std::uint64_t;
using Rng = std::mt19937_64;

// Derives the seed of child stream `stream` from `parent`.
//
// The parent is xor-ed with the stream index scaled by the 64-bit golden
// ratio constant, then passed through two rounds of the SplitMix64
// finalizer. Distinct (parent, stream) pairs give statistically independent
// children, and the mapping is stable across platforms. Every experiment
// derives all of its randomness from one root seed through this function.
Seed split_seed(Seed parent, std::uint64_t stream);

// Named streams used when one seed must feed several independent consumers.
namespace stream {
inline constexpr std::uint64_t kVerifierSample = 1;
inline constexpr std::uint64_t kProverSample = 2;
inline constexpr std::uint64_t kVerifierCoins = 3;
inline constexpr std::uint64_t kProverCoins = 4;
inline constexpr std::uint64_t kHoldoutSample = 5;
inline constexpr std::uint64_t kAlgorithm = 6;
inline constexpr std::uint64_t kTestSample = 7;
inline constexpr std::uint64_t kTrial = 1000;
}  // namespace stream

inline Rng make_rng(Seed seed) { return Rng(seed); }

// Uniform double in [0, 1).
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

}  // namespace pacverify

#endif  // PACVERIFY_RNG_HPP_
