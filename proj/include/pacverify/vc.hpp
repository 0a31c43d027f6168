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

#ifndef PACVERIFY_VC_HPP_
#define PACVERIFY_VC_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace pacverify {

// Decides whether some hypothesis in a class realizes `labels` on `points`.
// Points arrive in ascending order.
using RealizabilityOracle =
    std::function<bool(std::span<const double> points, std::span<const std::uint8_t> labels)>;

// Exhaustive searches refuse ground sets larger than this.
inline constexpr std::size_t kMaxBruteForceGround = 24;

// True iff every one of the 2^|X| labelings of X is realized.
bool shatters(const RealizabilityOracle& realizes, std::span<const double> x);

// Largest cardinality of a shattered subset of `ground`. Throws
// InvalidArgument when the ground set exceeds kMaxBruteForceGround.
std::size_t vc_dimension_bruteforce(const RealizabilityOracle& realizes,
                                    std::span<const double> ground);

// Realizability for unions of at most d closed intervals: a labeling of
// sorted points is realizable iff it has at most d maximal runs of ones.
RealizabilityOracle union_of_intervals_oracle(std::size_t d);

}  // namespace pacverify

#endif  // PACVERIFY_VC_HPP_
