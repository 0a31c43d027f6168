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

#include "pacverify/vc.hpp"

#include <algorithm>

#include "pacverify/error.hpp"

namespace pacverify {

bool shatters(const RealizabilityOracle& realizes, std::span<const double> x) {
  std::vector<double> pts(x.begin(), x.end());
  std::sort(pts.begin(), pts.end());
  if (pts.size() >= 63) throw InvalidArgument("shatters: point set too large");
  const std::uint64_t total = std::uint64_t{1} << pts.size();
  std::vector<std::uint8_t> labels(pts.size());
  for (std::uint64_t mask = 0; mask < total; ++mask) {
    for (std::size_t i = 0; i < pts.size(); ++i) labels[i] = (mask >> i) & 1U;
    if (!realizes(pts, labels)) return false;
  }
  return true;
}

std::size_t vc_dimension_bruteforce(const RealizabilityOracle& realizes,
                                    std::span<const double> ground) {
  if (ground.size() > kMaxBruteForceGround) {
    throw InvalidArgument("ground set of " + std::to_string(ground.size()) +
                          " points exceeds the exhaustive-search limit of " +
                          std::to_string(kMaxBruteForceGround));
  }
  std::vector<double> pts(ground.begin(), ground.end());
  std::sort(pts.begin(), pts.end());
  const std::size_t n = pts.size();
  // Subsets of shattered sets are shattered, so the search can stop at the
  // first cardinality with no shattered subset.
  std::size_t best = 0;
  for (std::size_t size = 1; size <= n; ++size) {
    std::vector<bool> pick(n, false);
    std::fill(pick.begin(), pick.begin() + static_cast<std::ptrdiff_t>(size), true);
    bool found = false;
    std::vector<double> subset;
    do {
      subset.clear();
      for (std::size_t i = 0; i < n; ++i) {
        if (pick[i]) subset.push_back(pts[i]);
      }
      if (shatters(realizes, subset)) {
        found = true;
        break;
      }
    } while (std::prev_permutation(pick.begin(), pick.end()));
    if (!found) break;
    best = size;
  }
  return best;
}

RealizabilityOracle union_of_intervals_oracle(std::size_t d) {
  return [d](std::span<const double>, std::span<const std::uint8_t> labels) {
    std::size_t runs = 0;
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] && (i == 0 || !labels[i - 1])) ++runs;
    }
    return runs <= d;
  };
}

}  // namespace pacverify
