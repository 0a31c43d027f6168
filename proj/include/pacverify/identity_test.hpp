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

#ifndef PACVERIFY_IDENTITY_TEST_HPP_
#define PACVERIFY_IDENTITY_TEST_HPP_

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "json.hpp"
#include "pacverify/distribution.hpp"
#include "pacverify/rng.hpp"

namespace pacverify::identity {

inline constexpr double kDefaultConstant = 4.0;

// Parameters of the tolerant identity tester.
//
// The tester accepts when TV(P, reference) <= inner() and rejects when
// TV(P, reference) > epsilon, each with probability >= 1 - delta. The inner
// radius defaults to epsilon / sqrt(n).
struct IdentityTestConfig {
  std::size_t n = 2;
  double epsilon = 0.1;
  double delta = 0.1;
  double constant_c = kDefaultConstant;
  std::size_t repetitions = 1;
  std::optional<double> inner_radius;

  // Config with repetitions chosen by default_repetitions(delta).
  static IdentityTestConfig make(std::size_t n, double epsilon, double delta,
                                 double constant_c = kDefaultConstant);

  double inner() const;
  void validate() const;
};

// Smallest odd count >= ceil(ln(1/delta)), at least 1.
std::size_t default_repetitions(double delta);

struct TestVerdict {
  bool accept = false;
  // Median over repetitions of the normalized statistic Z / m_r^2.
  double statistic = 0.0;
  double threshold = 0.0;
  std::size_t samples_used = 0;
  std::vector<double> repetition_statistics;
  // An observed point had zero reference mass.
  bool zero_mass_hit = false;
};

// ceil(C * sqrt(n) * ln(2/delta) / epsilon^2), never below the repetition count.
std::size_t required_samples(const IdentityTestConfig& cfg);

// Acceptance threshold on the normalized statistic, halfway between its
// largest expectation at TV = inner() and its smallest at TV = epsilon.
double acceptance_threshold(std::span<const double> reference, const IdentityTestConfig& cfg);

// Runs the tester on sample indices into `reference`. Indices at or beyond
// reference.size() count as zero-mass points. Uses the first
// required_samples(cfg) entries of `sample`; throws SampleTooSmall if there
// are fewer.
//
// Each repetition computes
//   Z = sum_i ((N_i - m q_i)^2 - N_i) / max(q_i, 1/n)
// over its share of the sample, and accepts if Z / m^2 is at most the
// threshold. The verdict is the majority over repetitions.
TestVerdict tolerant_identity_test(std::span<const double> reference,
                                   std::span<const std::size_t> sample,
                                   const IdentityTestConfig& cfg);

template <class Point>
TestVerdict tolerant_identity_test(const DiscreteDistribution<Point>& reference,
                                   std::span<const Point> sample, const IdentityTestConfig& cfg) {
  std::vector<std::size_t> idx;
  idx.reserve(sample.size());
  for (const auto& p : sample) {
    auto i = reference.index_of(p);
    idx.push_back(i ? *i : reference.size());
  }
  return tolerant_identity_test(reference.masses(), idx, cfg);
}

nlohmann::json to_json(const TestVerdict& v);

// How mass moves when planting a distance.
enum class ShiftShape {
  // All moved mass lands on one recipient, taken from as few donors as possible.
  kConcentrated,
  // Mass moves proportionally from the first half of the support to the second.
  kSpread,
};

// A distribution at total variation exactly `tv` from `reference`, obtained
// by moving mass. Throws InvalidArgument if the shape cannot move that much.
std::vector<double> mass_shift(std::span<const double> reference, double tv, ShiftShape shape);

// Desk-scale calibration of constant_c against a uniform reference.
struct CalibrationOptions {
  std::size_t n = 100;
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t runs = 500;
  std::vector<double> constants{0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  Seed seed = 1;
};

// Accept rates over planted TV in {0, eps/sqrt(n), eps/2, eps, 2 eps} for
// each candidate constant, and the smallest constant meeting the contract
// with a monotone curve.
nlohmann::json calibrate(const CalibrationOptions& opts);

}  // namespace pacverify::identity

#endif  // PACVERIFY_IDENTITY_TEST_HPP_
