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

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <set>
#include <vector>

#include <gtest/gtest.h>

#include "pacverify/distribution.hpp"
#include "pacverify/error.hpp"
#include "pacverify/loss.hpp"
#include "pacverify/rng.hpp"
#include "pacverify/stats.hpp"
#include "pacverify/vc.hpp"

namespace pacverify {
namespace {

using IntDist = DiscreteDistribution<int>;

// Threshold hypothesis used to exercise the generic loss helpers.
struct Threshold {
  double at;
  bool operator()(double x) const { return x >= at; }
};

TEST(SplitSeedTest, ChildrenDifferAndAreStable) {
  std::set<Seed> seen;
  for (std::uint64_t s = 0; s < 1000; ++s) seen.insert(split_seed(42, s));
  EXPECT_EQ(seen.size(), 1000u);
  EXPECT_EQ(split_seed(42, 3), split_seed(42, 3));
  EXPECT_NE(split_seed(42, 3), split_seed(43, 3));
}

TEST(Uniform01Test, StaysInHalfOpenUnitInterval) {
  Rng rng = make_rng(5);
  double lo = 1.0, hi = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double u = uniform01(rng);
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    lo = std::min(lo, u);
    hi = std::max(hi, u);
  }
  EXPECT_LT(lo, 0.001);
  EXPECT_GT(hi, 0.999);
}

TEST(DistributionTest, RejectsMalformedInput) {
  EXPECT_THROW(IntDist::from_masses({1, 2}, {0.5}), InvalidArgument);
  EXPECT_THROW(IntDist::from_masses({1, 2}, {0.5, 0.6}), InvalidArgument);
  EXPECT_THROW(IntDist::from_masses({1, 2}, {-0.5, 1.5}), InvalidArgument);
  EXPECT_THROW(IntDist::from_masses({1, 1}, {0.5, 0.5}), InvalidArgument);
  EXPECT_THROW(IntDist::from_masses({}, {}), InvalidArgument);
  EXPECT_THROW(IntDist::from_counts({1, 2}, {1, 1}, 3), InvalidArgument);
  EXPECT_THROW(IntDist::from_weights({1, 2}, {0.0, 0.0}), InvalidArgument);
}

TEST(DistributionTest, FromCountsIsExact) {
  auto d = IntDist::from_counts({3, 1, 2}, {1, 2, 7}, 10);
  EXPECT_TRUE(d.is_exact());
  EXPECT_DOUBLE_EQ(d.mass_of(2), 0.7);
  EXPECT_DOUBLE_EQ(d.mass_of(9), 0.0);
  EXPECT_EQ(d.sorted_order(), (std::vector<std::size_t>{1, 2, 0}));
}

TEST(SampleTest, PointMassRepeatsThePoint) {
  auto s = sample(IntDist::point_mass(7), 5, 123);
  EXPECT_EQ(s.points, (std::vector<int>{7, 7, 7, 7, 7}));
  EXPECT_EQ(s.source_seed, 123u);
}

TEST(SampleTest, UniformPairFrequencyWithinSixSigma) {
  const std::size_t m = 100000;
  for (Seed seed : {1u, 2u, 3u}) {
    auto s = sample(IntDist::uniform({1, 2}), m, seed);
    const double ones = static_cast<double>(std::count(s.points.begin(), s.points.end(), 1));
    // 6 sigma of Binomial(1e5, 1/2) is about 0.0095.
    EXPECT_NEAR(ones / m, 0.5, 0.02);
  }
}

TEST(SampleTest, SameSeedSameSample) {
  auto d = IntDist::from_masses({1, 2, 3}, {0.2, 0.3, 0.5});
  EXPECT_EQ(sample(d, 1000, 77).points, sample(d, 1000, 77).points);
  EXPECT_NE(sample(d, 1000, 77).points, sample(d, 1000, 78).points);
}

TEST(SampleTest, RejectsEmptySample) {
  EXPECT_THROW(sample(IntDist::point_mass(1), 0, 1), InvalidArgument);
}

TEST(TotalVariationTest, Examples) {
  auto p = IntDist::from_masses({1, 2}, {0.2, 0.8});
  auto q = IntDist::uniform({1, 2});
  EXPECT_DOUBLE_EQ(total_variation(p, p), 0.0);
  EXPECT_DOUBLE_EQ(total_variation(q, IntDist::point_mass(1)), 0.5);
  EXPECT_NEAR(total_variation(p, q), 0.3, 1e-15);
  // Disjoint supports are at distance 1.
  EXPECT_DOUBLE_EQ(total_variation(IntDist::point_mass(1), IntDist::point_mass(2)), 1.0);
}

TEST(TotalVariationTest, IsAMetricOnRandomTriples) {
  Rng rng = make_rng(11);
  auto random_dist = [&rng] {
    // Random support inside {0..7} with random weights.
    std::vector<int> support;
    std::vector<double> w;
    for (int i = 0; i < 8; ++i) {
      if (uniform01(rng) < 0.6) {
        support.push_back(i);
        w.push_back(uniform01(rng) + 0.01);
      }
    }
    if (support.empty()) {
      support.push_back(0);
      w.push_back(1.0);
    }
    return IntDist::from_weights(support, w);
  };
  for (int trial = 0; trial < 2000; ++trial) {
    auto a = random_dist(), b = random_dist(), c = random_dist();
    const double ab = total_variation(a, b), ba = total_variation(b, a);
    EXPECT_NEAR(ab, ba, 1e-12);
    EXPECT_GE(ab, 0.0);
    EXPECT_LE(ab, 1.0);
    EXPECT_NEAR(total_variation(a, a), 0.0, 1e-15);
    EXPECT_LE(ab, total_variation(a, c) + total_variation(c, b) + 1e-12);
    if (a.support() != b.support()) {
      // Distinct supports with positive masses cannot coincide.
      EXPECT_GT(ab, 0.0);
    }
  }
}

TEST(QuantizeTest, CountsSumToDenominator) {
  std::vector<double> m{1.0 / 3, 1.0 / 3, 1.0 / 3};
  auto c = quantize_masses(m, 1000);
  EXPECT_EQ(c[0] + c[1] + c[2], 1000u);
  for (auto v : c) EXPECT_TRUE(v == 333 || v == 334);
}

TEST(DistributionJsonTest, RoundTrips) {
  auto d = DiscreteDistribution<LabeledPoint>::from_counts({{0.1, 0}, {0.5, 1}}, {3, 1}, 4);
  auto back = distribution_from_json<LabeledPoint>(to_json(d));
  EXPECT_EQ(back.support(), d.support());
  EXPECT_EQ(back.counts(), d.counts());
  EXPECT_THROW(distribution_from_json<LabeledPoint>(nlohmann::json{{"support", 1}}), InvalidArgument);
}

TEST(EmpiricalLossTest, Examples) {
  const auto loss = zero_one_loss<Threshold>();
  const Threshold h{0.5};
  std::vector<LabeledPoint> s;
  for (int i = 0; i < 12; ++i) {
    const double x = (i + 0.5) / 12.0;
    s.push_back({x, h(x) ? 1 : 0});
  }
  EXPECT_DOUBLE_EQ((empirical_loss<LabeledPoint, Threshold>(h, s, loss)), 0.0);
  auto flipped = s;
  for (auto& z : flipped) z.y = 1 - z.y;
  EXPECT_DOUBLE_EQ((empirical_loss<LabeledPoint, Threshold>(h, flipped, loss)), 1.0);
  auto three = s;
  for (int i : {0, 5, 9}) three[i].y = 1 - three[i].y;
  EXPECT_DOUBLE_EQ((empirical_loss<LabeledPoint, Threshold>(h, three, loss)), 0.25);
}

TEST(PopulationLossTest, RealizableAndUniformLabels) {
  const auto loss = zero_one_loss<Threshold>();
  const Threshold h{0.5};
  std::vector<LabeledPoint> realizable, both;
  for (int i = 0; i < 10; ++i) {
    const double x = (i + 0.5) / 10.0;
    realizable.push_back({x, h(x) ? 1 : 0});
    both.push_back({x, 0});
    both.push_back({x, 1});
  }
  EXPECT_DOUBLE_EQ(population_loss(h, DiscreteDistribution<LabeledPoint>::uniform(realizable), loss), 0.0);
  auto u = DiscreteDistribution<LabeledPoint>::uniform(both);
  for (double at : {0.0, 0.3, 0.77, 2.0}) {
    EXPECT_NEAR(population_loss(Threshold{at}, u, loss), 0.5, 1e-12);
  }
}

TEST(PopulationLossTest, EmpiricalLossConvergesAtHoeffdingRate) {
  const auto loss = zero_one_loss<Threshold>();
  const Threshold h{0.4};
  std::vector<LabeledPoint> support;
  std::vector<double> w;
  for (int i = 0; i < 20; ++i) {
    const double x = (i + 0.5) / 20.0;
    support.push_back({x, 0});
    support.push_back({x, 1});
    w.push_back(1.0 + i % 3);
    w.push_back(1.0 + (i * 7) % 5);
  }
  auto d = DiscreteDistribution<LabeledPoint>::from_weights(support, w);
  const double truth = population_loss(h, d, loss);
  const std::size_t m = 10000;
  int within = 0;
  for (Seed seed = 0; seed < 1000; ++seed) {
    auto s = sample(d, m, seed);
    if (std::abs(empirical_loss(h, s, loss) - truth) <= 3.0 / std::sqrt(static_cast<double>(m))) {
      ++within;
    }
  }
  EXPECT_GE(within, 990);
}

TEST(LossFunctionTest, RejectsOutOfRangeValues) {
  LossFunction<int, int> bad{[](const int&, const int&) { return 1.5; }, 1.0};
  EXPECT_THROW(bad(0, 0), InvalidArgument);
}

TEST(VcTest, SingleIntervalShattersTwoPoints) {
  auto h1 = union_of_intervals_oracle(1);
  std::vector<double> two{0.2, 0.5};
  EXPECT_TRUE(shatters(h1, two));
}

TEST(VcTest, SingleIntervalCannotRealizeOneZeroOne) {
  auto h1 = union_of_intervals_oracle(1);
  std::vector<double> three{0.2, 0.5, 0.8};
  std::vector<std::uint8_t> labels{1, 0, 1};
  EXPECT_FALSE(h1(three, labels));
  EXPECT_FALSE(shatters(h1, three));
}

// Independent realizability check: a labeling is a union of at most d
// closed intervals iff some choice of d intervals with endpoints on the
// points covers exactly the ones. Enumerates endpoint pairs directly.
bool realizable_by_enumeration(std::span<const std::uint8_t> labels, std::size_t d) {
  const std::size_t n = labels.size();
  std::vector<std::pair<std::size_t, std::size_t>> spans;
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a; b < n; ++b) spans.push_back({a, b});
  }
  std::vector<std::uint8_t> cover(n);
  std::function<bool(std::size_t, std::size_t)> go = [&](std::size_t used, std::size_t from) {
    if (std::equal(cover.begin(), cover.end(), labels.begin())) return true;
    if (used == d) return false;
    for (std::size_t i = from; i < spans.size(); ++i) {
      auto saved = cover;
      bool ok = true;
      for (std::size_t j = spans[i].first; j <= spans[i].second; ++j) {
        if (!labels[j]) ok = false;
        cover[j] = 1;
      }
      if (ok && go(used + 1, i + 1)) return true;
      cover = saved;
    }
    return false;
  };
  return go(0, 0);
}

TEST(VcTest, OracleAgreesWithEnumerationOfIntervals) {
  std::vector<double> pts{0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7};
  for (std::size_t d = 0; d <= 3; ++d) {
    auto oracle = union_of_intervals_oracle(d);
    for (std::uint32_t mask = 0; mask < (1u << pts.size()); ++mask) {
      std::vector<std::uint8_t> labels(pts.size());
      for (std::size_t i = 0; i < pts.size(); ++i) labels[i] = (mask >> i) & 1;
      ASSERT_EQ(oracle(pts, labels), realizable_by_enumeration(labels, d)) << d << " " << mask;
    }
  }
}

TEST(VcTest, UnionOfIntervalsHasDimensionTwoD) {
  std::vector<double> grid;
  for (int i = 0; i < 20; ++i) grid.push_back((i + 0.5) / 20.0);
  for (std::size_t d = 1; d <= 5; ++d) {
    EXPECT_EQ(vc_dimension_bruteforce(union_of_intervals_oracle(d), grid), 2 * d);
  }
}

TEST(VcTest, DimensionIsMinOfTwoDAndGridSize) {
  for (std::size_t n = 1; n <= 9; ++n) {
    std::vector<double> grid;
    for (std::size_t i = 0; i < n; ++i) grid.push_back((i + 0.5) / static_cast<double>(n));
    for (std::size_t d = 1; d <= 5; ++d) {
      EXPECT_EQ(vc_dimension_bruteforce(union_of_intervals_oracle(d), grid), std::min(2 * d, n));
    }
  }
}

TEST(VcTest, RefusesLargeGroundSets) {
  std::vector<double> grid(kMaxBruteForceGround + 1);
  for (std::size_t i = 0; i < grid.size(); ++i) grid[i] = static_cast<double>(i);
  EXPECT_THROW(vc_dimension_bruteforce(union_of_intervals_oracle(1), grid), InvalidArgument);
}

TEST(WilsonTest, KnownValues) {
  // 8 of 10 at z = 1.96: center 0.7167, half-width 0.2286.
  auto r = wilson_interval(8, 10);
  EXPECT_NEAR(r.lower, 0.4902, 1e-3);
  EXPECT_NEAR(r.upper, 0.9433, 1e-3);
  auto zero = wilson_interval(0, 300);
  EXPECT_EQ(zero.lower, 0.0);
  EXPECT_NEAR(zero.upper, 0.01264, 1e-4);
  auto all = wilson_interval(300, 300);
  EXPECT_EQ(all.upper, 1.0);
}

TEST(FitTest, RecoversPowerLaw) {
  std::vector<double> x{4, 16, 64, 256}, y;
  for (double v : x) y.push_back(3.0 * std::pow(v, 0.5));
  auto f = loglog_fit(x, y);
  EXPECT_NEAR(f.slope, 0.5, 1e-12);
  EXPECT_NEAR(f.intercept, std::log(3.0), 1e-12);
}

}  // namespace
}  // namespace pacverify
