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
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "pacverify/distribution.hpp"
#include "pacverify/error.hpp"
#include "pacverify/harness.hpp"
#include "pacverify/intervals.hpp"
#include "pacverify/stats.hpp"

namespace pacverify::intervals {
namespace {

using LDist = DiscreteDistribution<LabeledPoint>;

std::vector<TaggedPoint> tagged(const std::vector<double>& xs, const std::vector<int>& ys) {
  std::vector<TaggedPoint> out;
  for (std::size_t i = 0; i < xs.size(); ++i) out.push_back({xs[i], ys[i], 0.5});
  return out;
}

// Brute force over every labeling of the distinct x-values: the minimum
// 0-1 loss among labelings with at most d runs of ones, and the fewest runs
// attaining it.
struct BruteForce {
  double loss;
  std::size_t runs;
};

BruteForce brute_force_erm(const LDist& dist, std::size_t d) {
  std::vector<double> xs;
  for (const auto& p : dist.support()) xs.push_back(p.x);
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  const std::size_t n = xs.size();
  BruteForce best{std::numeric_limits<double>::infinity(), 0};
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    std::size_t runs = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (((mask >> i) & 1) && (i == 0 || !((mask >> (i - 1)) & 1))) ++runs;
    }
    if (runs > d) continue;
    double loss = 0.0;
    for (std::size_t i = 0; i < dist.size(); ++i) {
      const auto& p = dist.support()[i];
      const auto pos = static_cast<std::size_t>(std::lower_bound(xs.begin(), xs.end(), p.x) - xs.begin());
      const int predicted = (mask >> pos) & 1;
      if (predicted != p.y) loss += dist.masses()[i];
    }
    if (loss < best.loss - 1e-12 || (std::abs(loss - best.loss) <= 1e-12 && runs < best.runs)) {
      best = {loss, runs};
    }
  }
  return best;
}

// An honest message wrapped as a prover, with an optional edit.
class EditedProver : public harness::ProverStrategy {
 public:
  EditedProver(std::vector<TaggedPoint> s_p, std::size_t k,
               std::function<void(DiscretizedMessage&)> edit)
      : s_p_(std::move(s_p)), k_(k), edit_(std::move(edit)) {}
  std::optional<std::string> respond(std::string_view, Rng&) override {
    auto msg = honest_prover_partition(s_p_, k_);
    edit_(msg);
    return to_json(msg).dump();
  }

 private:
  std::vector<TaggedPoint> s_p_;
  std::size_t k_;
  std::function<void(DiscretizedMessage&)> edit_;
};

TEST(UnionOfIntervalsTest, NormalizesAndContains) {
  UnionOfIntervals h({{0.5, 0.7}, {0.1, 0.2}, {0.15, 0.3}, {0.7, 0.8}});
  ASSERT_EQ(h.size(), 2u);
  EXPECT_EQ(h.intervals()[0], (std::pair<double, double>{0.1, 0.3}));
  EXPECT_EQ(h.intervals()[1], (std::pair<double, double>{0.5, 0.8}));
  EXPECT_TRUE(h(0.1));
  EXPECT_TRUE(h(0.8));
  EXPECT_FALSE(h(0.4));
  EXPECT_EQ(union_from_json(to_json(h)), h);
}

TEST(ConfigTest, KAndProverBudget) {
  auto cfg = IntervalProtocolConfig::make(2, 0.1, 0.2);
  EXPECT_EQ(cfg.k, 240u);
  EXPECT_EQ(cfg.m_p % cfg.k, 0u);
  EXPECT_EQ(cfg.m_v, identity::required_samples(cfg.tester_config()));
  EXPECT_THROW(IntervalProtocolConfig::make(2, 0.3, 0.2), InvalidArgument);
  EXPECT_THROW(IntervalProtocolConfig::make(0, 0.1, 0.2), InvalidArgument);
}

TEST(ConfigTest, VerifierSamplesScaleAsSqrtK) {
  std::vector<double> ds{4, 16, 64, 256}, mv;
  for (double d : ds) {
    mv.push_back(static_cast<double>(IntervalProtocolConfig::make(static_cast<std::size_t>(d), 0.1, 0.2).m_v));
  }
  EXPECT_NEAR(loglog_fit(ds, mv).slope, 0.5, 0.1);
}

TEST(PartitionTest, DistinctValuesSplitIntoEqualRuns) {
  auto s = tagged({0.8, 0.1, 0.3, 0.2, 0.7, 0.4, 0.6, 0.5}, {0, 0, 1, 1, 0, 0, 1, 1});
  auto msg = honest_prover_partition(s, 4);
  ASSERT_EQ(msg.boundaries.size(), 5u);
  EXPECT_EQ(msg.boundaries.front(), (Cut{0.0, 0.0}));
  EXPECT_EQ(msg.boundaries.back(), (Cut{1.0, 1.0}));
  EXPECT_NEAR(msg.boundaries[1].x, 0.25, 1e-15);
  EXPECT_NEAR(msg.boundaries[2].x, 0.45, 1e-15);
  EXPECT_NEAR(msg.boundaries[3].x, 0.65, 1e-15);
  EXPECT_EQ(msg.denominator, 8u);
  for (const auto& c : msg.counts) EXPECT_EQ(c[0] + c[1], 2u);
  // Sorted labels are 0,1 | 1,0 | 0,1 | 1,0.
  EXPECT_EQ(msg.counts[0], (std::array<std::uint64_t, 2>{1, 1}));
}

TEST(PartitionTest, AllOnes) {
  auto s = tagged({0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8}, std::vector<int>(8, 1));
  for (const auto& c : honest_prover_partition(s, 4).counts) {
    EXPECT_EQ(c, (std::array<std::uint64_t, 2>{0, 2}));
  }
}

TEST(PartitionTest, RepeatedValuesStillSplitEvenly) {
  Rng rng = make_rng(3);
  std::vector<TaggedPoint> s;
  for (int i = 0; i < 8; ++i) s.push_back({0.5, i % 2, uniform01(rng)});
  auto msg = honest_prover_partition(s, 4);
  for (const auto& c : msg.counts) EXPECT_EQ(c[0] + c[1], 2u);
  // Every sample point lands in the cell the counts claim.
  std::vector<std::size_t> tally(4, 0);
  for (const auto& p : s) ++tally[cell_of(msg.boundaries, p.x, p.u)];
  EXPECT_EQ(tally, (std::vector<std::size_t>{2, 2, 2, 2}));
}

TEST(PartitionTest, CellsMatchCountsOnRandomSamples) {
  auto dist = realizable_grid(8, {{0.2, 0.6}});
  for (Seed seed = 0; seed < 50; ++seed) {
    Rng rng = make_rng(seed);
    auto s = draw_tagged(dist, 240, rng);
    auto msg = honest_prover_partition(s, 24);
    std::vector<std::array<std::uint64_t, 2>> tally(24, {0, 0});
    for (const auto& p : s) ++tally[cell_of(msg.boundaries, p.x, p.u)][p.y];
    EXPECT_EQ(tally, msg.counts);
  }
}

TEST(PartitionTest, RejectsSizesNotDivisibleByK) {
  auto s = tagged({0.1, 0.2, 0.3}, {0, 0, 0});
  EXPECT_THROW(honest_prover_partition(s, 2), InvalidArgument);
}

TEST(MessageJsonTest, RoundTripAndStrictness) {
  auto msg = honest_prover_partition(tagged({0.1, 0.2, 0.3, 0.4}, {0, 1, 0, 1}), 2);
  auto back = message_from_json(to_json(msg));
  EXPECT_EQ(back.boundaries, msg.boundaries);
  EXPECT_EQ(back.counts, msg.counts);
  auto j = to_json(msg);
  auto broken = j;
  broken.erase("tiebreak");
  EXPECT_THROW(message_from_json(broken), ProtocolViolation);
  broken = j;
  broken["boundaries"][1] = 1.5;
  EXPECT_THROW(message_from_json(broken), ProtocolViolation);
  broken = j;
  broken["counts"][0][0] = -1;
  EXPECT_THROW(message_from_json(broken), ProtocolViolation);
  broken = j;
  broken["boundaries"][0] = 0.1;
  EXPECT_THROW(message_from_json(broken), ProtocolViolation);
  broken = j;
  broken["denominator"] = 0;
  EXPECT_THROW(message_from_json(broken), ProtocolViolation);
}

const std::vector<Cut> kQuarters{{0.0, 0.0}, {0.25, 0.0}, {0.5, 0.0}, {0.75, 0.0}, {1.0, 1.0}};

TEST(DiscretizeTest, IdentityOnRepresentatives) {
  const auto reps = representatives(kQuarters);
  auto d = LDist::from_masses({{reps[0], 1}, {reps[1], 0}, {reps[2], 1}, {reps[3], 0}},
                              {0.1, 0.2, 0.3, 0.4});
  auto p = discretize(d, kQuarters, reps);
  EXPECT_NEAR(total_variation(p, d), 0.0, 1e-15);
}

TEST(DiscretizeTest, FineUniformGridGivesQuarterMasses) {
  std::vector<LabeledPoint> support;
  for (int i = 0; i < 1000; ++i) support.push_back({(i + 0.5) / 1000.0, 1});
  auto p = discretize(LDist::uniform(support), kQuarters, representatives(kQuarters));
  for (double rep : representatives(kQuarters)) EXPECT_NEAR(p.mass_of({rep, 1}), 0.25, 1e-12);
}

TEST(DiscretizeTest, PointMassesInOneCellMerge) {
  auto d = LDist::from_masses({{0.3, 1}, {0.4, 1}, {0.9, 0}}, {0.2, 0.3, 0.5});
  auto p = discretize(d, kQuarters, representatives(kQuarters));
  EXPECT_NEAR(p.mass_of({0.375, 1}), 0.5, 1e-15);
  EXPECT_NEAR(p.mass_of({0.875, 0}), 0.5, 1e-15);
}

TEST(DiscretizeTest, SplitsSharedPointsByTiebreakFraction) {
  std::vector<Cut> cuts{{0.0, 0.0}, {0.5, 0.25}, {1.0, 1.0}};
  auto d = LDist::point_mass({0.5, 1});
  auto masses = cell_masses(d, cuts);
  EXPECT_NEAR(masses[1], 0.25, 1e-15);
  EXPECT_NEAR(masses[3], 0.75, 1e-15);
}

TEST(DiscretizeTest, LossGapWithinEndpointCellsAndTv) {
  // For every h' in H_d only cells holding one of its 2d endpoints can
  // disagree, so |L_D(h') - L_P~(h')| <= 2d * max cell mass + TV(P, P~).
  Rng rng = make_rng(21);
  for (int inst = 0; inst < 200; ++inst) {
    std::vector<LabeledPoint> support;
    std::vector<double> w;
    for (int i = 0; i < 30; ++i) {
      const double x = uniform01(rng);
      support.push_back({x, 0});
      support.push_back({x, 1});
      w.push_back(uniform01(rng));
      w.push_back(uniform01(rng));
    }
    auto dist = LDist::from_weights(support, w);
    const std::size_t k = 12;
    auto s = draw_tagged(dist, 12 * 50, rng);
    auto msg = honest_prover_partition(s, k);
    const auto reps = representatives(msg.boundaries);
    auto p = discretize(dist, msg.boundaries, reps);
    auto claimed = message_distribution(msg, reps);
    const auto cells = cell_masses(dist, msg.boundaries);
    double max_cell = 0.0;
    for (std::size_t j = 0; j < k; ++j) max_cell = std::max(max_cell, cells[2 * j] + cells[2 * j + 1]);
    for (std::size_t d = 1; d <= 3; ++d) {
      std::vector<std::pair<double, double>> ivs;
      for (std::size_t i = 0; i < d; ++i) {
        double a = uniform01(rng), b = uniform01(rng);
        ivs.push_back({std::min(a, b), std::max(a, b)});
      }
      UnionOfIntervals h(ivs);
      const double gap = std::abs(population_loss_01(h, dist) - population_loss_01(h, claimed));
      EXPECT_LE(gap, 2.0 * static_cast<double>(d) * max_cell + total_variation(p, claimed) + 1e-12);
    }
  }
}

TEST(ErmTest, NoLabelOneMassGivesEmptyUnion) {
  auto d = LDist::from_masses({{0.1, 0}, {0.4, 0}, {0.7, 0}}, {0.3, 0.3, 0.4});
  auto h = erm_discretized(d, 2);
  EXPECT_EQ(h.size(), 0u);
  EXPECT_DOUBLE_EQ(population_loss_01(h, d), 0.0);
}

TEST(ErmTest, FourPointExample) {
  // Masses 1/4 per x, label-1 mass (0.25, 0, 0.25, 0).
  auto d = LDist::from_counts({{0.1, 1}, {0.3, 0}, {0.5, 1}, {0.7, 0}}, {1, 1, 1, 1}, 4);
  auto h = erm_discretized(d, 1);
  EXPECT_DOUBLE_EQ(population_loss_01(h, d), 0.25);
  EXPECT_DOUBLE_EQ(brute_force_erm(d, 1).loss, 0.25);
}

TEST(ErmTest, EnoughIntervalsCoverEveryRun) {
  auto d = realizable_grid(20, {{0.1, 0.2}, {0.4, 0.45}, {0.8, 0.9}});
  EXPECT_DOUBLE_EQ(population_loss_01(erm_discretized(d, 3), d), 0.0);
  EXPECT_DOUBLE_EQ(population_loss_01(erm_discretized(d, 5), d), 0.0);
  EXPECT_EQ(erm_discretized(d, 5).size(), 3u);
  EXPECT_GT(population_loss_01(erm_discretized(d, 2), d), 0.0);
}

TEST(ErmTest, MatchesBruteForceOnRandomInstances) {
  Rng rng = make_rng(1234);
  int mismatches = 0;
  for (int inst = 0; inst < 1000; ++inst) {
    const std::size_t k = 1 + rng() % 10;
    const std::size_t d = 1 + rng() % 3;
    std::vector<LabeledPoint> support;
    std::vector<std::uint64_t> counts;
    std::uint64_t total = 0;
    for (std::size_t j = 0; j < k; ++j) {
      const double x = (j + 0.5) / static_cast<double>(k);
      for (int y = 0; y < 2; ++y) {
        support.push_back({x, y});
        counts.push_back(rng() % 20);
        total += counts.back();
      }
    }
    if (total == 0) {
      counts[0] = 1;
      total = 1;
    }
    auto dist = LDist::from_counts(support, counts, total);
    auto h = erm_discretized(dist, d);
    auto bf = brute_force_erm(dist, d);
    if (std::abs(population_loss_01(h, dist) - bf.loss) > 1e-12 || h.size() != bf.runs ||
        h.size() > d) {
      ++mismatches;
    }
  }
  EXPECT_EQ(mismatches, 0);
}

TEST(ErmTest, QuantizesInexactMasses) {
  auto d = LDist::from_weights({{0.1, 1}, {0.2, 0}, {0.3, 1}}, {1.0 / 3, 1.0 / 3, 1.0 / 3});
  auto h = erm_discretized(d, 1);
  EXPECT_NEAR(population_loss_01(h, d), 1.0 / 3, 1e-12);
}

// Desk-scale protocol: d = 1, epsilon = 1/2 gives k = 24.
IntervalProtocolConfig small_config() { return IntervalProtocolConfig::make(1, 0.5, 0.2); }
LDist small_dist() { return realizable_grid(16, {{0.25, 0.5}}); }

TEST(VerifierTest, HonestMessagePassesTheGate) {
  auto cfg = small_config();
  auto dist = small_dist();
  for (Seed seed = 0; seed < 50; ++seed) {
    auto r = run_trial(dist, cfg, "honest", seed, 0.0);
    EXPECT_EQ(r.transcript.outcome->reason.find("exactly 1/k"), std::string::npos);
  }
}

TEST(VerifierTest, OffByOneCountIsRejectedAtTheGate) {
  auto cfg = small_config();
  auto dist = small_dist();
  Rng rng = make_rng(5);
  Verifier v(cfg, draw_tagged(dist, cfg.m_v, rng));
  EditedProver p(draw_tagged(dist, cfg.m_p, rng), cfg.k,
                 [](DiscretizedMessage& m) { ++m.counts[3][0]; });
  auto t = harness::run_interaction(v, p, {cfg.epsilon, cfg.delta}, 1);
  ASSERT_TRUE(t.outcome);
  EXPECT_FALSE(t.outcome->accepted());
  EXPECT_NE(t.outcome->reason.find("exactly 1/k"), std::string::npos);
}

TEST(VerifierTest, WrongCellCountIsAProtocolViolation) {
  auto cfg = small_config();
  auto dist = small_dist();
  Rng rng = make_rng(6);
  Verifier v(cfg, draw_tagged(dist, cfg.m_v, rng));
  HonestProver p(draw_tagged(dist, cfg.m_p / 2, rng), cfg.k / 2);
  auto t = harness::run_interaction(v, p, {cfg.epsilon, cfg.delta}, 1);
  EXPECT_FALSE(t.outcome->accepted());
  EXPECT_NE(t.outcome->reason.find("protocol-violation"), std::string::npos);
}

TEST(VerifierTest, FarMassShiftIsRejected) {
  auto cfg = small_config();
  auto dist = small_dist();
  // The shifted message is far from the truth: check once directly.
  {
    Rng rng = make_rng(1);
    auto prover = make_prover("mass-shift", dist, cfg, draw_tagged(dist, cfg.m_p, rng));
    auto msg = message_from_json(nlohmann::json::parse(*prover->respond("", rng)));
    auto truth = cell_masses(dist, msg.boundaries);
    std::vector<double> claimed;
    for (const auto& c : msg.counts) {
      claimed.push_back(static_cast<double>(c[0]) / msg.denominator);
      claimed.push_back(static_cast<double>(c[1]) / msg.denominator);
    }
    ASSERT_GT(total_variation(truth, claimed), cfg.epsilon / 6);
  }
  std::size_t rejects = 0;
  const std::size_t runs = 500;
  for (Seed seed = 0; seed < runs; ++seed) {
    if (!run_trial(dist, cfg, "mass-shift", seed, 0.0).transcript.outcome->accepted()) ++rejects;
  }
  const double target = 1.0 - cfg.delta / 2;
  EXPECT_GE(static_cast<double>(rejects) / runs, target - 3.0 * binomial_sigma(target, runs));
}

TEST(ProtocolTest, CompletenessOnRealizableDataAtDeskScale) {
  auto cfg = small_config();
  auto dist = small_dist();
  const double base = best_in_class_loss(dist, cfg.d);
  EXPECT_DOUBLE_EQ(base, 0.0);
  std::size_t ok = 0;
  const std::size_t runs = 200;
  for (Seed seed = 0; seed < runs; ++seed) {
    if (run_trial(dist, cfg, "honest", seed, base).classification ==
        harness::Classification::kCompletenessSuccess) {
      ++ok;
    }
  }
  EXPECT_GE(static_cast<double>(ok) / runs, 0.8 - 3.0 * binomial_sigma(0.8, runs));
}

TEST(ProtocolTest, UniformLabelsAcceptAnything) {
  auto cfg = small_config();
  auto dist = uniform_label_grid(16);
  const double base = best_in_class_loss(dist, cfg.d);
  EXPECT_NEAR(base, 0.5, 1e-12);
  std::size_t ok = 0;
  const std::size_t runs = 200;
  for (Seed seed = 0; seed < runs; ++seed) {
    auto r = run_trial(dist, cfg, "honest", seed, base);
    if (r.classification == harness::Classification::kCompletenessSuccess) {
      ++ok;
      EXPECT_NEAR(r.loss, 0.5, 1e-12);
    }
  }
  EXPECT_GE(static_cast<double>(ok) / runs, 0.8 - 3.0 * binomial_sigma(0.8, runs));
}

TEST(ProtocolTest, SoundnessAdversariesAtDeskScale) {
  auto cfg = small_config();
  auto dist = small_dist();
  const std::size_t runs = 200;
  for (const auto& name : soundness_adversaries()) {
    std::size_t violations = 0;
    for (Seed seed = 0; seed < runs; ++seed) {
      if (run_trial(dist, cfg, name, seed, 0.0).classification ==
          harness::Classification::kSoundnessViolation) {
        ++violations;
      }
    }
    EXPECT_LE(static_cast<double>(violations) / runs, 0.2 + 3.0 * binomial_sigma(0.2, runs)) << name;
  }
}

TEST(ProtocolTest, EveryBuiltInProverYieldsAClassifiedOutcome) {
  auto cfg = small_config();
  auto dist = small_dist();
  for (const auto& name : prover_names()) {
    for (Seed seed = 0; seed < 20; ++seed) {
      auto r = run_trial(dist, cfg, name, seed, 0.0);
      ASSERT_TRUE(r.transcript.outcome) << name;
      if (!r.transcript.outcome->accepted()) {
        EXPECT_FALSE(r.transcript.outcome->reason.empty()) << name;
      }
    }
  }
  EXPECT_THROW(run_trial(dist, cfg, "nobody", 0, 0.0), InvalidArgument);
}

TEST(ProtocolTest, FuzzedPayloadsNeverCrash) {
  auto cfg = small_config();
  auto dist = realizable_grid(4, {{0.3, 0.6}});
  std::size_t classified = 0;
  for (Seed seed = 0; seed < 10000; ++seed) {
    auto r = run_trial(dist, cfg, "fuzz", seed, 0.0);
    if (r.transcript.outcome) ++classified;
  }
  EXPECT_EQ(classified, 10000u);
}

TEST(ProtocolTest, TrialsAreReproducible) {
  auto cfg = small_config();
  auto dist = small_dist();
  auto a = run_trial(dist, cfg, "honest", 42, 0.0);
  auto b = run_trial(dist, cfg, "honest", 42, 0.0);
  EXPECT_EQ(harness::to_jsonl({{}, a.transcript, {}}), harness::to_jsonl({{}, b.transcript, {}}));
}

}  // namespace
}  // namespace pacverify::intervals
