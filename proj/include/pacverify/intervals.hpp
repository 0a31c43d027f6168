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

#ifndef PACVERIFY_INTERVALS_HPP_
#define PACVERIFY_INTERVALS_HPP_

#include <array>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pacverify/distribution.hpp"
#include "pacverify/harness.hpp"
#include "pacverify/identity_test.hpp"
#include "pacverify/rng.hpp"

namespace pacverify::intervals {

// A union of closed intervals in [0,1], kept sorted with overlapping or
// touching intervals merged.
class UnionOfIntervals {
 public:
  UnionOfIntervals() = default;
  explicit UnionOfIntervals(std::vector<std::pair<double, double>> intervals);

  bool contains(double x) const;
  bool operator()(double x) const { return contains(x); }

  const std::vector<std::pair<double, double>>& intervals() const { return intervals_; }
  std::size_t size() const { return intervals_.size(); }

  friend bool operator==(const UnionOfIntervals&, const UnionOfIntervals&) = default;

 private:
  std::vector<std::pair<double, double>> intervals_;
};

nlohmann::json to_json(const UnionOfIntervals& h);
UnionOfIntervals union_from_json(const nlohmann::json& j);

// A draw from the population together with a uniform tiebreak coordinate.
// Points are ordered lexicographically by (x, u); this is what lets a
// partition give every cell exactly the same number of sample points when
// x-values repeat.
struct TaggedPoint {
  double x = 0.0;
  int y = 0;
  double u = 0.0;
};

std::vector<TaggedPoint> draw_tagged(const DiscreteDistribution<LabeledPoint>& dist, std::size_t m,
                                     Rng& rng);

// A cut point in the (x, u) order. Cell j holds the points p with
// boundaries[j] <= p < boundaries[j+1]; the outer cuts are (0,0) and (1,1),
// so every point of [0,1] x [0,1) falls in exactly one cell.
struct Cut {
  double x = 0.0;
  double t = 0.0;

  friend bool operator==(const Cut&, const Cut&) = default;
  friend auto operator<=>(const Cut&, const Cut&) = default;
};

struct DiscretizedMessage {
  std::vector<Cut> boundaries;
  std::vector<std::array<std::uint64_t, 2>> counts;
  std::uint64_t denominator = 0;

  std::size_t k() const { return counts.size(); }
};

nlohmann::json to_json(const DiscretizedMessage& msg);
// Strict parse of the wire format. Throws ProtocolViolation on anything the
// verifier should not act on.
DiscretizedMessage message_from_json(const nlohmann::json& j);

inline constexpr double kDefaultProverConstant = 1.25;

struct IntervalProtocolConfig {
  std::size_t d = 1;
  double epsilon = 0.1;
  double delta = 0.1;
  // 12 d / epsilon.
  std::size_t k = 0;
  std::size_t m_v = 0;
  std::size_t m_p = 0;
  double tester_constant = identity::kDefaultConstant;
  double prover_constant = kDefaultProverConstant;

  // Requires 1/epsilon integral. m_v is the tester's requirement on 2k
  // points at (epsilon/6, delta/2); m_p = ceil(C_P * k / (epsilon/6)^2)
  // rounded up to a multiple of k.
  static IntervalProtocolConfig make(std::size_t d, double epsilon, double delta,
                                     double tester_constant = identity::kDefaultConstant,
                                     double prover_constant = kDefaultProverConstant);

  void validate() const;
  identity::IdentityTestConfig tester_config() const;
  // Prover samples for S_P to be an (epsilon / (6 sqrt(2k)))-sample for the
  // 2k cell events by the standard uniform-convergence bound. Reported only.
  double uniform_convergence_prover_samples() const;
};

// Sorts the sample by (x, u) and cuts it into k runs of m/k points. Cuts sit
// midway between neighbouring x-values, or midway between tiebreaks when
// the neighbours share x. Throws InvalidArgument unless k divides m.
DiscretizedMessage honest_prover_partition(std::span<const TaggedPoint> s_p, std::size_t k);

// Index of the cell holding (x, u); x outside [0,1] throws InvalidArgument.
std::size_t cell_of(std::span<const Cut> boundaries, double x, double u);

// Midpoint of each cell's x-range.
std::vector<double> representatives(std::span<const Cut> boundaries);

// Mass D(I_j x {y}) at index 2j + y, splitting a point shared by several
// cells by the tiebreak fraction each cell covers.
std::vector<double> cell_masses(const DiscreteDistribution<LabeledPoint>& dist,
                                std::span<const Cut> boundaries);

// Pushforward of `dist` onto (x*_j, y). Cells sharing a representative merge.
DiscreteDistribution<LabeledPoint> discretize(const DiscreteDistribution<LabeledPoint>& dist,
                                              std::span<const Cut> boundaries,
                                              std::span<const double> reps);

// The prover's claimed distribution on (x*_j, y), exact over msg.denominator.
DiscreteDistribution<LabeledPoint> message_distribution(const DiscretizedMessage& msg,
                                                        std::span<const double> reps);

// Exact 0-1 loss minimizer over unions of at most d intervals with
// endpoints on the support's x-values. Ties prefer fewer intervals, then the
// lexicographically smallest endpoint sequence. Inexact masses are first
// quantized over kDefaultJsonDenominator.
UnionOfIntervals erm_discretized(const DiscreteDistribution<LabeledPoint>& dist, std::size_t d);

double population_loss_01(const UnionOfIntervals& h, const DiscreteDistribution<LabeledPoint>& dist);

// L_D(H_d), attained by erm_discretized on D itself.
double best_in_class_loss(const DiscreteDistribution<LabeledPoint>& dist, std::size_t d);

harness::HypothesisLoss hypothesis_loss(const DiscreteDistribution<LabeledPoint>& dist);

class Verifier : public harness::VerifierStrategy {
 public:
  Verifier(IntervalProtocolConfig cfg, std::vector<TaggedPoint> s_v);

  std::size_t max_exchanges() const override { return 1; }
  harness::VerifierOutcome run(harness::ProverChannel& channel,
                               const harness::VerificationParams& params, Rng& coins) override;

 private:
  IntervalProtocolConfig cfg_;
  std::vector<TaggedPoint> s_v_;
};

class HonestProver : public harness::ProverStrategy {
 public:
  HonestProver(std::vector<TaggedPoint> s_p, std::size_t k);
  std::optional<std::string> respond(std::string_view request, Rng& rng) override;

 private:
  std::vector<TaggedPoint> s_p_;
  std::size_t k_;
};

// Built-in provers: "honest", the soundness adversaries "mass-shift",
// "wrong-boundary", "label-swap", "count-inflate", and the robustness
// adversaries "garbage", "silent", "fuzz".
std::vector<std::string> prover_names();
std::vector<std::string> soundness_adversaries();

std::unique_ptr<harness::ProverStrategy> make_prover(const std::string& name,
                                                     const DiscreteDistribution<LabeledPoint>& dist,
                                                     const IntervalProtocolConfig& cfg,
                                                     std::vector<TaggedPoint> s_p);

struct TrialResult {
  harness::Transcript transcript;
  harness::Classification classification;
  // Population loss of the accepted hypothesis; NaN on reject.
  double loss = 0.0;
};

// One full run: S_V and S_P drawn from split streams of `seed`, interaction,
// classification against `baseline`.
TrialResult run_trial(const DiscreteDistribution<LabeledPoint>& dist,
                      const IntervalProtocolConfig& cfg, const std::string& prover, Seed seed,
                      double baseline);

// Grid x_i = (i + 1/2)/n with label 1 on `ones` (closed intervals) and 0
// elsewhere; uniform over the grid.
DiscreteDistribution<LabeledPoint> realizable_grid(std::size_t n,
                                                   const std::vector<std::pair<double, double>>& ones);

// Grid with each x carrying both labels at equal mass.
DiscreteDistribution<LabeledPoint> uniform_label_grid(std::size_t n);

}  // namespace pacverify::intervals

#endif  // PACVERIFY_INTERVALS_HPP_
