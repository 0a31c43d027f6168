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

#ifndef PACVERIFY_LOWERBOUND_HPP_
#define PACVERIFY_LOWERBOUND_HPP_

#include <cstddef>
#include <span>
#include <vector>

#include "json.hpp"
#include "pacverify/distribution.hpp"
#include "pacverify/rng.hpp"

namespace pacverify::lowerbound {

// kUniform: every draw is a uniform point of X with a fair label.
// kFunction: one labeling h of X is drawn uniformly, then every draw is a
// uniform point x labeled h(x).
enum class Mode { kUniform, kFunction };

const char* to_string(Mode m);

struct ShatteredInstance {
  std::size_t d = 1;
  // x_i = (i + 1/2) / d.
  std::vector<double> points;

  static ShatteredInstance make(std::size_t d);
};

// A draw, identified by the index of its point in X.
struct Draw {
  std::size_t index = 0;
  int y = 0;
};

std::vector<Draw> draw_mixture(const ShatteredInstance& inst, Mode mode, std::size_t t, Rng& rng);
std::vector<Draw> draw_mixture(const ShatteredInstance& inst, Mode mode, std::size_t t, Seed seed);
LabeledSample to_labeled(const ShatteredInstance& inst, std::span<const Draw> draws, Seed seed);

enum class Verdict { kUniform, kFunctionMixture, kUndecided };

const char* to_string(Verdict v);

// Two draws of one point with different labels: uniform. Otherwise any
// repeated point: function mixture (each agreeing repeat halves the
// likelihood under the uniform law). No repeats: undecided.
Verdict collision_distinguisher(std::span<const Draw> draws);

// Undecided verdicts score as a fair coin.
bool scored_correct(Verdict v, Mode truth, Rng& coin);

// prod_{i<t} (1 - i/d).
double no_collision_probability(std::size_t d, std::size_t t);

// TV between t draws of the two modes. Given the points, the uniform mode
// spreads over all 2^t labelings and the function mode over the 2^u that
// are constant on each of the u distinct points, so the distance is
// E[1 - 2^(u - t)] over the occupancy law of u.
double exact_tv(std::size_t d, std::size_t t);

struct CurvePoint {
  std::size_t d = 0;
  std::size_t t = 0;
  std::size_t trials = 0;
  double success_rate = 0.0;
  double collision_rate = 0.0;
  double tv_estimate = 0.0;
  double no_collision_exact = 0.0;
};

// `trials` runs per mode with independent samples.
CurvePoint measure(std::size_t d, std::size_t t, std::size_t trials, Seed seed);

inline constexpr double kTargetSuccess = 7.0 / 12.0;

struct Crossing {
  std::size_t d = 0;
  // Interpolated t where success first reaches 7/12.
  double t_empirical = 0.0;
  double t_exact = 0.0;
  std::vector<CurvePoint> curve;
};

// Success for every t up to ceil(3 sqrt(d)) from `trials` sequences per
// mode, scoring each prefix.
Crossing crossing_point(std::size_t d, std::size_t trials, Seed seed);

// ceil(18^2 ln 12).
std::size_t test_sample_size();

struct ReductionResult {
  Mode verdict = Mode::kUniform;
  bool verifier_rejected = false;
  double test_loss = 0.0;
};

// The reduction tester built from the intervals verifier at
// epsilon = delta = 1/3 on X, with d/2 intervals: run the protocol with
// S_V from `dist` and an honest prover fed uniform-mode samples, then
// threshold the loss on c fresh draws at 1/3. d must be even.
ReductionResult reduction_tester(const ShatteredInstance& inst,
                                 const DiscreteDistribution<LabeledPoint>& dist, Seed seed);

// The distribution of one mode; the function mode draws its labeling from
// `seed`.
DiscreteDistribution<LabeledPoint> mode_distribution(const ShatteredInstance& inst, Mode mode,
                                                     Seed seed);

}  // namespace pacverify::lowerbound

#endif  // PACVERIFY_LOWERBOUND_HPP_
