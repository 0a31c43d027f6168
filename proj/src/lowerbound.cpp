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

#include "pacverify/lowerbound.hpp"

#include <algorithm>
#include <cmath>

#include "pacverify/error.hpp"
#include "pacverify/intervals.hpp"

namespace pacverify::lowerbound {

const char* to_string(Mode m) { return m == Mode::kUniform ? "uniform" : "function-mixture"; }

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::kUniform:
      return "uniform";
    case Verdict::kFunctionMixture:
      return "function-mixture";
    case Verdict::kUndecided:
      return "undecided";
  }
  return "unknown";
}

ShatteredInstance ShatteredInstance::make(std::size_t d) {
  if (d < 1) throw InvalidArgument("instance needs d >= 1");
  ShatteredInstance inst;
  inst.d = d;
  for (std::size_t i = 0; i < d; ++i) {
    inst.points.push_back((static_cast<double>(i) + 0.5) / static_cast<double>(d));
  }
  return inst;
}

std::vector<Draw> draw_mixture(const ShatteredInstance& inst, Mode mode, std::size_t t, Rng& rng) {
  if (t < 1) throw InvalidArgument("need t >= 1 draws");
  std::uniform_int_distribution<std::size_t> point(0, inst.d - 1);
  std::vector<Draw> out;
  out.reserve(t);
  if (mode == Mode::kUniform) {
    for (std::size_t i = 0; i < t; ++i) out.push_back({point(rng), static_cast<int>(rng() & 1)});
    return out;
  }
  // Labels of the hidden function are drawn lazily; unseen points never
  // influence the sample, so this matches drawing h up front.
  std::vector<int> h(inst.d, -1);
  for (std::size_t i = 0; i < t; ++i) {
    const std::size_t x = point(rng);
    if (h[x] < 0) h[x] = static_cast<int>(rng() & 1);
    out.push_back({x, h[x]});
  }
  return out;
}

std::vector<Draw> draw_mixture(const ShatteredInstance& inst, Mode mode, std::size_t t, Seed seed) {
  Rng rng = make_rng(seed);
  return draw_mixture(inst, mode, t, rng);
}

LabeledSample to_labeled(const ShatteredInstance& inst, std::span<const Draw> draws, Seed seed) {
  LabeledSample s;
  s.source_seed = seed;
  for (const auto& d : draws) s.points.push_back({inst.points[d.index], d.y});
  return s;
}

Verdict collision_distinguisher(std::span<const Draw> draws) {
  std::vector<Draw> sorted(draws.begin(), draws.end());
  std::sort(sorted.begin(), sorted.end(),
            [](const Draw& a, const Draw& b) { return a.index < b.index; });
  bool collision = false;
  for (std::size_t i = 1; i < sorted.size(); ++i) {
    if (sorted[i].index != sorted[i - 1].index) continue;
    if (sorted[i].y != sorted[i - 1].y) return Verdict::kUniform;
    collision = true;
  }
  return collision ? Verdict::kFunctionMixture : Verdict::kUndecided;
}

bool scored_correct(Verdict v, Mode truth, Rng& coin) {
  if (v == Verdict::kUndecided) return (coin() & 1) != 0;
  return (v == Verdict::kUniform) == (truth == Mode::kUniform);
}

double no_collision_probability(std::size_t d, std::size_t t) {
  double p = 1.0;
  for (std::size_t i = 0; i < t; ++i) {
    p *= 1.0 - static_cast<double>(i) / static_cast<double>(d);
    if (p <= 0.0) return 0.0;
  }
  return p;
}

double exact_tv(std::size_t d, std::size_t t) {
  if (d < 1) throw InvalidArgument("need d >= 1");
  // occupancy[u]: probability of u distinct points so far.
  std::vector<double> occupancy(t + 2, 0.0);
  occupancy[0] = 1.0;
  const double dd = static_cast<double>(d);
  for (std::size_t j = 0; j < t; ++j) {
    for (std::size_t u = std::min(j + 1, d); u >= 1; --u) {
      occupancy[u] = occupancy[u] * static_cast<double>(u) / dd +
                     occupancy[u - 1] * (dd - static_cast<double>(u - 1)) / dd;
    }
    occupancy[0] = 0.0;
  }
  double tv = 0.0;
  for (std::size_t u = 1; u <= std::min(t, d); ++u) {
    tv += occupancy[u] * (1.0 - std::exp2(static_cast<double>(u) - static_cast<double>(t)));
  }
  return tv;
}

CurvePoint measure(std::size_t d, std::size_t t, std::size_t trials, Seed seed) {
  const auto inst = ShatteredInstance::make(d);
  CurvePoint c;
  c.d = d;
  c.t = t;
  c.trials = trials;
  std::size_t correct = 0, collided = 0;
  for (Mode mode : {Mode::kUniform, Mode::kFunction}) {
    for (std::size_t i = 0; i < trials; ++i) {
      Rng rng = make_rng(split_seed(split_seed(seed, mode == Mode::kUniform ? 1 : 2), i));
      const auto draws = draw_mixture(inst, mode, t, rng);
      const Verdict v = collision_distinguisher(draws);
      if (v != Verdict::kUndecided) ++collided;
      correct += scored_correct(v, mode, rng) ? 1 : 0;
    }
  }
  const double total = 2.0 * static_cast<double>(trials);
  c.success_rate = static_cast<double>(correct) / total;
  c.collision_rate = static_cast<double>(collided) / total;
  c.tv_estimate = exact_tv(d, t);
  c.no_collision_exact = no_collision_probability(d, t);
  return c;
}

namespace {

double interpolate_crossing(const std::vector<double>& success) {
  // success[t] for t = 1..; index 0 unused.
  for (std::size_t t = 1; t < success.size(); ++t) {
    if (success[t] >= kTargetSuccess) {
      if (t == 1) return 1.0;
      const double lo = success[t - 1];
      return static_cast<double>(t - 1) + (kTargetSuccess - lo) / (success[t] - lo);
    }
  }
  return static_cast<double>(success.size());
}

}  // namespace

Crossing crossing_point(std::size_t d, std::size_t trials, Seed seed) {
  const auto inst = ShatteredInstance::make(d);
  const auto t_max = static_cast<std::size_t>(std::ceil(3.0 * std::sqrt(static_cast<double>(d))));
  std::vector<std::size_t> correct(t_max + 1, 0), collided(t_max + 1, 0);
  for (Mode mode : {Mode::kUniform, Mode::kFunction}) {
    for (std::size_t i = 0; i < trials; ++i) {
      Rng rng = make_rng(split_seed(split_seed(seed, mode == Mode::kUniform ? 1 : 2), i));
      const auto draws = draw_mixture(inst, mode, t_max, rng);
      // Prefix lengths at which the first repeat and the first
      // disagreeing repeat appear.
      std::size_t first_repeat = t_max + 1, first_disagree = t_max + 1;
      std::vector<int> seen(d, -1);
      for (std::size_t j = 0; j < t_max; ++j) {
        const auto& dr = draws[j];
        if (seen[dr.index] >= 0) {
          first_repeat = std::min(first_repeat, j + 1);
          if (seen[dr.index] != dr.y) {
            first_disagree = j + 1;
            break;
          }
        } else {
          seen[dr.index] = dr.y;
        }
      }
      for (std::size_t t = 1; t <= t_max; ++t) {
        Verdict v = Verdict::kUndecided;
        if (t >= first_disagree) {
          v = Verdict::kUniform;
        } else if (t >= first_repeat) {
          v = Verdict::kFunctionMixture;
        }
        if (v != Verdict::kUndecided) ++collided[t];
        correct[t] += scored_correct(v, mode, rng) ? 1 : 0;
      }
    }
  }
  Crossing out;
  out.d = d;
  std::vector<double> empirical(t_max + 1, 0.0), exact(t_max + 1, 0.0);
  const double total = 2.0 * static_cast<double>(trials);
  for (std::size_t t = 1; t <= t_max; ++t) {
    CurvePoint c;
    c.d = d;
    c.t = t;
    c.trials = trials;
    c.success_rate = static_cast<double>(correct[t]) / total;
    c.collision_rate = static_cast<double>(collided[t]) / total;
    c.tv_estimate = exact_tv(d, t);
    c.no_collision_exact = no_collision_probability(d, t);
    empirical[t] = c.success_rate;
    exact[t] = 0.5 + 0.5 * c.tv_estimate;
    out.curve.push_back(c);
  }
  out.t_empirical = interpolate_crossing(empirical);
  out.t_exact = interpolate_crossing(exact);
  return out;
}

std::size_t test_sample_size() {
  return static_cast<std::size_t>(std::ceil(18.0 * 18.0 * std::log(12.0)));
}

DiscreteDistribution<LabeledPoint> mode_distribution(const ShatteredInstance& inst, Mode mode,
                                                     Seed seed) {
  if (mode == Mode::kUniform) return intervals::uniform_label_grid(inst.d);
  Rng rng = make_rng(seed);
  std::vector<LabeledPoint> support;
  for (double x : inst.points) support.push_back({x, static_cast<int>(rng() & 1)});
  return DiscreteDistribution<LabeledPoint>::uniform(std::move(support));
}

ReductionResult reduction_tester(const ShatteredInstance& inst,
                                 const DiscreteDistribution<LabeledPoint>& dist, Seed seed) {
  if (inst.d < 2 || inst.d % 2 != 0) throw InvalidArgument("reduction needs an even d >= 2");
  const auto cfg = intervals::IntervalProtocolConfig::make(inst.d / 2, 1.0 / 3.0, 1.0 / 3.0);
  const auto uniform = intervals::uniform_label_grid(inst.d);

  Rng vrng = make_rng(split_seed(seed, stream::kVerifierSample));
  intervals::Verifier verifier(cfg, intervals::draw_tagged(dist, cfg.m_v, vrng));
  Rng prng = make_rng(split_seed(seed, stream::kProverSample));
  intervals::HonestProver prover(intervals::draw_tagged(uniform, cfg.m_p, prng), cfg.k);
  const auto t = harness::run_interaction(verifier, prover, {cfg.epsilon, cfg.delta}, seed);

  ReductionResult r;
  if (!t.outcome->accepted()) {
    r.verifier_rejected = true;
    r.verdict = Mode::kFunction;
    return r;
  }
  const auto h = intervals::union_from_json(*t.outcome->hypothesis);
  Rng trng = make_rng(split_seed(seed, stream::kTestSample));
  const auto test = sample_points(dist, test_sample_size(), trng);
  std::size_t wrong = 0;
  for (const auto& p : test) wrong += (h(p.x) ? 1 : 0) != p.y ? 1 : 0;
  r.test_loss = static_cast<double>(wrong) / static_cast<double>(test.size());
  r.verdict = r.test_loss <= 1.0 / 3.0 ? Mode::kFunction : Mode::kUniform;
  return r;
}

}  // namespace pacverify::lowerbound
