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

#include "pacverify/intervals.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <tuple>

#include "pacverify/error.hpp"
#include "pacverify/loss.hpp"

namespace pacverify::intervals {

UnionOfIntervals::UnionOfIntervals(std::vector<std::pair<double, double>> intervals) {
  for (const auto& [a, b] : intervals) {
    if (!(a >= 0.0 && a <= b && b <= 1.0)) {
      throw InvalidArgument("interval endpoints must satisfy 0 <= a <= b <= 1");
    }
  }
  std::sort(intervals.begin(), intervals.end());
  for (const auto& iv : intervals) {
    if (!intervals_.empty() && iv.first <= intervals_.back().second) {
      intervals_.back().second = std::max(intervals_.back().second, iv.second);
    } else {
      intervals_.push_back(iv);
    }
  }
}

bool UnionOfIntervals::contains(double x) const {
  auto it = std::upper_bound(intervals_.begin(), intervals_.end(), x,
                             [](double v, const auto& iv) { return v < iv.first; });
  if (it == intervals_.begin()) return false;
  --it;
  return x <= it->second;
}

nlohmann::json to_json(const UnionOfIntervals& h) {
  nlohmann::json j = nlohmann::json::array();
  for (const auto& [a, b] : h.intervals()) j.push_back({a, b});
  return j;
}

UnionOfIntervals union_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw InvalidArgument("hypothesis must be an array of [a, b] pairs");
  std::vector<std::pair<double, double>> ivs;
  for (const auto& e : j) {
    if (!e.is_array() || e.size() != 2 || !e[0].is_number() || !e[1].is_number()) {
      throw InvalidArgument("hypothesis must be an array of [a, b] pairs");
    }
    ivs.emplace_back(e[0].get<double>(), e[1].get<double>());
  }
  return UnionOfIntervals(std::move(ivs));
}

std::vector<TaggedPoint> draw_tagged(const DiscreteDistribution<LabeledPoint>& dist, std::size_t m,
                                     Rng& rng) {
  Sampler<LabeledPoint> sampler(dist);
  std::vector<TaggedPoint> out;
  out.reserve(m);
  for (std::size_t i = 0; i < m; ++i) {
    const auto& p = sampler.draw(rng);
    out.push_back({p.x, p.y, uniform01(rng)});
  }
  return out;
}

nlohmann::json to_json(const DiscretizedMessage& msg) {
  nlohmann::json j;
  j["boundaries"] = nlohmann::json::array();
  j["tiebreak"] = nlohmann::json::array();
  for (const auto& c : msg.boundaries) {
    j["boundaries"].push_back(c.x);
    j["tiebreak"].push_back(c.t);
  }
  j["counts"] = nlohmann::json::array();
  for (const auto& c : msg.counts) j["counts"].push_back({c[0], c[1]});
  j["denominator"] = msg.denominator;
  return j;
}

DiscretizedMessage message_from_json(const nlohmann::json& j) {
  auto fail = [](const std::string& what) -> void {
    throw ProtocolViolation("malformed partition message: " + what);
  };
  if (!j.is_object()) fail("not an object");
  for (const char* key : {"boundaries", "tiebreak", "counts", "denominator"}) {
    if (!j.contains(key)) fail(std::string("missing '") + key + "'");
  }
  const auto& b = j.at("boundaries");
  const auto& t = j.at("tiebreak");
  const auto& c = j.at("counts");
  if (!b.is_array() || !t.is_array() || !c.is_array()) fail("expected arrays");
  if (b.size() < 2 || t.size() != b.size() || c.size() + 1 != b.size()) fail("inconsistent lengths");
  if (!j.at("denominator").is_number_unsigned()) fail("denominator must be a nonnegative integer");
  DiscretizedMessage msg;
  msg.denominator = j.at("denominator").get<std::uint64_t>();
  if (msg.denominator == 0) fail("denominator must be positive");
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (!b[i].is_number() || !t[i].is_number()) fail("boundaries must be numbers");
    Cut cut{b[i].get<double>(), t[i].get<double>()};
    if (!(cut.x >= 0.0 && cut.x <= 1.0 && cut.t >= 0.0 && cut.t <= 1.0)) {
      fail("boundary outside [0,1]");
    }
    if (!msg.boundaries.empty() && cut < msg.boundaries.back()) fail("boundaries out of order");
    msg.boundaries.push_back(cut);
  }
  if (!(msg.boundaries.front() == Cut{0.0, 0.0}) || !(msg.boundaries.back() == Cut{1.0, 1.0})) {
    fail("cells must cover [0,1]");
  }
  for (const auto& pair : c) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_unsigned() ||
        !pair[1].is_number_unsigned()) {
      fail("counts must be pairs of nonnegative integers");
    }
    msg.counts.push_back({pair[0].get<std::uint64_t>(), pair[1].get<std::uint64_t>()});
  }
  return msg;
}

IntervalProtocolConfig IntervalProtocolConfig::make(std::size_t d, double epsilon, double delta,
                                                    double tester_constant,
                                                    double prover_constant) {
  IntervalProtocolConfig cfg;
  cfg.d = d;
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.tester_constant = tester_constant;
  cfg.prover_constant = prover_constant;
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  const double inv = 1.0 / epsilon;
  const double rounded = std::round(inv);
  if (std::abs(inv - rounded) > 1e-9 * inv) throw InvalidArgument("1/epsilon must be an integer");
  cfg.k = 12 * d * static_cast<std::size_t>(rounded);
  cfg.m_v = identity::required_samples(cfg.tester_config());
  const double eps6 = epsilon / 6.0;
  auto mp = static_cast<std::size_t>(
      std::ceil(prover_constant * static_cast<double>(cfg.k) / (eps6 * eps6)));
  cfg.m_p = (mp + cfg.k - 1) / cfg.k * cfg.k;
  cfg.validate();
  return cfg;
}

void IntervalProtocolConfig::validate() const {
  if (d < 1) throw InvalidArgument("interval budget d must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (k < 1) throw InvalidArgument("k must be >= 1");
  if (m_v < 1 || m_p < 1) throw InvalidArgument("sample budgets must be >= 1");
  if (m_p % k != 0) throw InvalidArgument("m_p must be a multiple of k");
  if (!(prover_constant > 0.0)) throw InvalidArgument("prover constant must be positive");
}

identity::IdentityTestConfig IntervalProtocolConfig::tester_config() const {
  return identity::IdentityTestConfig::make(2 * k, epsilon / 6.0, delta / 2.0, tester_constant);
}

double IntervalProtocolConfig::uniform_convergence_prover_samples() const {
  const double vc = 2.0 * static_cast<double>(k);
  const double acc = epsilon / (6.0 * std::sqrt(vc));
  return (vc + std::log(2.0 / delta)) / (acc * acc);
}

namespace {

bool tagged_less(const TaggedPoint& a, const TaggedPoint& b) {
  return std::tie(a.x, a.u, a.y) < std::tie(b.x, b.u, b.y);
}

Cut cut_between(const TaggedPoint& a, const TaggedPoint& b) {
  if (a.x < b.x) {
    const double mid = a.x + (b.x - a.x) / 2.0;
    return mid > a.x ? Cut{mid, 0.0} : Cut{b.x, 0.0};
  }
  const double mid = a.u + (b.u - a.u) / 2.0;
  return mid > a.u ? Cut{a.x, mid} : Cut{a.x, b.u};
}

}  // namespace

DiscretizedMessage honest_prover_partition(std::span<const TaggedPoint> s_p, std::size_t k) {
  if (k == 0 || s_p.empty() || s_p.size() % k != 0) {
    throw InvalidArgument("sample size must be a positive multiple of k");
  }
  std::vector<TaggedPoint> sorted(s_p.begin(), s_p.end());
  std::sort(sorted.begin(), sorted.end(), tagged_less);
  const std::size_t run = sorted.size() / k;
  DiscretizedMessage msg;
  msg.denominator = sorted.size();
  msg.boundaries.push_back({0.0, 0.0});
  msg.counts.assign(k, {0, 0});
  for (std::size_t j = 0; j < k; ++j) {
    if (j > 0) msg.boundaries.push_back(cut_between(sorted[j * run - 1], sorted[j * run]));
    for (std::size_t i = j * run; i < (j + 1) * run; ++i) ++msg.counts[j][sorted[i].y];
  }
  msg.boundaries.push_back({1.0, 1.0});
  return msg;
}

std::size_t cell_of(std::span<const Cut> boundaries, double x, double u) {
  if (!(x >= 0.0 && x <= 1.0)) throw InvalidArgument("x outside [0,1]");
  const std::size_t k = boundaries.size() - 1;
  auto it = std::upper_bound(boundaries.begin(), boundaries.end(), Cut{x, u});
  const auto idx = static_cast<std::size_t>(it - boundaries.begin());
  if (idx == 0) return 0;
  return std::min(idx - 1, k - 1);
}

std::vector<double> representatives(std::span<const Cut> boundaries) {
  std::vector<double> reps;
  for (std::size_t j = 0; j + 1 < boundaries.size(); ++j) {
    const double a = boundaries[j].x;
    const double b = boundaries[j + 1].x;
    reps.push_back(a + (b - a) / 2.0);
  }
  return reps;
}

std::vector<double> cell_masses(const DiscreteDistribution<LabeledPoint>& dist,
                                std::span<const Cut> boundaries) {
  const std::size_t k = boundaries.size() - 1;
  std::vector<double> out(2 * k, 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    const double w = dist.masses()[i];
    if (w <= 0.0) continue;
    const auto& p = dist.support()[i];
    const std::size_t lo = cell_of(boundaries, p.x, 0.0);
    const std::size_t hi = cell_of(boundaries, p.x, std::nextafter(1.0, 0.0));
    for (std::size_t j = lo; j <= hi; ++j) {
      const double lower = boundaries[j].x < p.x ? 0.0 : boundaries[j].t;
      const double upper = boundaries[j + 1].x > p.x ? 1.0 : boundaries[j + 1].t;
      const double frac = std::clamp(upper - lower, 0.0, 1.0);
      out[2 * j + static_cast<std::size_t>(p.y)] += w * frac;
    }
  }
  return out;
}

namespace {

// Distinct representatives in ascending order and each cell's slot.
std::pair<std::vector<double>, std::vector<std::size_t>> merge_representatives(
    std::span<const double> reps) {
  std::vector<double> distinct(reps.begin(), reps.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  std::vector<std::size_t> slot;
  for (double r : reps) {
    slot.push_back(static_cast<std::size_t>(
        std::lower_bound(distinct.begin(), distinct.end(), r) - distinct.begin()));
  }
  return {distinct, slot};
}

std::vector<LabeledPoint> labeled_support(const std::vector<double>& xs) {
  std::vector<LabeledPoint> support;
  for (double x : xs) {
    support.push_back({x, 0});
    support.push_back({x, 1});
  }
  return support;
}

}  // namespace

DiscreteDistribution<LabeledPoint> discretize(const DiscreteDistribution<LabeledPoint>& dist,
                                              std::span<const Cut> boundaries,
                                              std::span<const double> reps) {
  if (reps.size() + 1 != boundaries.size()) {
    throw InvalidArgument("need one representative per cell");
  }
  auto cells = cell_masses(dist, boundaries);
  auto [xs, slot] = merge_representatives(reps);
  std::vector<double> masses(2 * xs.size(), 0.0);
  for (std::size_t j = 0; j < reps.size(); ++j) {
    masses[2 * slot[j]] += cells[2 * j];
    masses[2 * slot[j] + 1] += cells[2 * j + 1];
  }
  return DiscreteDistribution<LabeledPoint>::from_weights(labeled_support(xs), std::move(masses));
}

DiscreteDistribution<LabeledPoint> message_distribution(const DiscretizedMessage& msg,
                                                        std::span<const double> reps) {
  if (reps.size() != msg.k()) throw InvalidArgument("need one representative per cell");
  auto [xs, slot] = merge_representatives(reps);
  std::vector<std::uint64_t> counts(2 * xs.size(), 0);
  for (std::size_t j = 0; j < reps.size(); ++j) {
    counts[2 * slot[j]] += msg.counts[j][0];
    counts[2 * slot[j] + 1] += msg.counts[j][1];
  }
  return DiscreteDistribution<LabeledPoint>::from_counts(labeled_support(xs), std::move(counts),
                                                         msg.denominator);
}

UnionOfIntervals erm_discretized(const DiscreteDistribution<LabeledPoint>& dist, std::size_t d) {
  const std::vector<std::uint64_t> weights =
      dist.is_exact() ? dist.counts() : quantize_masses(dist.masses(), kDefaultJsonDenominator);

  // Per distinct x: cost of predicting 1 (label-0 weight) and of predicting 0.
  std::vector<double> xs;
  std::vector<std::uint64_t> cost_in, cost_out;
  for (std::size_t idx : dist.sorted_order()) {
    const auto& p = dist.support()[idx];
    if (xs.empty() || xs.back() != p.x) {
      xs.push_back(p.x);
      cost_in.push_back(0);
      cost_out.push_back(0);
    }
    (p.y == 0 ? cost_in : cost_out).back() += weights[idx];
  }
  const std::size_t n = xs.size();
  constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
  // f[i][s][r]: least cost of positions i..n-1 when position i-1 is inside a
  // run (s = 1) or not (s = 0) and exactly r more runs must be opened.
  const std::size_t stride_s = d + 1;
  const std::size_t stride_i = 2 * stride_s;
  std::vector<std::uint64_t> f((n + 1) * stride_i, kInf);
  auto at = [&](std::size_t i, int s, std::size_t r) -> std::uint64_t& {
    return f[i * stride_i + static_cast<std::size_t>(s) * stride_s + r];
  };
  auto add = [](std::uint64_t a, std::uint64_t b) { return b == kInf ? kInf : a + b; };
  at(n, 0, 0) = 0;
  at(n, 1, 0) = 0;
  for (std::size_t i = n; i-- > 0;) {
    for (int s = 0; s < 2; ++s) {
      for (std::size_t r = 0; r <= d; ++r) {
        std::uint64_t best = add(cost_out[i], at(i + 1, 0, r));
        if (s == 1) {
          best = std::min(best, add(cost_in[i], at(i + 1, 1, r)));
        } else if (r > 0) {
          best = std::min(best, add(cost_in[i], at(i + 1, 1, r - 1)));
        }
        at(i, s, r) = best;
      }
    }
  }
  std::size_t runs = 0;
  for (std::size_t r = 1; r <= d; ++r) {
    if (at(0, 0, r) < at(0, 0, runs)) runs = r;
  }
  // Walk forward, starting runs as early and closing them as early as an
  // optimal completion allows.
  std::vector<std::pair<double, double>> out;
  int s = 0;
  std::size_t r = runs;
  std::size_t start = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const std::uint64_t target = at(i, s, r);
    if (s == 0) {
      if (r > 0 && add(cost_in[i], at(i + 1, 1, r - 1)) == target) {
        s = 1;
        --r;
        start = i;
      }
    } else if (add(cost_out[i], at(i + 1, 0, r)) == target) {
      out.emplace_back(xs[start], xs[i - 1]);
      s = 0;
    }
  }
  if (s == 1) out.emplace_back(xs[start], xs[n - 1]);
  return UnionOfIntervals(std::move(out));
}

double population_loss_01(const UnionOfIntervals& h, const DiscreteDistribution<LabeledPoint>& dist) {
  return population_loss(h, dist, zero_one_loss<UnionOfIntervals>());
}

double best_in_class_loss(const DiscreteDistribution<LabeledPoint>& dist, std::size_t d) {
  return population_loss_01(erm_discretized(dist, d), dist);
}

harness::HypothesisLoss hypothesis_loss(const DiscreteDistribution<LabeledPoint>& dist) {
  return [dist](const nlohmann::json& h) { return population_loss_01(union_from_json(h), dist); };
}

Verifier::Verifier(IntervalProtocolConfig cfg, std::vector<TaggedPoint> s_v)
    : cfg_(std::move(cfg)), s_v_(std::move(s_v)) {
  cfg_.validate();
}

harness::VerifierOutcome Verifier::run(harness::ProverChannel& channel,
                                       const harness::VerificationParams& /*params*/,
                                       Rng& /*coins*/) {
  nlohmann::json request{{"type", "partition-request"}, {"k", cfg_.k}};
  const std::string reply = channel.exchange(request.dump());
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::parse_error&) {
    throw ProtocolViolation("prover message is not JSON");
  }
  const DiscretizedMessage msg = message_from_json(j);
  if (msg.k() != cfg_.k) throw ProtocolViolation("expected " + std::to_string(cfg_.k) + " cells");

  const std::size_t k = cfg_.k;
  for (std::size_t c = 0; c < k; ++c) {
    const unsigned __int128 cell = static_cast<unsigned __int128>(msg.counts[c][0]) + msg.counts[c][1];
    if (cell * k != msg.denominator) {
      return harness::VerifierOutcome::reject("cell " + std::to_string(c) +
                                              " does not carry mass exactly 1/k");
    }
  }

  std::vector<double> reference(2 * k);
  for (std::size_t c = 0; c < k; ++c) {
    reference[2 * c] = static_cast<double>(msg.counts[c][0]) / static_cast<double>(msg.denominator);
    reference[2 * c + 1] =
        static_cast<double>(msg.counts[c][1]) / static_cast<double>(msg.denominator);
  }
  std::vector<std::size_t> mapped;
  mapped.reserve(s_v_.size());
  for (const auto& p : s_v_) {
    mapped.push_back(2 * cell_of(msg.boundaries, p.x, p.u) + static_cast<std::size_t>(p.y));
  }
  const auto verdict = identity::tolerant_identity_test(reference, mapped, cfg_.tester_config());
  nlohmann::json detail{{"tester", identity::to_json(verdict)}};
  if (!verdict.accept) return harness::VerifierOutcome::reject("identity test failed", detail);

  const auto reps = representatives(msg.boundaries);
  const auto claimed = message_distribution(msg, reps);
  return harness::VerifierOutcome::accept(to_json(erm_discretized(claimed, cfg_.d)), detail);
}

HonestProver::HonestProver(std::vector<TaggedPoint> s_p, std::size_t k)
    : s_p_(std::move(s_p)), k_(k) {}

std::optional<std::string> HonestProver::respond(std::string_view /*request*/, Rng& /*rng*/) {
  return to_json(honest_prover_partition(s_p_, k_)).dump();
}

namespace {

enum class Attack {
  kMassShift,
  kWrongBoundary,
  kLabelSwap,
  kCountInflate,
  kGarbage,
  kSilent,
  kFuzz,
};

struct AttackName {
  const char* name;
  Attack attack;
};

constexpr AttackName kAttacks[] = {
    {"mass-shift", Attack::kMassShift},   {"wrong-boundary", Attack::kWrongBoundary},
    {"label-swap", Attack::kLabelSwap},   {"count-inflate", Attack::kCountInflate},
    {"garbage", Attack::kGarbage},        {"silent", Attack::kSilent},
    {"fuzz", Attack::kFuzz},
};

bool needs_sample(Attack a) {
  return a != Attack::kGarbage && a != Attack::kSilent;
}

std::string random_bytes(Rng& rng) {
  std::uniform_int_distribution<int> len(1, 64);
  std::uniform_int_distribution<int> byte(0, 255);
  std::string s(static_cast<std::size_t>(len(rng)), '\0');
  for (auto& c : s) c = static_cast<char>(byte(rng));
  return s;
}

// One random structural or byte-level corruption of a well-formed message.
std::string fuzz_message(const DiscretizedMessage& honest, Rng& rng) {
  nlohmann::json j = to_json(honest);
  std::uniform_int_distribution<int> pick(0, 9);
  auto index = [&rng](std::size_t n) {
    return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng);
  };
  const nlohmann::json odd_values[] = {-0.5, 1.5, nullptr, "x", -3, 2.5, nlohmann::json::array(),
                                       1e308};
  switch (pick(rng)) {
    case 0: {
      std::string s = j.dump();
      return s.substr(0, index(s.size()));
    }
    case 1: {
      std::string s = j.dump();
      s[index(s.size())] = static_cast<char>(std::uniform_int_distribution<int>(0, 255)(rng));
      return s;
    }
    case 2: {
      auto& cell = j["counts"][index(honest.k())];
      const auto delta = std::uniform_int_distribution<int>(-5, 5)(rng);
      cell[index(2)] = cell[0].get<std::int64_t>() + delta;
      break;
    }
    case 3:
      j["boundaries"][index(honest.boundaries.size())] = odd_values[index(std::size(odd_values))];
      break;
    case 4: {
      const char* keys[] = {"boundaries", "tiebreak", "counts", "denominator"};
      j.erase(keys[index(4)]);
      break;
    }
    case 5: {
      auto& b = j["boundaries"];
      std::swap(b[index(b.size())], b[index(b.size())]);
      break;
    }
    case 6:
      j["denominator"] = odd_values[index(std::size(odd_values))];
      break;
    case 7:
      j["counts"][index(honest.k())] = odd_values[index(std::size(odd_values))];
      break;
    case 8:
      j["counts"].push_back({1, 1});
      break;
    default:
      j = odd_values[index(std::size(odd_values))];
      break;
  }
  return j.dump();
}

class AdversarialProver : public harness::ProverStrategy {
 public:
  AdversarialProver(Attack attack, IntervalProtocolConfig cfg, std::vector<TaggedPoint> s_p)
      : attack_(attack), cfg_(std::move(cfg)), s_p_(std::move(s_p)) {}

  std::optional<std::string> respond(std::string_view /*request*/, Rng& rng) override {
    if (attack_ == Attack::kSilent) return std::nullopt;
    if (attack_ == Attack::kGarbage) return random_bytes(rng);
    DiscretizedMessage msg = honest_prover_partition(s_p_, cfg_.k);
    const std::size_t k = msg.k();
    switch (attack_) {
      case Attack::kMassShift: {
        // Flip the labels of the leftmost cells holding epsilon of the mass.
        const auto flipped = static_cast<std::size_t>(
            std::ceil(cfg_.epsilon * static_cast<double>(k) - 1e-9));
        for (std::size_t j = 0; j < std::min(flipped, k); ++j) {
          std::swap(msg.counts[j][0], msg.counts[j][1]);
        }
        break;
      }
      case Attack::kWrongBoundary:
        for (std::size_t j = 1; j < k; ++j) {
          msg.boundaries[j] = {static_cast<double>(j) / static_cast<double>(k), 0.0};
        }
        break;
      case Attack::kLabelSwap:
        for (auto& c : msg.counts) std::swap(c[0], c[1]);
        break;
      case Attack::kCountInflate:
        ++msg.counts[0][msg.counts[0][1] > msg.counts[0][0] ? 1 : 0];
        break;
      case Attack::kFuzz:
        return fuzz_message(msg, rng);
      default:
        break;
    }
    return to_json(msg).dump();
  }

 private:
  Attack attack_;
  IntervalProtocolConfig cfg_;
  std::vector<TaggedPoint> s_p_;
};

}  // namespace

std::vector<std::string> prover_names() {
  std::vector<std::string> names{"honest"};
  for (const auto& a : kAttacks) names.emplace_back(a.name);
  return names;
}

std::vector<std::string> soundness_adversaries() {
  return {"mass-shift", "wrong-boundary", "label-swap"};
}

std::unique_ptr<harness::ProverStrategy> make_prover(const std::string& name,
                                                     const DiscreteDistribution<LabeledPoint>& /*dist*/,
                                                     const IntervalProtocolConfig& cfg,
                                                     std::vector<TaggedPoint> s_p) {
  if (name == "honest") return std::make_unique<HonestProver>(std::move(s_p), cfg.k);
  for (const auto& a : kAttacks) {
    if (name == a.name) return std::make_unique<AdversarialProver>(a.attack, cfg, std::move(s_p));
  }
  throw InvalidArgument("unknown intervals prover '" + name + "'");
}

TrialResult run_trial(const DiscreteDistribution<LabeledPoint>& dist,
                      const IntervalProtocolConfig& cfg, const std::string& prover, Seed seed,
                      double baseline) {
  bool sample_needed = prover == "honest";
  for (const auto& a : kAttacks) {
    if (prover == a.name) sample_needed = needs_sample(a.attack);
  }
  Rng vrng = make_rng(split_seed(seed, stream::kVerifierSample));
  Verifier verifier(cfg, draw_tagged(dist, cfg.m_v, vrng));
  std::vector<TaggedPoint> s_p;
  if (sample_needed) {
    Rng prng = make_rng(split_seed(seed, stream::kProverSample));
    s_p = draw_tagged(dist, cfg.m_p, prng);
  }
  auto p = make_prover(prover, dist, cfg, std::move(s_p));
  TrialResult out;
  out.transcript = harness::run_interaction(verifier, *p, {cfg.epsilon, cfg.delta}, seed);
  const auto kind = prover == "honest" ? harness::RunKind::kHonest : harness::RunKind::kAdversarial;
  const auto loss_fn = hypothesis_loss(dist);
  out.loss = out.transcript.outcome->accepted() ? loss_fn(*out.transcript.outcome->hypothesis)
                                                : std::numeric_limits<double>::quiet_NaN();
  out.classification =
      harness::classify_outcome(out.transcript, kind, loss_fn, baseline, cfg.epsilon);
  return out;
}

DiscreteDistribution<LabeledPoint> realizable_grid(std::size_t n,
                                                   const std::vector<std::pair<double, double>>& ones) {
  if (n < 1) throw InvalidArgument("grid needs at least one point");
  std::vector<LabeledPoint> support;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    int y = 0;
    for (const auto& [a, b] : ones) {
      if (x >= a && x <= b) y = 1;
    }
    support.push_back({x, y});
  }
  return DiscreteDistribution<LabeledPoint>::uniform(std::move(support));
}

DiscreteDistribution<LabeledPoint> uniform_label_grid(std::size_t n) {
  if (n < 1) throw InvalidArgument("grid needs at least one point");
  std::vector<LabeledPoint> support;
  for (std::size_t i = 0; i < n; ++i) {
    const double x = (static_cast<double>(i) + 0.5) / static_cast<double>(n);
    support.push_back({x, 0});
    support.push_back({x, 1});
  }
  return DiscreteDistribution<LabeledPoint>::uniform(std::move(support));
}

}  // namespace pacverify::intervals
