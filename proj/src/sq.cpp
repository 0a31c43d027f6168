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

#include "pacverify/sq.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include "pacverify/error.hpp"

namespace pacverify::sq {

Query Query::indicator(std::string label, std::vector<Item> members) {
  std::sort(members.begin(), members.end());
  auto shared = std::make_shared<const std::vector<Item>>(std::move(members));
  return Query{std::move(label),
               [shared](Item x) { return std::binary_search(shared->begin(), shared->end(), x); }};
}

std::size_t AtomPartition::atom_of(Item x) const {
  auto it = signature.find(x);
  if (it == signature.end()) throw InvalidArgument("element outside the domain");
  return it->second;
}

AtomPartition atoms_of(const QueryBatch& batch, std::span<const Item> domain) {
  AtomPartition ap;
  std::unordered_map<std::string, std::size_t> by_signature;
  std::string sig(batch.queries.size(), '0');
  for (Item x : domain) {
    if (ap.signature.count(x)) throw InvalidArgument("domain elements must be distinct");
    for (std::size_t i = 0; i < batch.queries.size(); ++i) sig[i] = batch.queries[i](x) ? '1' : '0';
    auto [it, inserted] = by_signature.emplace(sig, ap.atoms.size());
    if (inserted) ap.atoms.emplace_back();
    ap.atoms[it->second].push_back(x);
    ap.signature.emplace(x, it->second);
  }
  return ap;
}

std::vector<double> induced_evaluations(const QueryBatch& batch, const AtomPartition& ap,
                                        std::span<const double> p_tilde) {
  if (p_tilde.size() != ap.size()) throw InvalidArgument("one mass per atom required");
  std::vector<double> v;
  v.reserve(batch.queries.size());
  for (const auto& q : batch.queries) {
    double total = 0.0;
    for (std::size_t a = 0; a < ap.size(); ++a) {
      const auto& atom = ap.atoms[a];
      const bool inside = q(atom.front());
      for (Item x : atom) {
        if (q(x) != inside) throw InvalidArgument("query '" + q.label + "' is not a union of atoms");
      }
      if (inside) total += p_tilde[a];
    }
    v.push_back(total);
  }
  return v;
}

std::vector<double> atom_masses(const AtomPartition& ap, const DiscreteDistribution<Item>& dist) {
  std::vector<double> out(ap.size(), 0.0);
  for (std::size_t i = 0; i < dist.size(); ++i) {
    auto it = ap.signature.find(dist.support()[i]);
    if (it != ap.signature.end()) out[it->second] += dist.masses()[i];
  }
  return out;
}

double ExactOracle::evaluate(const Query& q) {
  double total = 0.0;
  for (std::size_t i = 0; i < dist_.size(); ++i) {
    if (q(dist_.support()[i])) total += dist_.masses()[i];
  }
  return total;
}

double RandomOracle::evaluate(const Query& q) {
  const double sign = (rng_() & 1) ? 1.0 : -1.0;
  return std::clamp(exact_.evaluate(q) + sign * tau_, 0.0, 1.0);
}

double GreedyOracle::evaluate(const Query& q) {
  return std::clamp(exact_.evaluate(q) + tau_ * direction_(q), 0.0, 1.0);
}

double EmpiricalOracle::evaluate(const Query& q) {
  if (sample_.empty()) throw InvalidArgument("empirical oracle needs a nonempty sample");
  std::size_t hits = 0;
  for (Item x : sample_) hits += q(x) ? 1 : 0;
  return static_cast<double>(hits) / static_cast<double>(sample_.size());
}

nlohmann::json run_with_oracle(SqAlgorithm& alg, SqOracle& oracle, Seed rho,
                               std::size_t max_batches) {
  alg.reset(rho);
  std::vector<double> answers;
  for (std::size_t t = 0;; ++t) {
    auto step = alg.step(answers);
    if (step.output) return *step.output;
    if (!step.batch) throw InvalidArgument("algorithm produced neither a batch nor an output");
    if (t >= max_batches) throw InvalidArgument("algorithm exceeded the batch limit");
    answers.clear();
    for (const auto& q : step.batch->queries) answers.push_back(oracle.evaluate(q));
  }
}

double population_loss(const LossBinder& loss, const nlohmann::json& h,
                       const DiscreteDistribution<Item>& dist) {
  const ItemLoss f = loss(h);
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.masses()[i] > 0.0) total += dist.masses()[i] * f(dist.support()[i]);
  }
  return total;
}

double empirical_loss(const LossBinder& loss, const nlohmann::json& h, std::span<const Item> s) {
  if (s.empty()) return 0.0;
  const ItemLoss f = loss(h);
  double total = 0.0;
  for (Item x : s) total += f(x);
  return total / static_cast<double>(s.size());
}

Baseline algorithm_baseline(SqAlgorithm& alg, SqOracle& oracle, const LossBinder& loss,
                            const DiscreteDistribution<Item>& dist, std::size_t runs, Seed seed) {
  if (runs == 0) throw InvalidArgument("baseline needs at least one run");
  double sum = 0.0, sum_sq = 0.0;
  for (std::size_t r = 0; r < runs; ++r) {
    const double l = population_loss(loss, run_with_oracle(alg, oracle, split_seed(seed, r)), dist);
    sum += l;
    sum_sq += l * l;
  }
  Baseline b;
  b.runs = runs;
  b.mean = sum / static_cast<double>(runs);
  const double var = std::max(0.0, sum_sq / static_cast<double>(runs) - b.mean * b.mean);
  b.standard_error = std::sqrt(var / static_cast<double>(runs));
  return b;
}

std::size_t iterations_for(double epsilon, double delta) {
  if (!(epsilon > 0.0 && epsilon < 1.0) || !(delta > 0.0 && delta < 1.0)) {
    throw InvalidArgument("epsilon and delta must lie in (0,1)");
  }
  return static_cast<std::size_t>(std::ceil(8.0 * std::log(4.0 / delta) / epsilon));
}

double amplification_bound(double p, std::size_t iterations) {
  if (!(p >= 0.0 && p <= 1.0)) throw InvalidArgument("success probability must lie in [0,1]");
  return std::pow(1.0 - p, static_cast<double>(iterations));
}

AmplificationCheck amplification_check(double epsilon, double delta) {
  AmplificationCheck c;
  c.iterations = iterations_for(epsilon, delta);
  c.bound = amplification_bound(epsilon / 8.0, c.iterations);
  c.target = delta / 4.0;
  c.holds = c.bound <= c.target;
  return c;
}

SqProtocolConfig SqProtocolConfig::make(double tau, std::size_t b, std::size_t s, double epsilon,
                                        double delta, double tester_constant,
                                        double prover_constant) {
  SqProtocolConfig cfg;
  cfg.tau = tau;
  cfg.b = b;
  cfg.s = s;
  cfg.epsilon = epsilon;
  cfg.delta = delta;
  cfg.tester_constant = tester_constant;
  cfg.prover_constant = prover_constant;
  cfg.iterations = iterations_for(epsilon, delta);
  if (b < 1 || s < 1) throw InvalidArgument("batch and partition-size bounds must be >= 1");
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in (0,1)");
  cfg.m_v = identity::required_samples(cfg.tester_config(std::max<std::size_t>(s, 2)));
  const double t = static_cast<double>(cfg.iterations);
  cfg.m_holdout =
      static_cast<std::size_t>(std::ceil(2.0 * std::log(16.0 * t / delta) / (epsilon * epsilon)));
  const double sd = static_cast<double>(std::max<std::size_t>(s, 2));
  cfg.m_p = static_cast<std::size_t>(std::ceil(
      prover_constant * sd * std::log(sd * static_cast<double>(b) * t / delta) / (tau * tau)));
  cfg.validate();
  return cfg;
}

void SqProtocolConfig::validate() const {
  if (!(tau > 0.0 && tau < 1.0)) throw InvalidArgument("tau must lie in (0,1)");
  if (b < 1 || s < 1) throw InvalidArgument("batch and partition-size bounds must be >= 1");
  if (iterations < 1) throw InvalidArgument("iteration count must be >= 1");
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
  if (m_v < 1 || m_holdout < 1 || m_p < 1) throw InvalidArgument("sample budgets must be >= 1");
}

double SqProtocolConfig::tester_delta() const {
  return epsilon * delta / (4.0 * static_cast<double>(b));
}

identity::IdentityTestConfig SqProtocolConfig::tester_config(std::size_t atoms) const {
  auto cfg = identity::IdentityTestConfig::make(std::max<std::size_t>(atoms, 2), tau,
                                                tester_delta(), tester_constant);
  cfg.inner_radius = tau / (2.0 * std::sqrt(static_cast<double>(atoms)));
  return cfg;
}

double SqProtocolConfig::uniform_convergence_prover_samples() const {
  const double sd = static_cast<double>(s);
  const double t = static_cast<double>(iterations);
  return sd * sd * sd * std::log(sd * static_cast<double>(b) * t / (delta * tau)) / (tau * tau);
}

Verifier::Verifier(SqProtocolConfig cfg, std::vector<Item> domain, SqAlgorithm& alg,
                   LossBinder loss, std::vector<Item> s_v, std::vector<Item> holdout,
                   std::function<std::vector<Item>(std::size_t)> fresh)
    : cfg_(std::move(cfg)),
      domain_(std::move(domain)),
      alg_(alg),
      loss_(std::move(loss)),
      s_v_(std::move(s_v)),
      holdout_(std::move(holdout)),
      fresh_(std::move(fresh)) {
  cfg_.validate();
  if (cfg_.fresh_samples && !fresh_) throw InvalidArgument("fresh-sample mode needs a sampler");
}

namespace {

std::vector<double> parse_atom_message(const std::string& reply, std::size_t atoms) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::parse_error&) {
    throw ProtocolViolation("prover message is not JSON");
  }
  if (!j.is_object() || !j.contains("counts") || !j.contains("denominator")) {
    throw ProtocolViolation("atom message needs counts and denominator");
  }
  const auto& c = j.at("counts");
  const auto& den = j.at("denominator");
  if (!c.is_array() || c.size() != atoms) throw ProtocolViolation("one count per atom required");
  if (!den.is_number_unsigned() || den.get<std::uint64_t>() == 0) {
    throw ProtocolViolation("denominator must be a positive integer");
  }
  const std::uint64_t d = den.get<std::uint64_t>();
  unsigned __int128 total = 0;
  std::vector<double> p;
  p.reserve(atoms);
  for (const auto& e : c) {
    if (!e.is_number_unsigned()) throw ProtocolViolation("counts must be nonnegative integers");
    total += e.get<std::uint64_t>();
    p.push_back(static_cast<double>(e.get<std::uint64_t>()) / static_cast<double>(d));
  }
  if (total != d) throw ProtocolViolation("counts do not sum to the denominator");
  return p;
}

}  // namespace

Verifier::IterationResult Verifier::iteration(harness::ProverChannel& channel, std::size_t index,
                                              Seed rho, std::span<const Item> s_v) {
  IterationResult r;
  alg_.reset(rho);
  std::vector<double> evaluations;
  std::size_t t = 0;
  for (;;) {
    auto step = alg_.step(evaluations);
    if (step.output) {
      r.hypothesis = std::move(step.output);
      return r;
    }
    if (!step.batch) throw InvalidArgument("algorithm produced neither a batch nor an output");
    ++t;
    r.batches = t;
    if (t > cfg_.b) {
      r.reject_reason = "batch bound exceeded";
      return r;
    }
    const QueryBatch& batch = *step.batch;
    const AtomPartition ap = atoms_of(batch, domain_);
    if (ap.size() > cfg_.s) {
      r.reject_reason = "partition size " + std::to_string(ap.size()) + " exceeds bound";
      return r;
    }
    BatchRecord rec;
    rec.iteration = index;
    rec.batch = &batch;
    rec.atoms = &ap;
    if (ap.size() == 1) {
      rec.p_tilde = {1.0};
      rec.verdict.accept = true;
    } else {
      nlohmann::json request{{"type", "atoms"}, {"iteration", index}, {"batch", t},
                             {"atoms", ap.atoms}};
      rec.p_tilde = parse_atom_message(channel.exchange(request.dump()), ap.size());
      std::vector<std::size_t> mapped;
      mapped.reserve(s_v.size());
      for (Item x : s_v) mapped.push_back(ap.atom_of(x));
      rec.verdict = identity::tolerant_identity_test(rec.p_tilde, mapped,
                                                     cfg_.tester_config(ap.size()));
      r.tester_samples = std::max(r.tester_samples, rec.verdict.samples_used);
      r.max_statistic = std::max(r.max_statistic, rec.verdict.statistic);
      if (!rec.verdict.accept) {
        r.reject_reason = "identity test failed at batch " + std::to_string(t);
        return r;
      }
    }
    evaluations = induced_evaluations(batch, ap, rec.p_tilde);
    if (observer_) {
      rec.evaluations = evaluations;
      observer_(rec);
    }
  }
}

harness::VerifierOutcome Verifier::run(harness::ProverChannel& channel,
                                       const harness::VerificationParams& /*params*/, Rng& coins) {
  std::vector<nlohmann::json> hyps;
  std::size_t batches = 0, tester_samples = 0;
  double max_statistic = 0.0;
  std::vector<Item> fresh;
  for (std::size_t i = 0; i < cfg_.iterations; ++i) {
    const Seed rho = coins();
    if (cfg_.fresh_samples) fresh = fresh_(i);
    auto r = iteration(channel, i, rho, cfg_.fresh_samples ? fresh : s_v_);
    batches += r.batches;
    tester_samples = std::max(tester_samples, r.tester_samples);
    max_statistic = std::max(max_statistic, r.max_statistic);
    if (!r.hypothesis) {
      return harness::VerifierOutcome::reject(
          r.reject_reason, {{"iteration", i}, {"tester_samples", tester_samples}});
    }
    hyps.push_back(std::move(*r.hypothesis));
  }
  std::size_t best = 0;
  double best_loss = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < hyps.size(); ++i) {
    // Identical hypotheses share a holdout loss; skip recomputing.
    if (i > 0 && hyps[i] == hyps[i - 1]) continue;
    const double l = empirical_loss(loss_, hyps[i], holdout_);
    if (l < best_loss) {
      best_loss = l;
      best = i;
    }
  }
  nlohmann::json detail{{"iterations", cfg_.iterations},
                        {"batches", batches},
                        {"tester_samples", tester_samples},
                        {"max_statistic", max_statistic},
                        {"chosen_iteration", best},
                        {"holdout_loss", best_loss}};
  return harness::VerifierOutcome::accept(hyps[best], detail);
}

namespace {

std::optional<std::vector<std::uint64_t>> honest_counts(std::string_view request,
                                                        const std::vector<Item>& s_p) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(request);
  } catch (const nlohmann::json::parse_error&) {
    return std::nullopt;
  }
  if (!j.is_object() || !j.contains("atoms") || !j.at("atoms").is_array()) return std::nullopt;
  std::unordered_map<Item, std::size_t> where;
  const auto& atoms = j.at("atoms");
  for (std::size_t a = 0; a < atoms.size(); ++a) {
    for (const auto& x : atoms[a]) where.emplace(x.get<Item>(), a);
  }
  std::vector<std::uint64_t> counts(atoms.size(), 0);
  for (Item x : s_p) {
    auto it = where.find(x);
    if (it != where.end()) ++counts[it->second];
  }
  return counts;
}

std::string counts_message(const std::vector<std::uint64_t>& counts) {
  const std::uint64_t den = std::accumulate(counts.begin(), counts.end(), std::uint64_t{0});
  return nlohmann::json{{"counts", counts}, {"denominator", den}}.dump();
}

enum class Attack { kMassShift, kAtomSwap, kStale, kGarbage, kSilent };

// Atom indices by descending count, ties to the lower index.
std::vector<std::size_t> heaviest_first(const std::vector<std::uint64_t>& counts) {
  std::vector<std::size_t> order(counts.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return counts[a] > counts[b]; });
  return order;
}

class MaliciousProver : public harness::ProverStrategy {
 public:
  MaliciousProver(Attack attack, double tau, std::vector<Item> s_p)
      : attack_(attack), tau_(tau), s_p_(std::move(s_p)) {}

  std::optional<std::string> respond(std::string_view request, Rng& rng) override {
    if (attack_ == Attack::kSilent) return std::nullopt;
    if (attack_ == Attack::kGarbage) {
      std::string s(1 + rng() % 64, '\0');
      for (auto& c : s) c = static_cast<char>(rng() & 0xFF);
      return s;
    }
    auto counts = honest_counts(request, s_p_);
    if (!counts) return std::nullopt;
    auto& c = *counts;
    if (attack_ == Attack::kStale) {
      // The uniform prior over atoms, as if no data had arrived.
      std::fill(c.begin(), c.end(), 1);
      return counts_message(c);
    }
    const auto order = heaviest_first(c);
    if (attack_ == Attack::kAtomSwap) {
      std::vector<std::uint64_t> swapped(c.size());
      for (std::size_t i = 0; i < order.size(); ++i) swapped[order[i]] = c[order[order.size() - 1 - i]];
      return counts_message(swapped);
    }
    // Mass shift: move 2 tau of mass from the heaviest atoms onto the lightest.
    const std::uint64_t den = std::accumulate(c.begin(), c.end(), std::uint64_t{0});
    auto remaining = static_cast<std::uint64_t>(std::llround(2.0 * tau_ * static_cast<double>(den)));
    const std::size_t lightest = order.back();
    std::uint64_t moved = 0;
    for (std::size_t a : order) {
      if (a == lightest || remaining == 0) continue;
      const std::uint64_t take = std::min(c[a], remaining);
      c[a] -= take;
      remaining -= take;
      moved += take;
    }
    c[lightest] += moved;
    return counts_message(c);
  }

 private:
  Attack attack_;
  double tau_;
  std::vector<Item> s_p_;
};

struct AttackName {
  const char* name;
  Attack attack;
};

constexpr AttackName kAttacks[] = {{"mass-shift", Attack::kMassShift},
                                   {"atom-swap", Attack::kAtomSwap},
                                   {"stale", Attack::kStale},
                                   {"garbage", Attack::kGarbage},
                                   {"silent", Attack::kSilent}};

}  // namespace

std::optional<std::string> HonestProver::respond(std::string_view request, Rng& /*rng*/) {
  auto counts = honest_counts(request, s_p_);
  if (!counts) return std::nullopt;
  return counts_message(*counts);
}

std::vector<std::string> prover_names() {
  std::vector<std::string> names{"honest"};
  for (const auto& a : kAttacks) names.emplace_back(a.name);
  return names;
}

std::vector<std::string> malicious_provers() { return {"mass-shift", "atom-swap", "stale"}; }

std::unique_ptr<harness::ProverStrategy> make_prover(const std::string& name, double tau,
                                                     std::vector<Item> s_p) {
  if (name == "honest") return std::make_unique<HonestProver>(std::move(s_p));
  for (const auto& a : kAttacks) {
    if (name == a.name) return std::make_unique<MaliciousProver>(a.attack, tau, std::move(s_p));
  }
  throw InvalidArgument("unknown sq prover '" + name + "'");
}

TrialResult run_trial(const SqProblem& problem, const SqProtocolConfig& cfg, SqAlgorithm& alg,
                      const std::string& prover, Seed seed, double baseline,
                      const BatchObserver& observer) {
  const Seed vseed = split_seed(seed, stream::kVerifierSample);
  Rng vrng = make_rng(vseed);
  auto s_v = sample_points(problem.dist, cfg.m_v, vrng);
  Rng hrng = make_rng(split_seed(seed, stream::kHoldoutSample));
  auto holdout = sample_points(problem.dist, cfg.m_holdout, hrng);
  std::vector<Item> s_p;
  if (prover != "garbage" && prover != "silent") {
    Rng prng = make_rng(split_seed(seed, stream::kProverSample));
    s_p = sample_points(problem.dist, cfg.m_p, prng);
  }
  const auto& dist = problem.dist;
  const std::size_t m_v = cfg.m_v;
  auto fresh = [&dist, vseed, m_v](std::size_t i) {
    Rng r = make_rng(split_seed(vseed, i + 1));
    return sample_points(dist, m_v, r);
  };
  Verifier verifier(cfg, problem.domain, alg, problem.loss, std::move(s_v), std::move(holdout),
                    fresh);
  if (observer) verifier.set_observer(observer);
  auto p = make_prover(prover, cfg.tau, std::move(s_p));

  TrialResult out;
  out.transcript = harness::run_interaction(verifier, *p, {cfg.epsilon, cfg.delta}, seed);
  const auto& outcome = *out.transcript.outcome;
  const auto kind = prover == "honest" ? harness::RunKind::kHonest : harness::RunKind::kAdversarial;
  const LossBinder loss = problem.loss;
  harness::HypothesisLoss loss_fn = [&](const nlohmann::json& h) {
    return population_loss(loss, h, dist);
  };
  out.loss = outcome.accepted() ? loss_fn(*outcome.hypothesis)
                                : std::numeric_limits<double>::quiet_NaN();
  out.classification = harness::classify_outcome(outcome, kind, loss_fn, baseline, cfg.epsilon);
  if (outcome.detail.contains("tester_samples")) {
    out.tester_samples_per_batch = outcome.detail.at("tester_samples").get<std::size_t>();
  }
  return out;
}

PortfolioAlgorithm::PortfolioAlgorithm(std::size_t big_n, std::size_t n, std::size_t block_size)
    : big_n_(big_n), n_(n) {
  if (n < 1 || 2 * n > big_n) throw InvalidArgument("portfolio needs 1 <= n and 2n <= N");
  if (block_size < 1) throw InvalidArgument("block size must be >= 1");
  for (std::size_t start = 1; start <= big_n; start += block_size) {
    std::vector<Item> block;
    for (std::size_t i = start; i < start + block_size && i <= big_n; ++i) {
      block.push_back(static_cast<Item>(i));
    }
    blocks_.push_back(std::move(block));
  }
}

void PortfolioAlgorithm::reset(Seed /*rho*/) { asked_ = false; }

SqAlgorithm::Step PortfolioAlgorithm::step(std::span<const double> evaluations) {
  Step s;
  if (!asked_) {
    asked_ = true;
    QueryBatch batch;
    batch.index = 1;
    for (std::size_t j = 0; j < blocks_.size(); ++j) {
      batch.queries.push_back(Query::indicator("block-" + std::to_string(j), blocks_[j]));
    }
    s.batch = std::move(batch);
    return s;
  }
  if (evaluations.size() != blocks_.size()) throw InvalidArgument("one answer per block required");
  std::vector<std::size_t> order(blocks_.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return evaluations[a] > evaluations[b]; });
  std::vector<Item> chosen;
  for (std::size_t j : order) {
    for (Item x : blocks_[j]) {
      if (chosen.size() == n_) break;
      chosen.push_back(x);
    }
    if (chosen.size() == n_) break;
  }
  std::sort(chosen.begin(), chosen.end());
  s.output = nlohmann::json{{"items", chosen}};
  return s;
}

std::vector<Item> portfolio_domain(std::size_t big_n) {
  std::vector<Item> d(big_n);
  std::iota(d.begin(), d.end(), Item{1});
  return d;
}

LossBinder portfolio_loss() {
  return [](const nlohmann::json& h) -> ItemLoss {
    if (!h.is_object() || !h.contains("items") || !h.at("items").is_array()) {
      throw InvalidArgument("portfolio hypothesis must be {\"items\": [...]}");
    }
    auto items = std::make_shared<std::vector<Item>>(h.at("items").get<std::vector<Item>>());
    std::sort(items->begin(), items->end());
    return [items](Item x) {
      return std::binary_search(items->begin(), items->end(), x) ? 0.0 : 1.0;
    };
  };
}

DiscreteDistribution<Item> zipf(std::size_t big_n, double exponent) {
  if (big_n < 1) throw InvalidArgument("zipf needs N >= 1");
  std::vector<double> w;
  for (std::size_t i = 1; i <= big_n; ++i) w.push_back(std::pow(static_cast<double>(i), -exponent));
  return DiscreteDistribution<Item>::from_weights(portfolio_domain(big_n), std::move(w));
}

std::function<int(const Query&)> portfolio_greedy_direction(const DiscreteDistribution<Item>& dist,
                                                            std::size_t n) {
  std::vector<std::size_t> order(dist.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return dist.masses()[a] > dist.masses()[b];
  });
  auto top = std::make_shared<std::vector<Item>>();
  for (std::size_t i = 0; i < std::min(n, order.size()); ++i) top->push_back(dist.support()[order[i]]);
  return [top](const Query& q) {
    for (Item x : *top) {
      if (q(x)) return -1;
    }
    return 1;
  };
}

double simulation_cost(std::size_t d, double tau, double delta, std::size_t replicates, Seed seed) {
  if (d < 1 || replicates < 1) throw InvalidArgument("simulation cost needs d, replicates >= 1");
  const double m_ref_real = (static_cast<double>(d) + std::log(1.0 / delta)) / (tau * tau);
  const auto m_ref = static_cast<long long>(std::ceil(m_ref_real));
  Rng rng = make_rng(seed);
  std::vector<double> tvs;
  tvs.reserve(replicates);
  const double p = 1.0 / static_cast<double>(d);
  for (std::size_t r = 0; r < replicates; ++r) {
    long long remaining = m_ref;
    double tv = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
      long long c = remaining;
      if (i + 1 < d) {
        const double cond = 1.0 / static_cast<double>(d - i);
        c = std::binomial_distribution<long long>(remaining, cond)(rng);
      }
      remaining -= c;
      tv += std::abs(static_cast<double>(c) / static_cast<double>(m_ref) - p);
    }
    tvs.push_back(0.5 * tv);
  }
  std::sort(tvs.begin(), tvs.end());
  const auto idx = static_cast<std::size_t>(
      std::ceil((1.0 - delta) * static_cast<double>(replicates))) - 1;
  const double q = tvs[std::min(idx, replicates - 1)];
  return static_cast<double>(m_ref) * (q / tau) * (q / tau);
}

}  // namespace pacverify::sq
