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

#ifndef PACVERIFY_SQ_HPP_
#define PACVERIFY_SQ_HPP_

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include "json.hpp"
#include "pacverify/distribution.hpp"
#include "pacverify/harness.hpp"
#include "pacverify/identity_test.hpp"
#include "pacverify/rng.hpp"

namespace pacverify::sq {

using Item = std::int64_t;

struct Query {
  std::string label;
  std::function<bool(Item)> predicate;

  bool operator()(Item i) const { return predicate(i); }

  static Query indicator(std::string label, std::vector<Item> members);
};

struct QueryBatch {
  std::size_t index = 0;
  std::vector<Query> queries;
};

// Atoms of the sigma-algebra a batch generates over a finite domain: the
// classes of elements sharing a signature (q1(x), ..., qn(x)). Atoms are
// ordered by their first element in domain order.
struct AtomPartition {
  std::vector<std::vector<Item>> atoms;
  std::unordered_map<Item, std::size_t> signature;

  std::size_t size() const { return atoms.size(); }
  // Throws InvalidArgument for elements outside the domain.
  std::size_t atom_of(Item x) const;
};

AtomPartition atoms_of(const QueryBatch& batch, std::span<const Item> domain);

// v_i = sum of p_tilde over the atoms inside query i. Throws InvalidArgument
// if some query is not a union of atoms.
std::vector<double> induced_evaluations(const QueryBatch& batch, const AtomPartition& ap,
                                        std::span<const double> p_tilde);

// Exact atom masses under `dist`; elements outside the domain are ignored.
std::vector<double> atom_masses(const AtomPartition& ap, const DiscreteDistribution<Item>& dist);

// An SQ algorithm as a resumable state machine. After reset(rho) the first
// step() receives no evaluations; each later step() receives the answers to
// the batch the previous step issued. The output is deterministic given
// rho and the answers so far.
class SqAlgorithm {
 public:
  struct Step {
    std::optional<QueryBatch> batch;
    std::optional<nlohmann::json> output;
  };

  virtual ~SqAlgorithm() = default;
  virtual void reset(Seed rho) = 0;
  virtual Step step(std::span<const double> evaluations) = 0;
};

class SqOracle {
 public:
  virtual ~SqOracle() = default;
  virtual double evaluate(const Query& q) = 0;
};

// Answers E_D[q] exactly.
class ExactOracle : public SqOracle {
 public:
  explicit ExactOracle(DiscreteDistribution<Item> dist) : dist_(std::move(dist)) {}
  double evaluate(const Query& q) override;

 private:
  DiscreteDistribution<Item> dist_;
};

// E_D[q] +/- tau with a fair random sign, clipped to [0,1].
class RandomOracle : public SqOracle {
 public:
  RandomOracle(DiscreteDistribution<Item> dist, double tau, Seed seed)
      : exact_(std::move(dist)), tau_(tau), rng_(make_rng(seed)) {}
  double evaluate(const Query& q) override;

 private:
  ExactOracle exact_;
  double tau_;
  Rng rng_;
};

// E_D[q] + tau * direction(q), clipped to [0,1]; direction returns +1 or -1
// as whichever hurts the algorithm more.
class GreedyOracle : public SqOracle {
 public:
  GreedyOracle(DiscreteDistribution<Item> dist, double tau, std::function<int(const Query&)> direction)
      : exact_(std::move(dist)), tau_(tau), direction_(std::move(direction)) {}
  double evaluate(const Query& q) override;

 private:
  ExactOracle exact_;
  double tau_;
  std::function<int(const Query&)> direction_;
};

// Empirical frequencies over a fixed sample: the direct simulation of an
// oracle from random samples.
class EmpiricalOracle : public SqOracle {
 public:
  explicit EmpiricalOracle(std::vector<Item> sample) : sample_(std::move(sample)) {}
  double evaluate(const Query& q) override;

 private:
  std::vector<Item> sample_;
};

// Runs `alg` against `oracle` to completion. Throws InvalidArgument after
// max_batches batches.
nlohmann::json run_with_oracle(SqAlgorithm& alg, SqOracle& oracle, Seed rho,
                               std::size_t max_batches = 1 << 20);

// Per-element loss of a bound hypothesis.
using ItemLoss = std::function<double(Item)>;
using LossBinder = std::function<ItemLoss(const nlohmann::json& h)>;

double population_loss(const LossBinder& loss, const nlohmann::json& h,
                       const DiscreteDistribution<Item>& dist);
double empirical_loss(const LossBinder& loss, const nlohmann::json& h, std::span<const Item> s);

struct Baseline {
  double mean = 0.0;
  double standard_error = 0.0;
  std::size_t runs = 0;
};

// Monte-Carlo estimate of E[L_D(A^O)] over `runs` executions with fresh
// algorithm randomness.
Baseline algorithm_baseline(SqAlgorithm& alg, SqOracle& oracle, const LossBinder& loss,
                            const DiscreteDistribution<Item>& dist, std::size_t runs, Seed seed);

// ceil(8 ln(4/delta) / epsilon).
std::size_t iterations_for(double epsilon, double delta);

// (1 - p)^T: the chance that none of T independent iterations succeeds.
double amplification_bound(double p, std::size_t iterations);

struct AmplificationCheck {
  std::size_t iterations = 0;
  double bound = 0.0;
  double target = 0.0;
  bool holds = false;
};

// Evaluates (1 - epsilon/8)^T at T = iterations_for(epsilon, delta) against
// delta/4.
AmplificationCheck amplification_check(double epsilon, double delta);

inline constexpr double kDefaultProverConstant = 0.25;

struct SqProtocolConfig {
  double tau = 0.05;
  // Batch bound B and partition-size bound s.
  std::size_t b = 1;
  std::size_t s = 2;
  double epsilon = 0.1;
  double delta = 0.1;
  std::size_t iterations = 1;
  std::size_t m_v = 0;
  std::size_t m_holdout = 0;
  std::size_t m_p = 0;
  double tester_constant = identity::kDefaultConstant;
  double prover_constant = kDefaultProverConstant;
  // Draw a fresh S_V per iteration instead of reusing one.
  bool fresh_samples = false;

  // iterations = ceil(8 ln(4/delta)/epsilon); m_v is the tester requirement
  // at (s, tau, epsilon delta / 4B); m_holdout = ceil(2 ln(16 T/delta) /
  // epsilon^2); m_p = ceil(C_P s ln(s B T/delta) / tau^2).
  static SqProtocolConfig make(double tau, std::size_t b, std::size_t s, double epsilon,
                               double delta, double tester_constant = identity::kDefaultConstant,
                               double prover_constant = kDefaultProverConstant);

  void validate() const;
  double tester_delta() const;
  // Tester for one batch with `atoms` atoms.
  identity::IdentityTestConfig tester_config(std::size_t atoms) const;
  // s^3 ln(s B T / (delta tau)) / tau^2, the uniform-convergence prover
  // budget. Reported only.
  double uniform_convergence_prover_samples() const;
};

// Everything the verifier sees for one accepted batch. Used to audit that
// the prover-mediated answers form a valid SQ oracle.
struct BatchRecord {
  std::size_t iteration = 0;
  const QueryBatch* batch = nullptr;
  const AtomPartition* atoms = nullptr;
  std::vector<double> p_tilde;
  std::vector<double> evaluations;
  identity::TestVerdict verdict;
};

using BatchObserver = std::function<void(const BatchRecord&)>;

class Verifier : public harness::VerifierStrategy {
 public:
  // `fresh` supplies S_V for iteration i when cfg.fresh_samples is set.
  Verifier(SqProtocolConfig cfg, std::vector<Item> domain, SqAlgorithm& alg, LossBinder loss,
           std::vector<Item> s_v, std::vector<Item> holdout,
           std::function<std::vector<Item>(std::size_t)> fresh = {});

  std::size_t max_exchanges() const override { return cfg_.iterations * cfg_.b; }
  harness::VerifierOutcome run(harness::ProverChannel& channel,
                               const harness::VerificationParams& params, Rng& coins) override;

  void set_observer(BatchObserver observer) { observer_ = std::move(observer); }

  struct IterationResult {
    std::optional<nlohmann::json> hypothesis;
    std::string reject_reason;
    std::size_t batches = 0;
    std::size_t tester_samples = 0;
    double max_statistic = 0.0;
  };

  // One pass of the algorithm with prover-mediated answers.
  IterationResult iteration(harness::ProverChannel& channel, std::size_t index, Seed rho,
                            std::span<const Item> s_v);

 private:
  SqProtocolConfig cfg_;
  std::vector<Item> domain_;
  SqAlgorithm& alg_;
  LossBinder loss_;
  std::vector<Item> s_v_;
  std::vector<Item> holdout_;
  std::function<std::vector<Item>(std::size_t)> fresh_;
  BatchObserver observer_;
};

// Reads {"type":"atoms","atoms":[[...],...]} and answers with the empirical
// atom counts of its sample.
class HonestProver : public harness::ProverStrategy {
 public:
  explicit HonestProver(std::vector<Item> s_p) : s_p_(std::move(s_p)) {}
  std::optional<std::string> respond(std::string_view request, Rng& rng) override;

 private:
  std::vector<Item> s_p_;
};

// "honest", the malicious "mass-shift", "atom-swap", "stale", and the
// robustness provers "garbage", "silent".
std::vector<std::string> prover_names();
std::vector<std::string> malicious_provers();

std::unique_ptr<harness::ProverStrategy> make_prover(const std::string& name, double tau,
                                                     std::vector<Item> s_p);

struct SqProblem {
  std::vector<Item> domain;
  DiscreteDistribution<Item> dist;
  LossBinder loss;
};

struct TrialResult {
  harness::Transcript transcript;
  harness::Classification classification;
  double loss = 0.0;
  std::size_t tester_samples_per_batch = 0;
};

TrialResult run_trial(const SqProblem& problem, const SqProtocolConfig& cfg, SqAlgorithm& alg,
                      const std::string& prover, Seed seed, double baseline,
                      const BatchObserver& observer = {});

// Portfolio selection: one batch of indicator queries, one per block of the
// declared partition of {1..N}; then the n items of the heaviest blocks by
// reported mass (ties to the lower block, items within a block in order).
class PortfolioAlgorithm : public SqAlgorithm {
 public:
  // Contiguous blocks of `block_size` items; block_size 1 gives singletons.
  PortfolioAlgorithm(std::size_t big_n, std::size_t n, std::size_t block_size = 1);

  void reset(Seed rho) override;
  Step step(std::span<const double> evaluations) override;

  const std::vector<std::vector<Item>>& blocks() const { return blocks_; }
  std::size_t n() const { return n_; }

 private:
  std::size_t big_n_;
  std::size_t n_;
  std::vector<std::vector<Item>> blocks_;
  bool asked_ = false;
};

std::vector<Item> portfolio_domain(std::size_t big_n);
// Loss 1(i not in S) for hypotheses {"items": [...]}.
LossBinder portfolio_loss();
// Masses proportional to 1/i^exponent on {1..N}.
DiscreteDistribution<Item> zipf(std::size_t big_n, double exponent = 1.0);
// Pushes the true top-n items down and the rest up.
std::function<int(const Query&)> portfolio_greedy_direction(const DiscreteDistribution<Item>& dist,
                                                            std::size_t n);

// Samples needed to simulate an SQ(D, tau) oracle for every event of a
// sigma-algebra with d equal atoms, with confidence 1 - delta. Measured as
// m_ref * (q / tau)^2 where m_ref = (d + ln(1/delta)) / tau^2 and q is the
// empirical (1 - delta)-quantile of TV(empirical, D) at m_ref over
// `replicates` draws.
double simulation_cost(std::size_t d, double tau, double delta, std::size_t replicates, Seed seed);

}  // namespace pacverify::sq

#endif  // PACVERIFY_SQ_HPP_
