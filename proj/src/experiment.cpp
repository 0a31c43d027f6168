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

#include "pacverify/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <exception>
#include <iomanip>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>
#include <vector>

#include "pacverify/error.hpp"
#include "pacverify/harness.hpp"
#include "pacverify/identity_test.hpp"
#include "pacverify/intervals.hpp"
#include "pacverify/lowerbound.hpp"
#include "pacverify/sq.hpp"
#include "pacverify/stats.hpp"

namespace pacverify::experiment {

using nlohmann::json;

const char* to_string(Protocol p) {
  switch (p) {
    case Protocol::kIntervals:
      return "intervals";
    case Protocol::kSq:
      return "sq";
    case Protocol::kLowerbound:
      return "lowerbound";
    case Protocol::kIdentityCalibrate:
      return "identity-calibrate";
  }
  return "unknown";
}

namespace {

Protocol protocol_from_string(const std::string& s) {
  for (auto p : {Protocol::kIntervals, Protocol::kSq, Protocol::kLowerbound,
                 Protocol::kIdentityCalibrate}) {
    if (s == to_string(p)) return p;
  }
  throw SpecError("protocol", "unknown protocol '" + s + "'");
}

// Specs built in code carry signed integers; parsed text carries unsigned.
bool is_count(const json& j) {
  return j.is_number_unsigned() || (j.is_number_integer() && j.get<std::int64_t>() >= 0);
}

double number_param(const json& params, const char* key, double fallback) {
  if (!params.contains(key)) return fallback;
  if (!params.at(key).is_number()) throw SpecError(std::string("params.") + key, "must be a number");
  return params.at(key).get<double>();
}

std::size_t count_param(const json& params, const char* key, std::size_t fallback) {
  if (!params.contains(key)) return fallback;
  if (!is_count(params.at(key))) {
    throw SpecError(std::string("params.") + key, "must be a nonnegative integer");
  }
  return params.at(key).get<std::size_t>();
}

std::vector<std::size_t> count_list(const json& params, const char* key,
                                    std::vector<std::size_t> fallback) {
  if (!params.contains(key)) return fallback;
  const auto& v = params.at(key);
  if (!v.is_array() || v.empty()) throw SpecError(std::string("params.") + key, "must be a nonempty list");
  std::vector<std::size_t> out;
  for (const auto& e : v) {
    if (!is_count(e)) {
      throw SpecError(std::string("params.") + key, "entries must be nonnegative integers");
    }
    out.push_back(e.get<std::size_t>());
  }
  return out;
}

void check_open_unit(double v, const char* field) {
  if (!(v > 0.0 && v < 1.0)) throw SpecError(std::string("params.") + field, "must lie in (0,1)");
}

std::string fmt(double v) {
  if (std::isnan(v)) return "";
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

template <class F>
void parallel_for(std::size_t n, std::size_t workers, F&& f) {
  workers = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(n, 1));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex mu;
  std::vector<std::thread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const std::size_t i = next.fetch_add(1);
        if (i >= n) return;
        try {
          f(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(mu);
          if (!failure) failure = std::current_exception();
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

// ---------------------------------------------------------------------------
// Shared pieces of the protocol runs.

struct TrialRecord {
  std::string prover;
  std::size_t trial = 0;
  Seed seed = 0;
  harness::Classification classification = harness::Classification::kSoundnessSafe;
  double loss = 0.0;
  std::string reason;
  json detail;
  std::string jsonl;
};

Seed trial_seed(Seed root, const std::string& prover, std::size_t trial,
                const std::vector<std::string>& provers) {
  const auto p = static_cast<std::uint64_t>(
      std::find(provers.begin(), provers.end(), prover) - provers.begin());
  return split_seed(split_seed(root, stream::kTrial + p), trial);
}

std::string make_log(const ExperimentSpec& spec, const std::string& prover, std::size_t trial,
                     Seed seed, double baseline, double epsilon,
                     const harness::Transcript& transcript, harness::Classification cls,
                     double loss) {
  harness::TranscriptLog log;
  log.header = {{"protocol", to_string(spec.protocol)},
                {"spec", spec.to_json()},
                {"prover", prover},
                {"trial", trial},
                {"seed", seed},
                {"baseline", baseline},
                {"epsilon", epsilon},
                {"run_kind", prover == "honest" ? "honest" : "adversarial"}};
  log.transcript = transcript;
  log.outcome_extra = {{"classification", harness::to_string(cls)}, {"loss", number_or_null(loss)}};
  return harness::to_jsonl(log);
}

json aggregate(const std::vector<TrialRecord>& records, const std::vector<std::string>& provers,
               std::string& csv) {
  json out = json::object();
  csv += "prover,trials,metric,count,rate,ci_lower,ci_upper\n";
  for (const auto& prover : provers) {
    std::map<std::string, std::size_t> counts;
    std::size_t n = 0;
    for (const auto& r : records) {
      if (r.prover != prover) continue;
      ++n;
      ++counts[harness::to_string(r.classification)];
    }
    const bool honest = prover == "honest";
    const char* metric = honest ? "completeness-success" : "soundness-violation";
    const auto ci = wilson_interval(counts[metric], n);
    json entry = to_json(ci);
    entry["metric"] = metric;
    entry["classifications"] = counts;
    out[prover] = entry;
    csv += prover + "," + std::to_string(n) + "," + metric + "," + std::to_string(counts[metric]) +
           "," + fmt(ci.rate) + "," + fmt(ci.lower) + "," + fmt(ci.upper) + "\n";
  }
  return out;
}

json outcome_rows(const std::vector<TrialRecord>& records) {
  json rows = json::array();
  for (const auto& r : records) {
    rows.push_back({{"prover", r.prover},
                    {"trial", r.trial},
                    {"seed", r.seed},
                    {"classification", harness::to_string(r.classification)},
                    {"loss", number_or_null(r.loss)},
                    {"reason", r.reason},
                    {"detail", r.detail}});
  }
  return rows;
}

json embedded_transcripts(const std::vector<TrialRecord>& records) {
  json out = json::array();
  for (const auto& r : records) {
    if (!r.jsonl.empty()) out.push_back({{"prover", r.prover}, {"trial", r.trial}, {"log", r.jsonl}});
  }
  return out;
}

std::vector<std::string> expand_provers(const std::string& adversary,
                                        const std::vector<std::string>& known,
                                        const std::vector<std::string>& soundness) {
  if (adversary == "all") {
    std::vector<std::string> out{"honest"};
    out.insert(out.end(), soundness.begin(), soundness.end());
    return out;
  }
  if (std::find(known.begin(), known.end(), adversary) == known.end()) {
    throw SpecError("adversary", "unknown prover '" + adversary + "'");
  }
  return {adversary};
}

// ---------------------------------------------------------------------------
// Intervals.

struct IntervalsContext {
  DiscreteDistribution<LabeledPoint> dist;
  intervals::IntervalProtocolConfig cfg;
  double baseline = 0.0;
};

DiscreteDistribution<LabeledPoint> intervals_distribution(const json& d) {
  const std::string kind = d.value("kind", "realizable-grid");
  try {
    if (kind == "realizable-grid") {
      std::vector<std::pair<double, double>> ones{{0.2, 0.4}, {0.6, 0.85}};
      if (d.contains("ones")) ones = d.at("ones").get<std::vector<std::pair<double, double>>>();
      return intervals::realizable_grid(d.value("n", std::size_t{64}), ones);
    }
    if (kind == "uniform-labels") return intervals::uniform_label_grid(d.value("n", std::size_t{64}));
    if (kind == "explicit") return distribution_from_json<LabeledPoint>(d);
  } catch (const json::exception& e) {
    throw SpecError("distribution", e.what());
  } catch (const InvalidArgument& e) {
    throw SpecError("distribution", e.what());
  }
  throw SpecError("distribution.kind", "unknown intervals distribution '" + kind + "'");
}

IntervalsContext intervals_context(const ExperimentSpec& spec) {
  const auto& p = spec.params;
  const double eps = number_param(p, "epsilon", 0.1);
  const double delta = number_param(p, "delta", 0.2);
  check_open_unit(eps, "epsilon");
  check_open_unit(delta, "delta");
  const std::size_t d = count_param(p, "d", 2);
  if (d < 1) throw SpecError("params.d", "must be >= 1");
  IntervalsContext ctx{intervals_distribution(spec.distribution), {}, 0.0};
  try {
    ctx.cfg = intervals::IntervalProtocolConfig::make(
        d, eps, delta, number_param(p, "tester_constant", identity::kDefaultConstant),
        number_param(p, "prover_constant", intervals::kDefaultProverConstant));
  } catch (const InvalidArgument& e) {
    throw SpecError("params", e.what());
  }
  ctx.baseline = intervals::best_in_class_loss(ctx.dist, d);
  return ctx;
}

TrialRecord intervals_trial(const ExperimentSpec& spec, const IntervalsContext& ctx,
                            const std::string& prover, std::size_t trial, Seed seed, bool embed) {
  auto res = intervals::run_trial(ctx.dist, ctx.cfg, prover, seed, ctx.baseline);
  TrialRecord r;
  r.prover = prover;
  r.trial = trial;
  r.seed = seed;
  r.classification = res.classification;
  r.loss = res.loss;
  r.reason = res.transcript.outcome->reason;
  r.detail = res.transcript.outcome->detail;
  if (embed) {
    r.jsonl = make_log(spec, prover, trial, seed, ctx.baseline, ctx.cfg.epsilon, res.transcript,
                       res.classification, res.loss);
  }
  return r;
}

std::size_t embed_count(const ExperimentSpec& spec) {
  if (!spec.options.contains("embed_transcripts")) return 2;
  if (!is_count(spec.options.at("embed_transcripts"))) {
    throw SpecError("options.embed_transcripts", "must be a nonnegative integer");
  }
  return spec.options.at("embed_transcripts").get<std::size_t>();
}

ExperimentReport run_intervals(const ExperimentSpec& spec, std::size_t workers) {
  const auto ctx = intervals_context(spec);
  const auto provers = expand_provers(spec.adversary, intervals::prover_names(),
                                      intervals::soundness_adversaries());
  const std::size_t embed = embed_count(spec);
  std::vector<TrialRecord> records(provers.size() * spec.trials);
  parallel_for(records.size(), workers, [&](std::size_t i) {
    const auto& prover = provers[i / spec.trials];
    const std::size_t trial = i % spec.trials;
    records[i] = intervals_trial(spec, ctx, prover, trial,
                                 trial_seed(spec.root_seed, prover, trial, provers), trial < embed);
  });
  ExperimentReport rep;
  auto& j = rep.report;
  j["samples"] = {{"m_v", ctx.cfg.m_v},
                  {"m_p", ctx.cfg.m_p},
                  {"k", ctx.cfg.k},
                  {"m_p_rule", "implementation-chosen: ceil(C_P * k / (epsilon/6)^2), multiple of k"},
                  {"prover_constant", ctx.cfg.prover_constant},
                  {"tester_constant", ctx.cfg.tester_constant},
                  {"m_p_uniform_convergence", ctx.cfg.uniform_convergence_prover_samples()}};
  j["baseline"] = {{"kind", "best-in-class"}, {"value", ctx.baseline}, {"standard_error", 0.0}};
  j["aggregates"] = aggregate(records, provers, rep.csv);
  j["outcomes"] = outcome_rows(records);
  j["transcripts"] = embedded_transcripts(records);
  return rep;
}

// ---------------------------------------------------------------------------
// SQ.

DiscreteDistribution<sq::Item> sq_distribution(const json& d, std::size_t big_n) {
  const std::string kind = d.value("kind", "zipf");
  try {
    if (kind == "zipf") return sq::zipf(d.value("N", big_n), d.value("exponent", 1.0));
    if (kind == "uniform") {
      return DiscreteDistribution<sq::Item>::uniform(sq::portfolio_domain(d.value("N", big_n)));
    }
    if (kind == "explicit") return distribution_from_json<sq::Item>(d);
  } catch (const json::exception& e) {
    throw SpecError("distribution", e.what());
  } catch (const InvalidArgument& e) {
    throw SpecError("distribution", e.what());
  }
  throw SpecError("distribution.kind", "unknown sq distribution '" + kind + "'");
}

struct SqContext {
  sq::SqProblem problem;
  sq::SqProtocolConfig cfg;
  std::size_t big_n = 64, n = 8, block_size = 1;
  sq::Baseline baseline;
};

SqContext sq_context(const ExperimentSpec& spec, bool with_baseline) {
  const auto& p = spec.params;
  SqContext ctx;
  if (p.contains("algorithm") && p.at("algorithm") != "portfolio") {
    throw SpecError("params.algorithm", "only the portfolio algorithm is built in");
  }
  ctx.big_n = count_param(p, "N", 64);
  ctx.n = count_param(p, "n", 8);
  ctx.block_size = count_param(p, "block_size", 1);
  if (ctx.n < 1 || 2 * ctx.n > ctx.big_n) throw SpecError("params.n", "need 1 <= n and 2n <= N");
  if (ctx.block_size < 1) throw SpecError("params.block_size", "must be >= 1");
  const double tau = number_param(p, "tau", 0.05);
  const double eps = number_param(p, "epsilon", 0.1);
  const double delta = number_param(p, "delta", 0.2);
  check_open_unit(tau, "tau");
  check_open_unit(eps, "epsilon");
  check_open_unit(delta, "delta");
  sq::PortfolioAlgorithm alg(ctx.big_n, ctx.n, ctx.block_size);
  const std::size_t s = count_param(p, "s", alg.blocks().size());
  const std::size_t b = count_param(p, "b", 1);
  if (s < 1) throw SpecError("params.s", "must be >= 1");
  if (b < 1) throw SpecError("params.b", "must be >= 1");
  ctx.problem = {sq::portfolio_domain(ctx.big_n), sq_distribution(spec.distribution, ctx.big_n),
                 sq::portfolio_loss()};
  try {
    ctx.cfg = sq::SqProtocolConfig::make(
        tau, b, s, eps, delta, number_param(p, "tester_constant", identity::kDefaultConstant),
        number_param(p, "prover_constant", sq::kDefaultProverConstant));
  } catch (const InvalidArgument& e) {
    throw SpecError("params", e.what());
  }
  if (p.contains("fresh_samples")) {
    if (!p.at("fresh_samples").is_boolean()) throw SpecError("params.fresh_samples", "must be a boolean");
    ctx.cfg.fresh_samples = p.at("fresh_samples").get<bool>();
  }
  if (with_baseline) {
    sq::ExactOracle oracle(ctx.problem.dist);
    ctx.baseline = sq::algorithm_baseline(alg, oracle, ctx.problem.loss, ctx.problem.dist,
                                          count_param(p, "baseline_runs", 10000),
                                          split_seed(spec.root_seed, stream::kAlgorithm));
  }
  return ctx;
}

TrialRecord sq_trial(const ExperimentSpec& spec, const SqContext& ctx, const std::string& prover,
                     std::size_t trial, Seed seed, bool embed) {
  sq::PortfolioAlgorithm alg(ctx.big_n, ctx.n, ctx.block_size);
  auto res = sq::run_trial(ctx.problem, ctx.cfg, alg, prover, seed, ctx.baseline.mean);
  TrialRecord r;
  r.prover = prover;
  r.trial = trial;
  r.seed = seed;
  r.classification = res.classification;
  r.loss = res.loss;
  r.reason = res.transcript.outcome->reason;
  r.detail = res.transcript.outcome->detail;
  if (embed) {
    r.jsonl = make_log(spec, prover, trial, seed, ctx.baseline.mean, ctx.cfg.epsilon,
                       res.transcript, res.classification, res.loss);
  }
  return r;
}

json baseline_json(const sq::Baseline& b, const char* oracle) {
  return {{"oracle", oracle},
          {"value", b.mean},
          {"standard_error", b.standard_error},
          {"runs", b.runs}};
}

ExperimentReport run_sq_gap(const ExperimentSpec& spec, std::size_t workers) {
  const auto& p = spec.params;
  const double tau = number_param(p, "tau", 0.05);
  const double eps = number_param(p, "epsilon", 0.1);
  const double delta = number_param(p, "delta", 0.2);
  check_open_unit(tau, "tau");
  check_open_unit(eps, "epsilon");
  check_open_unit(delta, "delta");
  const auto ds = count_list(p, "d_values", {4, 16, 64, 256});
  const std::size_t replicates = count_param(p, "replicates", 2000);
  for (auto d : ds) {
    if (d < 2) throw SpecError("params.d_values", "entries must be >= 2");
  }
  struct Row {
    std::size_t d = 0, m_v = 0, tester = 0;
    double sim = 0.0, formula = 0.0;
    bool accepted = true;
  };
  std::vector<Row> rows(ds.size());
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    const std::size_t d = ds[i];
    sq::SqProblem problem{sq::portfolio_domain(d),
                          DiscreteDistribution<sq::Item>::uniform(sq::portfolio_domain(d)),
                          sq::portfolio_loss()};
    const auto cfg = sq::SqProtocolConfig::make(tau, 1, d, eps, delta);
    Row r;
    r.d = d;
    r.m_v = cfg.m_v;
    for (std::size_t t = 0; t < spec.trials; ++t) {
      sq::PortfolioAlgorithm alg(d, 1);
      auto res = sq::run_trial(problem, cfg, alg, "honest",
                               split_seed(split_seed(spec.root_seed, d), t), 1.0);
      r.tester = std::max(r.tester, res.tester_samples_per_batch);
      r.accepted = r.accepted && res.transcript.outcome->accepted();
    }
    r.sim = sq::simulation_cost(d, tau, delta, replicates,
                                split_seed(split_seed(spec.root_seed, d), stream::kTestSample));
    r.formula = (static_cast<double>(d) + std::log(1.0 / delta)) / (tau * tau);
    rows[i] = r;
  });
  std::vector<double> xs, verifier, sim, formula;
  ExperimentReport rep;
  rep.csv = "d,verifier_samples_per_batch,simulation_cost_empirical,simulation_cost_formula\n";
  json table = json::array();
  for (const auto& r : rows) {
    xs.push_back(static_cast<double>(r.d));
    verifier.push_back(static_cast<double>(r.tester));
    sim.push_back(r.sim);
    formula.push_back(r.formula);
    rep.csv += std::to_string(r.d) + "," + std::to_string(r.tester) + "," + fmt(r.sim) + "," +
               fmt(r.formula) + "\n";
    table.push_back({{"d", r.d},
                     {"verifier_samples_per_batch", r.tester},
                     {"m_v", r.m_v},
                     {"honest_runs_accepted", r.accepted},
                     {"simulation_cost_empirical", r.sim},
                     {"simulation_cost_formula", r.formula}});
  }
  const auto fit_v = loglog_fit(xs, verifier);
  const auto fit_s = loglog_fit(xs, sim);
  const auto fit_f = loglog_fit(xs, formula);
  rep.csv += "slope," + fmt(fit_v.slope) + "," + fmt(fit_s.slope) + "," + fmt(fit_f.slope) + "\n";
  rep.report["gap"] = {{"rows", table},
                       {"slope_verifier", fit_v.slope},
                       {"slope_simulation", fit_s.slope},
                       {"slope_simulation_formula", fit_f.slope},
                       {"replicates", replicates},
                       {"tau", tau},
                       {"delta", delta}};
  return rep;
}

ExperimentReport run_sq(const ExperimentSpec& spec, std::size_t workers) {
  if (spec.options.value("sweep", std::string()) == "gap") return run_sq_gap(spec, workers);
  const auto ctx = sq_context(spec, true);
  const auto provers =
      expand_provers(spec.adversary, sq::prover_names(), sq::malicious_provers());
  const std::size_t embed = embed_count(spec);
  std::vector<TrialRecord> records(provers.size() * spec.trials);
  parallel_for(records.size(), workers, [&](std::size_t i) {
    const auto& prover = provers[i / spec.trials];
    const std::size_t trial = i % spec.trials;
    records[i] = sq_trial(spec, ctx, prover, trial,
                          trial_seed(spec.root_seed, prover, trial, provers), trial < embed);
  });

  sq::PortfolioAlgorithm alg(ctx.big_n, ctx.n, ctx.block_size);
  const std::size_t runs = count_param(spec.params, "baseline_runs", 10000);
  sq::RandomOracle random_oracle(ctx.problem.dist, ctx.cfg.tau,
                                 split_seed(spec.root_seed, stream::kAlgorithm + 1));
  sq::GreedyOracle greedy_oracle(ctx.problem.dist, ctx.cfg.tau,
                                 sq::portfolio_greedy_direction(ctx.problem.dist, ctx.n));
  const auto random_b = sq::algorithm_baseline(alg, random_oracle, ctx.problem.loss,
                                               ctx.problem.dist, runs,
                                               split_seed(spec.root_seed, stream::kAlgorithm));
  const auto greedy_b = sq::algorithm_baseline(alg, greedy_oracle, ctx.problem.loss,
                                               ctx.problem.dist, runs,
                                               split_seed(spec.root_seed, stream::kAlgorithm));

  ExperimentReport rep;
  auto& j = rep.report;
  const auto singletons = sq::SqProtocolConfig::make(ctx.cfg.tau, ctx.cfg.b, ctx.big_n,
                                                     ctx.cfg.epsilon, ctx.cfg.delta);
  j["samples"] = {{"m_v", ctx.cfg.m_v},
                  {"m_holdout", ctx.cfg.m_holdout},
                  {"m_p", ctx.cfg.m_p},
                  {"iterations", ctx.cfg.iterations},
                  {"partition_size_bound", ctx.cfg.s},
                  {"tester_delta", ctx.cfg.tester_delta()},
                  {"m_p_rule", "implementation-chosen: ceil(C_P * s * ln(s B T / delta) / tau^2)"},
                  {"prover_constant", ctx.cfg.prover_constant},
                  {"tester_constant", ctx.cfg.tester_constant},
                  {"m_p_uniform_convergence", ctx.cfg.uniform_convergence_prover_samples()},
                  {"fresh_samples", ctx.cfg.fresh_samples}};
  j["structures"] = {{"declared_partition_size", ctx.cfg.s},
                     {"declared_m_v", ctx.cfg.m_v},
                     {"singleton_partition_size", ctx.big_n},
                     {"singleton_m_v", singletons.m_v}};
  j["baseline"] = baseline_json(ctx.baseline, "exact");
  j["baselines"] = json::array({baseline_json(ctx.baseline, "exact"),
                                baseline_json(random_b, "random"),
                                baseline_json(greedy_b, "greedy")});
  const auto amp = sq::amplification_check(ctx.cfg.epsilon, ctx.cfg.delta);
  j["amplification"] = {{"iterations", amp.iterations},
                        {"bound", amp.bound},
                        {"target", amp.target},
                        {"holds", amp.holds}};
  j["aggregates"] = aggregate(records, provers, rep.csv);
  j["outcomes"] = outcome_rows(records);
  j["transcripts"] = embedded_transcripts(records);
  return rep;
}

// ---------------------------------------------------------------------------
// Lower bound and calibration.

ExperimentReport run_lowerbound(const ExperimentSpec& spec, std::size_t workers) {
  const auto& p = spec.params;
  const auto ds = count_list(p, "d_values", {64, 256, 1024, 4096});
  for (auto d : ds) {
    if (d < 2) throw SpecError("params.d_values", "entries must be >= 2");
  }
  std::vector<lowerbound::Crossing> crossings(ds.size());
  parallel_for(ds.size(), workers, [&](std::size_t i) {
    crossings[i] = lowerbound::crossing_point(ds[i], spec.trials, split_seed(spec.root_seed, ds[i]));
  });
  ExperimentReport rep;
  rep.csv = "d,t,trials,success_rate,collision_rate,tv_estimate\n";
  json rows = json::array();
  std::vector<double> xs, t_emp, t_exact;
  for (const auto& c : crossings) {
    for (const auto& pt : c.curve) {
      rep.csv += std::to_string(pt.d) + "," + std::to_string(pt.t) + "," +
                 std::to_string(pt.trials) + "," + fmt(pt.success_rate) + "," +
                 fmt(pt.collision_rate) + "," + fmt(pt.tv_estimate) + "\n";
    }
    xs.push_back(static_cast<double>(c.d));
    t_emp.push_back(c.t_empirical);
    t_exact.push_back(c.t_exact);
    rows.push_back({{"d", c.d}, {"t_empirical", c.t_empirical}, {"t_exact", c.t_exact}});
  }
  rep.report["crossings"] = rows;
  rep.report["target_success"] = lowerbound::kTargetSuccess;
  rep.report["slope_empirical"] = loglog_fit(xs, t_emp).slope;
  rep.report["slope_exact"] = loglog_fit(xs, t_exact).slope;

  const std::size_t check_trials = count_param(p, "check_trials", 10000);
  json checks = json::array();
  for (auto [d, t] : std::vector<std::pair<std::size_t, std::size_t>>{{64, 4}, {256, 8}, {1024, 16}}) {
    const auto pt = lowerbound::measure(d, t, check_trials / 2 + check_trials % 2,
                                        split_seed(spec.root_seed, 100000 + d));
    const double empirical = 1.0 - pt.collision_rate;
    const double sigma = binomial_sigma(pt.no_collision_exact, 2 * pt.trials);
    checks.push_back({{"d", d},
                      {"t", t},
                      {"trials", 2 * pt.trials},
                      {"collision_free_empirical", empirical},
                      {"collision_free_exact", pt.no_collision_exact},
                      {"sigma", sigma},
                      {"within_3_sigma", std::abs(empirical - pt.no_collision_exact) <= 3.0 * sigma}});
  }
  rep.report["no_collision_checks"] = checks;

  const std::size_t rd = count_param(p, "reduction_d", 8);
  const std::size_t rtrials = count_param(p, "reduction_trials", 10);
  if (rtrials > 0) {
    const auto inst = lowerbound::ShatteredInstance::make(rd);
    json red = {{"d", rd}, {"trials_per_mode", rtrials}, {"c", lowerbound::test_sample_size()}};
    for (auto mode : {lowerbound::Mode::kUniform, lowerbound::Mode::kFunction}) {
      std::vector<int> correct(rtrials, 0);
      parallel_for(rtrials, workers, [&](std::size_t i) {
        const Seed s = split_seed(split_seed(spec.root_seed, 200000 + static_cast<int>(mode)), i);
        const auto dist = lowerbound::mode_distribution(inst, mode, split_seed(s, 99));
        correct[i] = lowerbound::reduction_tester(inst, dist, s).verdict == mode ? 1 : 0;
      });
      std::size_t total = 0;
      for (int c : correct) total += static_cast<std::size_t>(c);
      red[lowerbound::to_string(mode)] = to_json(wilson_interval(total, rtrials));
    }
    rep.report["reduction"] = red;
  }
  return rep;
}

ExperimentReport run_calibrate(const ExperimentSpec& spec) {
  const auto& p = spec.params;
  identity::CalibrationOptions opts;
  opts.n = count_param(p, "n", opts.n);
  opts.epsilon = number_param(p, "epsilon", opts.epsilon);
  opts.delta = number_param(p, "delta", opts.delta);
  opts.runs = count_param(p, "runs", spec.trials > 1 ? spec.trials : opts.runs);
  check_open_unit(opts.epsilon, "epsilon");
  check_open_unit(opts.delta, "delta");
  // The grid plants TV up to 2 epsilon by moving half the support's mass.
  if (opts.epsilon > 0.25) throw SpecError("params.epsilon", "calibration needs epsilon <= 0.25");
  if (opts.n < 2) throw SpecError("params.n", "must be >= 2");
  if (p.contains("constants")) {
    try {
      opts.constants = p.at("constants").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw SpecError("params.constants", e.what());
    }
  }
  opts.seed = spec.root_seed;
  ExperimentReport rep;
  try {
    rep.report["calibration"] = identity::calibrate(opts);
  } catch (const InvalidArgument& e) {
    throw SpecError("params", e.what());
  }
  rep.csv = "constant_c,samples,tv,shape,accept_rate,ci_lower,ci_upper\n";
  for (const auto& c : rep.report["calibration"]["candidates"]) {
    for (const auto& pt : c["points"]) {
      rep.csv += fmt(c["constant_c"].get<double>()) + "," + std::to_string(c["samples"].get<std::size_t>()) +
                 "," + fmt(pt["tv"].get<double>()) + "," + pt["shape"].get<std::string>() + "," +
                 fmt(pt["rate"].get<double>()) + "," + fmt(pt["ci_lower"].get<double>()) + "," +
                 fmt(pt["ci_upper"].get<double>()) + "\n";
    }
  }
  return rep;
}

}  // namespace

ExperimentSpec ExperimentSpec::from_json(const json& j) {
  if (!j.is_object()) throw SpecError("spec", "must be a JSON object");
  ExperimentSpec s;
  if (!j.contains("protocol") || !j.at("protocol").is_string()) {
    throw SpecError("protocol", "required string");
  }
  s.protocol = protocol_from_string(j.at("protocol").get<std::string>());
  if (j.contains("distribution")) {
    if (!j.at("distribution").is_object()) throw SpecError("distribution", "must be an object");
    s.distribution = j.at("distribution");
  }
  if (j.contains("adversary")) {
    if (!j.at("adversary").is_string()) throw SpecError("adversary", "must be a string");
    s.adversary = j.at("adversary").get<std::string>();
  }
  if (j.contains("params")) {
    if (!j.at("params").is_object()) throw SpecError("params", "must be an object");
    s.params = j.at("params");
  }
  if (j.contains("options")) {
    if (!j.at("options").is_object()) throw SpecError("options", "must be an object");
    s.options = j.at("options");
  }
  if (j.contains("trials")) {
    if (!is_count(j.at("trials")) || j.at("trials").get<std::size_t>() < 1) {
      throw SpecError("trials", "must be an integer >= 1");
    }
    s.trials = j.at("trials").get<std::size_t>();
  }
  if (j.contains("root_seed")) {
    if (!is_count(j.at("root_seed"))) throw SpecError("root_seed", "must be a u64");
    s.root_seed = j.at("root_seed").get<Seed>();
  }
  return s;
}

json ExperimentSpec::to_json() const {
  return {{"protocol", experiment::to_string(protocol)},
          {"distribution", distribution},
          {"adversary", adversary},
          {"params", params},
          {"trials", trials},
          {"root_seed", root_seed},
          {"options", options}};
}

ExperimentReport run_experiment(const ExperimentSpec& spec, std::size_t workers) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  switch (spec.protocol) {
    case Protocol::kIntervals:
      rep = run_intervals(spec, workers);
      break;
    case Protocol::kSq:
      rep = run_sq(spec, workers);
      break;
    case Protocol::kLowerbound:
      rep = run_lowerbound(spec, workers);
      break;
    case Protocol::kIdentityCalibrate:
      rep = run_calibrate(spec);
      break;
  }
  rep.report["spec"] = spec.to_json();
  rep.report["root_seed"] = spec.root_seed;
  rep.report["trials"] = spec.trials;
  rep.report["ci_method"] = kCiMethod;
  rep.report["wall_clock_seconds"] =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

std::string deterministic_dump(const json& report) {
  json copy = report;
  copy.erase("wall_clock_seconds");
  return copy.dump();
}

std::size_t workers_from_env() {
  if (const char* env = std::getenv("PACVERIFY_WORKERS")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

json replay(std::string_view jsonl, bool resimulate) {
  const auto log = harness::parse_jsonl(jsonl);
  const auto& h = log.header;
  if (!h.contains("spec") || !h.contains("prover") || !h.contains("seed") ||
      !h.contains("baseline") || !h.contains("run_kind") || !h.contains("epsilon")) {
    throw ParseError(1, "header lacks the fields needed to replay");
  }
  if (!log.transcript.outcome) throw ParseError(1, "log has no outcome line");
  const auto spec = ExperimentSpec::from_json(h.at("spec"));
  const std::string prover = h.at("prover").get<std::string>();
  const Seed seed = h.at("seed").get<Seed>();
  const double baseline = h.at("baseline").get<double>();
  const double epsilon = h.at("epsilon").get<double>();
  const auto kind = harness::run_kind_from_string(h.at("run_kind").get<std::string>());

  harness::HypothesisLoss loss_fn;
  std::optional<IntervalsContext> ictx;
  std::optional<SqContext> sctx;
  if (spec.protocol == Protocol::kIntervals) {
    ictx = intervals_context(spec);
    loss_fn = intervals::hypothesis_loss(ictx->dist);
  } else if (spec.protocol == Protocol::kSq) {
    sctx = sq_context(spec, false);
    sctx->baseline.mean = baseline;
    const auto dist = sctx->problem.dist;
    const auto binder = sctx->problem.loss;
    loss_fn = [dist, binder](const json& hyp) { return sq::population_loss(binder, hyp, dist); };
  } else {
    throw ParseError(1, "only intervals and sq transcripts can be replayed");
  }
  const auto cls = harness::classify_outcome(log.transcript, kind, loss_fn, baseline, epsilon);
  json out;
  out["classification"] = harness::to_string(cls);
  out["recorded"] = log.outcome_extra.value("classification", "");
  out["match"] = out["classification"] == out["recorded"];
  if (resimulate) {
    const std::size_t trial = h.value("trial", std::size_t{0});
    TrialRecord r = ictx ? intervals_trial(spec, *ictx, prover, trial, seed, true)
                         : sq_trial(spec, *sctx, prover, trial, seed, true);
    std::string original(jsonl);
    if (!original.empty() && original.back() != '\n') original += '\n';
    out["resimulated_match"] = r.jsonl == original;
  }
  return out;
}

}  // namespace pacverify::experiment
