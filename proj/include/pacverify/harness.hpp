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

#ifndef PACVERIFY_HARNESS_HPP_
#define PACVERIFY_HARNESS_HPP_

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "pacverify/rng.hpp"

namespace pacverify::harness {

enum class Sender { kVerifier, kProver };

const char* to_string(Sender s);

struct Message {
  Sender sender = Sender::kVerifier;
  std::size_t round = 0;
  std::string payload;

  friend bool operator==(const Message&, const Message&) = default;
};

enum class OutcomeKind { kReject, kHypothesis };

struct VerifierOutcome {
  OutcomeKind kind = OutcomeKind::kReject;
  // Present iff kind == kHypothesis.
  std::optional<nlohmann::json> hypothesis;
  // Why the verifier rejected; empty on acceptance.
  std::string reason;
  // Protocol-specific diagnostics (tester statistics and the like).
  nlohmann::json detail = nlohmann::json::object();

  static VerifierOutcome reject(std::string reason, nlohmann::json detail = nlohmann::json::object());
  static VerifierOutcome accept(nlohmann::json hypothesis,
                                nlohmann::json detail = nlohmann::json::object());

  bool accepted() const { return kind == OutcomeKind::kHypothesis; }
};

struct Transcript {
  std::vector<Message> messages;
  // Present iff the interaction terminated.
  std::optional<VerifierOutcome> outcome;
};

struct VerificationParams {
  double epsilon = 0.1;
  double delta = 0.1;

  void validate() const;
};

class ProverStrategy {
 public:
  virtual ~ProverStrategy() = default;
  // Answers one verifier message; nullopt means the prover stays silent.
  virtual std::optional<std::string> respond(std::string_view request, Rng& rng) = 0;
};

// The verifier's handle on the prover. Every exchange is recorded in the
// transcript. Silence, or asking for more exchanges than the protocol
// declares, throws ProtocolViolation.
class ProverChannel {
 public:
  ProverChannel(ProverStrategy& prover, Transcript& transcript, Rng& prover_rng,
                std::size_t max_exchanges);

  std::string exchange(std::string request);

  std::size_t exchanges() const { return exchanges_; }

 private:
  ProverStrategy& prover_;
  Transcript& transcript_;
  Rng& prover_rng_;
  std::size_t max_exchanges_;
  std::size_t exchanges_ = 0;
};

class VerifierStrategy {
 public:
  virtual ~VerifierStrategy() = default;
  // Upper bound on prover exchanges in one run of this protocol.
  virtual std::size_t max_exchanges() const = 0;
  virtual VerifierOutcome run(ProverChannel& channel, const VerificationParams& params,
                              Rng& coins) = 0;
};

// Runs one interaction. The verifier's coins and the prover's randomness are
// independent streams split from `seed`. ProtocolViolation and malformed JSON
// raised while the verifier runs become a recorded reject.
Transcript run_interaction(VerifierStrategy& verifier, ProverStrategy& prover,
                           const VerificationParams& params, Seed seed);

enum class RunKind { kHonest, kAdversarial };

enum class Classification {
  kCompletenessSuccess,
  kCompletenessFailure,
  kSoundnessSafe,
  kSoundnessViolation,
};

const char* to_string(RunKind k);
const char* to_string(Classification c);
RunKind run_kind_from_string(std::string_view s);
Classification classification_from_string(std::string_view s);

// Loss comparisons allow this much floating-point slack.
inline constexpr double kLossTolerance = 1e-12;

using HypothesisLoss = std::function<double(const nlohmann::json& hypothesis)>;

// Honest runs succeed iff the verifier accepted a hypothesis with loss at
// most baseline + epsilon. Adversarial runs violate soundness iff the
// verifier accepted a hypothesis with loss above baseline + epsilon.
Classification classify_outcome(const VerifierOutcome& outcome, RunKind kind,
                                const HypothesisLoss& loss, double baseline, double epsilon);

// Throws InvalidArgument if the transcript has no outcome.
Classification classify_outcome(const Transcript& t, RunKind kind, const HypothesisLoss& loss,
                                double baseline, double epsilon);

nlohmann::json to_json(const VerifierOutcome& o);
VerifierOutcome outcome_from_json(const nlohmann::json& j);

// One line per record: a header object, then one line per message, then the
// outcome. Payloads that are not valid UTF-8 are stored hex-encoded.
struct TranscriptLog {
  nlohmann::json header = nlohmann::json::object();
  Transcript transcript;
  // Extra fields recorded on the outcome line (loss, classification).
  nlohmann::json outcome_extra = nlohmann::json::object();
};

std::string to_jsonl(const TranscriptLog& log);
// Throws ParseError carrying the 1-based line number of the first bad record.
TranscriptLog parse_jsonl(std::string_view text);

}  // namespace pacverify::harness

#endif  // PACVERIFY_HARNESS_HPP_
