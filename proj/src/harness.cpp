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

#include "pacverify/harness.hpp"

#include <sstream>
#include <utility>

#include "pacverify/error.hpp"

namespace pacverify::harness {

const char* to_string(Sender s) { return s == Sender::kVerifier ? "verifier" : "prover"; }

VerifierOutcome VerifierOutcome::reject(std::string reason, nlohmann::json detail) {
  VerifierOutcome o;
  o.kind = OutcomeKind::kReject;
  o.reason = std::move(reason);
  o.detail = std::move(detail);
  return o;
}

VerifierOutcome VerifierOutcome::accept(nlohmann::json hypothesis, nlohmann::json detail) {
  VerifierOutcome o;
  o.kind = OutcomeKind::kHypothesis;
  o.hypothesis = std::move(hypothesis);
  o.detail = std::move(detail);
  return o;
}

void VerificationParams::validate() const {
  if (!(epsilon > 0.0 && epsilon < 1.0)) throw InvalidArgument("epsilon must lie in (0,1)");
  if (!(delta > 0.0 && delta < 1.0)) throw InvalidArgument("delta must lie in (0,1)");
}

ProverChannel::ProverChannel(ProverStrategy& prover, Transcript& transcript, Rng& prover_rng,
                             std::size_t max_exchanges)
    : prover_(prover),
      transcript_(transcript),
      prover_rng_(prover_rng),
      max_exchanges_(max_exchanges) {}

std::string ProverChannel::exchange(std::string request) {
  if (exchanges_ >= max_exchanges_) {
    throw ProtocolViolation("exchange bound of " + std::to_string(max_exchanges_) + " exceeded");
  }
  ++exchanges_;
  transcript_.messages.push_back({Sender::kVerifier, transcript_.messages.size(), request});
  auto reply = prover_.respond(transcript_.messages.back().payload, prover_rng_);
  if (!reply) throw ProtocolViolation("prover sent no message");
  transcript_.messages.push_back({Sender::kProver, transcript_.messages.size(), *reply});
  return std::move(*reply);
}

Transcript run_interaction(VerifierStrategy& verifier, ProverStrategy& prover,
                           const VerificationParams& params, Seed seed) {
  params.validate();
  Transcript t;
  Rng coins = make_rng(split_seed(seed, stream::kVerifierCoins));
  Rng prover_rng = make_rng(split_seed(seed, stream::kProverCoins));
  ProverChannel channel(prover, t, prover_rng, verifier.max_exchanges());
  try {
    t.outcome = verifier.run(channel, params, coins);
  } catch (const ProtocolViolation& e) {
    t.outcome = VerifierOutcome::reject(std::string("protocol-violation: ") + e.what());
  } catch (const nlohmann::json::exception& e) {
    t.outcome = VerifierOutcome::reject(std::string("protocol-violation: ") + e.what());
  }
  return t;
}

const char* to_string(RunKind k) { return k == RunKind::kHonest ? "honest" : "adversarial"; }

const char* to_string(Classification c) {
  switch (c) {
    case Classification::kCompletenessSuccess:
      return "completeness-success";
    case Classification::kCompletenessFailure:
      return "completeness-failure";
    case Classification::kSoundnessSafe:
      return "soundness-safe";
    case Classification::kSoundnessViolation:
      return "soundness-violation";
  }
  return "unknown";
}

RunKind run_kind_from_string(std::string_view s) {
  if (s == "honest") return RunKind::kHonest;
  if (s == "adversarial") return RunKind::kAdversarial;
  throw InvalidArgument("unknown run kind '" + std::string(s) + "'");
}

Classification classification_from_string(std::string_view s) {
  for (auto c : {Classification::kCompletenessSuccess, Classification::kCompletenessFailure,
                 Classification::kSoundnessSafe, Classification::kSoundnessViolation}) {
    if (s == to_string(c)) return c;
  }
  throw InvalidArgument("unknown classification '" + std::string(s) + "'");
}

Classification classify_outcome(const VerifierOutcome& outcome, RunKind kind,
                                const HypothesisLoss& loss, double baseline, double epsilon) {
  const bool accepted = outcome.accepted();
  const bool within = accepted && loss(*outcome.hypothesis) <= baseline + epsilon + kLossTolerance;
  if (kind == RunKind::kHonest) {
    return within ? Classification::kCompletenessSuccess : Classification::kCompletenessFailure;
  }
  return accepted && !within ? Classification::kSoundnessViolation
                             : Classification::kSoundnessSafe;
}

Classification classify_outcome(const Transcript& t, RunKind kind, const HypothesisLoss& loss,
                                double baseline, double epsilon) {
  if (!t.outcome) throw InvalidArgument("transcript has no outcome");
  return classify_outcome(*t.outcome, kind, loss, baseline, epsilon);
}

nlohmann::json to_json(const VerifierOutcome& o) {
  nlohmann::json j;
  j["kind"] = o.accepted() ? "hypothesis" : "reject";
  if (o.accepted()) {
    j["hypothesis"] = *o.hypothesis;
  } else {
    j["reason"] = o.reason;
  }
  j["detail"] = o.detail;
  return j;
}

VerifierOutcome outcome_from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  nlohmann::json detail = j.contains("detail") ? j.at("detail") : nlohmann::json::object();
  if (kind == "hypothesis") return VerifierOutcome::accept(j.at("hypothesis"), std::move(detail));
  if (kind == "reject") {
    return VerifierOutcome::reject(j.at("reason").get<std::string>(), std::move(detail));
  }
  throw InvalidArgument("unknown outcome kind '" + kind + "'");
}

namespace {

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const auto c = static_cast<unsigned char>(s[i]);
    std::size_t len = c < 0x80 ? 1 : (c >> 5) == 0x6 ? 2 : (c >> 4) == 0xE ? 3 : (c >> 3) == 0x1E ? 4 : 0;
    if (len == 0 || i + len > s.size()) return false;
    for (std::size_t k = 1; k < len; ++k) {
      if ((static_cast<unsigned char>(s[i + k]) >> 6) != 0x2) return false;
    }
    i += len;
  }
  return true;
}

std::string hex_encode(std::string_view s) {
  static constexpr char kDigits[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * s.size());
  for (char ch : s) {
    const auto c = static_cast<unsigned char>(ch);
    out.push_back(kDigits[c >> 4]);
    out.push_back(kDigits[c & 0xF]);
  }
  return out;
}

std::string hex_decode(std::string_view s) {
  if (s.size() % 2 != 0) throw InvalidArgument("odd-length hex payload");
  auto nibble = [](char c) -> int {
    if (c >= '0' && c <= '9') return c - '0';
    if (c >= 'a' && c <= 'f') return c - 'a' + 10;
    throw InvalidArgument("bad hex digit");
  };
  std::string out;
  for (std::size_t i = 0; i < s.size(); i += 2) {
    out.push_back(static_cast<char>(nibble(s[i]) << 4 | nibble(s[i + 1])));
  }
  return out;
}

}  // namespace

std::string to_jsonl(const TranscriptLog& log) {
  std::string out;
  nlohmann::json header = log.header;
  header["type"] = "header";
  out += header.dump() + "\n";
  for (const auto& m : log.transcript.messages) {
    nlohmann::json line;
    line["type"] = "message";
    line["sender"] = to_string(m.sender);
    line["round"] = m.round;
    if (valid_utf8(m.payload)) {
      line["payload"] = m.payload;
    } else {
      line["payload_hex"] = hex_encode(m.payload);
    }
    out += line.dump() + "\n";
  }
  if (log.transcript.outcome) {
    nlohmann::json line = to_json(*log.transcript.outcome);
    line["type"] = "outcome";
    for (const auto& [k, v] : log.outcome_extra.items()) line[k] = v;
    out += line.dump() + "\n";
  }
  return out;
}

TranscriptLog parse_jsonl(std::string_view text) {
  TranscriptLog log;
  std::size_t line_no = 0;
  bool seen_header = false;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (line.empty()) continue;
    try {
      auto j = nlohmann::json::parse(line);
      const std::string type = j.at("type").get<std::string>();
      if (log.transcript.outcome) throw InvalidArgument("record after the outcome line");
      if (type == "header") {
        if (seen_header) throw InvalidArgument("duplicate header");
        seen_header = true;
        j.erase("type");
        log.header = std::move(j);
      } else if (!seen_header) {
        throw InvalidArgument("first record must be the header");
      } else if (type == "message") {
        Message m;
        const std::string sender = j.at("sender").get<std::string>();
        if (sender == "verifier") {
          m.sender = Sender::kVerifier;
        } else if (sender == "prover") {
          m.sender = Sender::kProver;
        } else {
          throw InvalidArgument("unknown sender '" + sender + "'");
        }
        m.round = j.at("round").get<std::size_t>();
        if (!log.transcript.messages.empty() && m.round <= log.transcript.messages.back().round) {
          throw InvalidArgument("rounds must strictly increase");
        }
        m.payload = j.contains("payload_hex") ? hex_decode(j.at("payload_hex").get<std::string>())
                                              : j.at("payload").get<std::string>();
        log.transcript.messages.push_back(std::move(m));
      } else if (type == "outcome") {
        log.transcript.outcome = outcome_from_json(j);
        for (const auto& [k, v] : j.items()) {
          if (k != "type" && k != "kind" && k != "hypothesis" && k != "reason" && k != "detail") {
            log.outcome_extra[k] = v;
          }
        }
      } else {
        throw InvalidArgument("unknown record type '" + type + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
  }
  if (!seen_header) throw ParseError(line_no == 0 ? 1 : line_no, "log has no header");
  return log;
}

}  // namespace pacverify::harness
