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

#ifndef PACVERIFY_EXPERIMENT_HPP_
#define PACVERIFY_EXPERIMENT_HPP_

#include <cstddef>
#include <string>
#include <string_view>

#include "json.hpp"
#include "pacverify/rng.hpp"

namespace pacverify::experiment {

enum class Protocol { kIntervals, kSq, kLowerbound, kIdentityCalibrate };

const char* to_string(Protocol p);

// One experiment. `adversary` names a prover of the chosen protocol, or
// "all" for the honest prover followed by every built-in soundness
// adversary.
struct ExperimentSpec {
  Protocol protocol = Protocol::kIntervals;
  nlohmann::json distribution = nlohmann::json::object();
  std::string adversary = "honest";
  nlohmann::json params = nlohmann::json::object();
  std::size_t trials = 1;
  Seed root_seed = 0;
  nlohmann::json options = nlohmann::json::object();

  // Throws SpecError naming the offending field.
  static ExperimentSpec from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct ExperimentReport {
  // Deterministic given the experiment spec, except the "wall_clock_seconds" field.
  nlohmann::json report;
  std::string csv;
};

ExperimentReport run_experiment(const ExperimentSpec& spec, std::size_t workers = 1);

// The report with wall-clock fields removed, serialized.
std::string deterministic_dump(const nlohmann::json& report);

// PACVERIFY_WORKERS when set to a positive integer, else the hardware
// concurrency (at least 1).
std::size_t workers_from_env();

// Reclassifies a transcript log written by run_experiment. With
// `resimulate`, also reruns the trial from its recorded seed and checks
// the regenerated log matches byte for byte.
nlohmann::json replay(std::string_view jsonl, bool resimulate = false);

}  // namespace pacverify::experiment

#endif  // PACVERIFY_EXPERIMENT_HPP_
