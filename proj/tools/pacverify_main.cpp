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

// Command-line front end: runs experiments from JSON spec files and replays
// transcript logs.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "pacverify/error.hpp"
#include "pacverify/experiment.hpp"

namespace {

namespace fs = std::filesystem;
namespace ex = pacverify::experiment;
using nlohmann::json;

struct RunFlags {
  std::string spec_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  std::optional<std::string> prover;
  std::string out_dir;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw pacverify::Error("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw pacverify::Error("cannot write " + path.string());
  out << content;
}

const char* table_name(const ex::ExperimentSpec& spec) {
  switch (spec.protocol) {
    case ex::Protocol::kLowerbound:
      return "lowerbound.csv";
    case ex::Protocol::kIdentityCalibrate:
      return "calibration.csv";
    case ex::Protocol::kSq:
      return spec.options.value("sweep", std::string()) == "gap" ? "gap.csv" : "rates.csv";
    case ex::Protocol::kIntervals:
      break;
  }
  return "rates.csv";
}

int run(ex::Protocol protocol, const RunFlags& f) {
  json raw = json::object();
  if (!f.spec_path.empty()) {
    try {
      raw = json::parse(read_file(f.spec_path));
    } catch (const json::parse_error& e) {
      throw pacverify::SpecError("spec", e.what());
    }
    if (!raw.is_object()) throw pacverify::SpecError("spec", "must be a JSON object");
  }
  if (!raw.contains("protocol")) raw["protocol"] = ex::to_string(protocol);
  if (f.seed) raw["root_seed"] = *f.seed;
  if (f.trials) raw["trials"] = *f.trials;
  if (f.prover) raw["adversary"] = *f.prover;
  const auto spec = ex::ExperimentSpec::from_json(raw);
  if (spec.protocol != protocol) {
    throw pacverify::SpecError("protocol", std::string("this subcommand runs '") +
                                               ex::to_string(protocol) + "' specs");
  }

  const auto rep = ex::run_experiment(spec, ex::workers_from_env());
  if (!f.out_dir.empty()) {
    const fs::path dir(f.out_dir);
    fs::create_directories(dir);
    write_file(dir / "report.json", rep.report.dump(2) + "\n");
    write_file(dir / table_name(spec), rep.csv);
    if (rep.report.contains("transcripts") && !rep.report["transcripts"].empty()) {
      fs::create_directories(dir / "transcripts");
      for (const auto& t : rep.report["transcripts"]) {
        const std::string name = t["prover"].get<std::string>() + "-" +
                                 std::to_string(t["trial"].get<std::size_t>()) + ".jsonl";
        write_file(dir / "transcripts" / name, t["log"].get<std::string>());
      }
    }
  }
  if (protocol == ex::Protocol::kIdentityCalibrate) {
    std::cout << rep.report["calibration"].dump(2) << "\n";
  } else {
    std::cout << rep.csv;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Simulator for interactive PAC verification protocols"};
  app.require_subcommand(1);

  RunFlags flags;
  auto add_run_flags = [&flags](CLI::App* sub) {
    sub->add_option("--spec", flags.spec_path, "JSON experiment spec")->check(CLI::ExistingFile);
    sub->add_option("--seed", flags.seed, "root seed (overrides the spec file)");
    sub->add_option("--trials", flags.trials, "trials per prover (overrides the spec file)")
        ->check(CLI::PositiveNumber);
    sub->add_option("--out", flags.out_dir, "directory for report.json, tables and transcripts");
  };

  auto* intervals = app.add_subcommand("intervals-verify", "union-of-intervals protocol runs");
  add_run_flags(intervals);
  intervals->add_option("--prover", flags.prover, "prover name, or 'all'");
  auto* sq = app.add_subcommand("sq-verify", "statistical-query protocol runs");
  add_run_flags(sq);
  sq->add_option("--prover", flags.prover, "prover name, or 'all'");
  auto* lower = app.add_subcommand("lowerbound", "collision distinguisher crossing curves");
  add_run_flags(lower);
  auto* calib = app.add_subcommand("calibrate", "identity tester constant calibration");
  add_run_flags(calib);

  std::string log_path;
  bool resimulate = false;
  auto* replay = app.add_subcommand("replay", "reclassify a transcript log");
  replay->add_option("log", log_path, "JSON-lines transcript log")->required()->check(CLI::ExistingFile);
  replay->add_flag("--resimulate", resimulate, "rerun the trial and compare logs byte for byte");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*intervals) return run(ex::Protocol::kIntervals, flags);
    if (*sq) return run(ex::Protocol::kSq, flags);
    if (*lower) return run(ex::Protocol::kLowerbound, flags);
    if (*calib) return run(ex::Protocol::kIdentityCalibrate, flags);
    if (*replay) {
      const auto result = ex::replay(read_file(log_path), resimulate);
      std::cout << result.dump(2) << "\n";
      const bool ok = result["match"].get<bool>() &&
                      result.value("resimulated_match", true);
      return ok ? 0 : 4;
    }
  } catch (const pacverify::SpecError& e) {
    std::cerr << json{{"error", "spec"}, {"field", e.field()}, {"message", e.what()}}.dump() << "\n";
    return 2;
  } catch (const pacverify::ParseError& e) {
    std::cerr << json{{"error", "parse"}, {"line", e.line()}, {"message", e.what()}}.dump() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "runtime"}, {"message", e.what()}}.dump() << "\n";
    return 1;
  }
  return 0;
}
