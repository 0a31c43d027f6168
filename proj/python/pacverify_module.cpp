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

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pacverify/distribution.hpp"
#include "pacverify/error.hpp"
#include "pacverify/experiment.hpp"
#include "pacverify/identity_test.hpp"
#include "pacverify/intervals.hpp"
#include "pacverify/lowerbound.hpp"
#include "pacverify/stats.hpp"

namespace py = pybind11;
namespace pv = pacverify;

namespace {

pv::identity::IdentityTestConfig tester_config(std::size_t n, double epsilon, double delta,
                                               double constant_c,
                                               std::optional<double> inner_radius) {
  auto cfg = pv::identity::IdentityTestConfig::make(n, epsilon, delta, constant_c);
  cfg.inner_radius = inner_radius;
  return cfg;
}

py::dict verdict_dict(const pv::identity::TestVerdict& v) {
  py::dict d;
  d["accept"] = v.accept;
  d["statistic"] = v.statistic;
  d["threshold"] = v.threshold;
  d["samples_used"] = v.samples_used;
  d["zero_mass_hit"] = v.zero_mass_hit;
  d["repetition_statistics"] = v.repetition_statistics;
  return d;
}

// JSON crosses the boundary as text; the Python wrapper decodes it.
std::pair<std::string, std::string> run_experiment_text(const std::string& spec_json,
                                                        std::size_t workers) {
  const auto spec = pv::experiment::ExperimentSpec::from_json(nlohmann::json::parse(spec_json));
  py::gil_scoped_release release;
  auto rep = pv::experiment::run_experiment(spec, workers);
  return {rep.report.dump(), rep.csv};
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Interactive PAC verification protocols and their test harness";

  py::register_exception<pv::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<pv::InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<pv::SpecError>(m, "SpecError", PyExc_ValueError);
  py::register_exception<pv::ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<pv::SampleTooSmall>(m, "SampleTooSmall", PyExc_ValueError);

  m.def(
      "required_samples",
      [](std::size_t n, double epsilon, double delta, double constant_c,
         std::optional<double> inner_radius) {
        return pv::identity::required_samples(
            tester_config(n, epsilon, delta, constant_c, inner_radius));
      },
      py::arg("n"), py::arg("epsilon"), py::arg("delta"),
      py::arg("constant_c") = pv::identity::kDefaultConstant, py::arg("inner_radius") = py::none());

  m.def(
      "tolerant_identity_test",
      [](const std::vector<double>& reference, const std::vector<std::size_t>& sample,
         double epsilon, double delta, double constant_c, std::optional<double> inner_radius) {
        const auto cfg = tester_config(reference.size(), epsilon, delta, constant_c, inner_radius);
        return verdict_dict(pv::identity::tolerant_identity_test(reference, sample, cfg));
      },
      py::arg("reference"), py::arg("sample"), py::arg("epsilon"), py::arg("delta"),
      py::arg("constant_c") = pv::identity::kDefaultConstant, py::arg("inner_radius") = py::none(),
      "Samples are indices into `reference`.");

  m.def(
      "erm_intervals",
      [](const std::vector<std::tuple<double, int, double>>& points, std::size_t d) {
        std::vector<pv::LabeledPoint> support;
        std::vector<double> weights;
        for (const auto& [x, y, w] : points) {
          support.push_back({x, y});
          weights.push_back(w);
        }
        auto dist = pv::DiscreteDistribution<pv::LabeledPoint>::from_weights(support, weights);
        const auto h = pv::intervals::erm_discretized(dist, d);
        return std::make_pair(h.intervals(), pv::intervals::population_loss_01(h, dist));
      },
      py::arg("points"), py::arg("d"),
      "Best union of at most d intervals for weighted (x, y, weight) points; returns "
      "(intervals, loss).");

  m.def("no_collision_probability", &pv::lowerbound::no_collision_probability, py::arg("d"),
        py::arg("t"));
  m.def("exact_tv", &pv::lowerbound::exact_tv, py::arg("d"), py::arg("t"));

  m.def(
      "wilson_interval",
      [](std::size_t successes, std::size_t trials) {
        const auto ci = pv::wilson_interval(successes, trials);
        return std::make_tuple(ci.rate, ci.lower, ci.upper);
      },
      py::arg("successes"), py::arg("trials"));

  m.def("_run_experiment", &run_experiment_text, py::arg("spec_json"), py::arg("workers") = 1);
  m.def(
      "_replay",
      [](const std::string& jsonl, bool resimulate) {
        return pv::experiment::replay(jsonl, resimulate).dump();
      },
      py::arg("jsonl"), py::arg("resimulate") = false);
}
