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

#ifndef PACVERIFY_STATS_HPP_
#define PACVERIFY_STATS_HPP_

#include <cstddef>
#include <span>
#include <string>

#include "json.hpp"

namespace pacverify {

// Wilson score interval for a binomial proportion.
struct RateInterval {
  double rate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  std::size_t successes = 0;
  std::size_t trials = 0;
};

inline constexpr double kZ95 = 1.959963984540054;
inline constexpr const char* kCiMethod = "wilson-score-95";

RateInterval wilson_interval(std::size_t successes, std::size_t trials, double z = kZ95);

nlohmann::json to_json(const RateInterval& r);

// Ordinary least-squares fit y = intercept + slope * x.
struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
};

LinearFit least_squares(std::span<const double> x, std::span<const double> y);

// Fit of log(y) against log(x).
LinearFit loglog_fit(std::span<const double> x, std::span<const double> y);

// Binomial standard deviation of a rate estimate, sqrt(p(1-p)/n).
double binomial_sigma(double p, std::size_t n);

}  // namespace pacverify

#endif  // PACVERIFY_STATS_HPP_
