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

#include "pacverify/stats.hpp"

#include <cmath>
#include <vector>

#include "pacverify/distribution.hpp"
#include "pacverify/error.hpp"

namespace pacverify {

RateInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  RateInterval r;
  r.successes = successes;
  r.trials = trials;
  if (trials == 0) {
    r.upper = 1.0;
    return r;
  }
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  r.rate = p;
  r.lower = std::max(0.0, center - half);
  r.upper = std::min(1.0, center + half);
  // At the extremes the bound is exactly the observed rate; rounding in the
  // closed form would otherwise leave a residue of order 1e-17.
  if (successes == 0) r.lower = 0.0;
  if (successes == trials) r.upper = 1.0;
  return r;
}

nlohmann::json to_json(const RateInterval& r) {
  return {{"rate", r.rate},   {"ci_lower", r.lower}, {"ci_upper", r.upper},
          {"successes", r.successes}, {"trials", r.trials}};
}

LinearFit least_squares(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) {
    throw InvalidArgument("least squares needs at least two paired points");
  }
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw InvalidArgument("least squares: x values are all equal");
  LinearFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

LinearFit loglog_fit(std::span<const double> x, std::span<const double> y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw InvalidArgument("log-log fit needs positive values");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return least_squares(lx, ly);
}

double binomial_sigma(double p, std::size_t n) {
  if (n == 0) return 0.0;
  return std::sqrt(std::max(0.0, p * (1.0 - p)) / static_cast<double>(n));
}

double total_variation(std::span<const double> p, std::span<const double> q) {
  const std::size_t n = std::max(p.size(), q.size());
  double sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    double a = i < p.size() ? p[i] : 0.0;
    double b = i < q.size() ? q[i] : 0.0;
    sum += std::abs(a - b);
  }
  return std::min(1.0, 0.5 * sum);
}

std::vector<std::uint64_t> quantize_masses(std::span<const double> masses, std::uint64_t denominator) {
  std::vector<std::uint64_t> counts(masses.size(), 0);
  std::vector<std::pair<double, std::size_t>> remainders;
  remainders.reserve(masses.size());
  double total = 0.0;
  for (double m : masses) total += m;
  std::uint64_t assigned = 0;
  const auto den = static_cast<long double>(denominator);
  for (std::size_t i = 0; i < masses.size(); ++i) {
    long double exact = static_cast<long double>(masses[i]) / total * den;
    auto floor_v = static_cast<std::uint64_t>(std::floor(exact));
    counts[i] = floor_v;
    assigned += floor_v;
    remainders.emplace_back(static_cast<double>(exact - static_cast<long double>(floor_v)), i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t r = 0; assigned < denominator && r < remainders.size(); ++r, ++assigned) {
    ++counts[remainders[r].second];
  }
  return counts;
}

}  // namespace pacverify
