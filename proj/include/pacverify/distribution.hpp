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

#ifndef PACVERIFY_DISTRIBUTION_HPP_
#define PACVERIFY_DISTRIBUTION_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "json.hpp"
#include "pacverify/error.hpp"
#include "pacverify/rng.hpp"

namespace pacverify {

// Domain element of [0,1] x {0,1}. Ordered by x, then label.
struct LabeledPoint {
  double x = 0.0;
  int y = 0;

  friend bool operator==(const LabeledPoint& a, const LabeledPoint& b) {
    return a.x == b.x && a.y == b.y;
  }
  friend bool operator<(const LabeledPoint& a, const LabeledPoint& b) {
    return std::tie(a.x, a.y) < std::tie(b.x, b.y);
  }
};

inline void to_json(nlohmann::json& j, const LabeledPoint& p) { j = nlohmann::json::array({p.x, p.y}); }
inline void from_json(const nlohmann::json& j, LabeledPoint& p) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number_integer()) {
    throw InvalidArgument("labeled point must be [x, y]");
  }
  p.x = j[0].get<double>();
  p.y = j[1].get<int>();
  if (p.y != 0 && p.y != 1) throw InvalidArgument("label must be 0 or 1");
}

// Tolerance on the total mass of a floating-point distribution.
inline constexpr double kMassTolerance = 1e-12;

// A finitely supported probability distribution over opaque, ordered points.
//
// The support keeps the order it was constructed with. When built from
// integer counts the distribution is exact: counts() / denominator() are the
// authoritative masses and masses() holds their floating-point images.
template <class Point>
class DiscreteDistribution {
 public:
  DiscreteDistribution() = default;

  static DiscreteDistribution from_masses(std::vector<Point> support, std::vector<double> masses) {
    if (support.size() != masses.size()) {
      throw InvalidArgument("support and masses differ in length");
    }
    if (support.empty()) throw InvalidArgument("distribution support is empty");
    double total = 0.0;
    for (double m : masses) {
      if (!std::isfinite(m) || m < 0.0) throw InvalidArgument("masses must be finite and >= 0");
      total += m;
    }
    if (std::abs(total - 1.0) > kMassTolerance) {
      throw InvalidArgument("masses sum to " + std::to_string(total) + ", expected 1");
    }
    DiscreteDistribution d;
    d.support_ = std::move(support);
    d.masses_ = std::move(masses);
    d.build_index();
    return d;
  }

  // Normalizes nonnegative weights to a distribution.
  static DiscreteDistribution from_weights(std::vector<Point> support, std::vector<double> weights) {
    double total = 0.0;
    for (double w : weights) {
      if (!std::isfinite(w) || w < 0.0) throw InvalidArgument("weights must be finite and >= 0");
      total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("weights sum to zero");
    for (double& w : weights) w /= total;
    // Renormalizing once more pulls the float sum within tolerance for any
    // practical support size.
    double again = std::accumulate(weights.begin(), weights.end(), 0.0);
    for (double& w : weights) w /= again;
    return from_masses(std::move(support), std::move(weights));
  }

  static DiscreteDistribution from_counts(std::vector<Point> support,
                                          std::vector<std::uint64_t> counts,
                                          std::uint64_t denominator) {
    if (support.size() != counts.size()) {
      throw InvalidArgument("support and counts differ in length");
    }
    if (support.empty()) throw InvalidArgument("distribution support is empty");
    if (denominator == 0) throw InvalidArgument("denominator must be positive");
    std::uint64_t total = 0;
    for (auto c : counts) {
      if (c > denominator - total) throw InvalidArgument("counts exceed the denominator");
      total += c;
    }
    if (total != denominator) throw InvalidArgument("counts do not sum to the denominator");
    DiscreteDistribution d;
    d.support_ = std::move(support);
    d.masses_.reserve(counts.size());
    for (auto c : counts) {
      d.masses_.push_back(static_cast<double>(c) / static_cast<double>(denominator));
    }
    d.counts_ = std::move(counts);
    d.denominator_ = denominator;
    d.build_index();
    return d;
  }

  static DiscreteDistribution point_mass(Point p) {
    return from_counts({std::move(p)}, {1}, 1);
  }

  static DiscreteDistribution uniform(std::vector<Point> support) {
    std::vector<std::uint64_t> counts(support.size(), 1);
    auto n = static_cast<std::uint64_t>(support.size());
    return from_counts(std::move(support), std::move(counts), n);
  }

  std::size_t size() const { return support_.size(); }
  const std::vector<Point>& support() const { return support_; }
  const std::vector<double>& masses() const { return masses_; }
  bool is_exact() const { return denominator_ != 0; }
  const std::vector<std::uint64_t>& counts() const { return counts_; }
  std::uint64_t denominator() const { return denominator_; }

  std::optional<std::size_t> index_of(const Point& p) const {
    auto it = std::lower_bound(order_.begin(), order_.end(), p,
                               [this](std::size_t i, const Point& q) { return support_[i] < q; });
    if (it == order_.end() || !(support_[*it] == p)) return std::nullopt;
    return *it;
  }

  double mass_of(const Point& p) const {
    auto i = index_of(p);
    return i ? masses_[*i] : 0.0;
  }

  // Indices of the support in ascending point order.
  const std::vector<std::size_t>& sorted_order() const { return order_; }

 private:
  void build_index() {
    order_.resize(support_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    std::sort(order_.begin(), order_.end(),
              [this](std::size_t a, std::size_t b) { return support_[a] < support_[b]; });
    for (std::size_t i = 1; i < order_.size(); ++i) {
      if (support_[order_[i - 1]] == support_[order_[i]]) {
        throw InvalidArgument("support identifiers must be distinct");
      }
    }
  }

  std::vector<Point> support_;
  std::vector<double> masses_;
  std::vector<std::uint64_t> counts_;
  std::uint64_t denominator_ = 0;
  std::vector<std::size_t> order_;
};

// i.i.d. draws together with the seed that produced them.
template <class Point>
struct Sample {
  std::vector<Point> points;
  Seed source_seed = 0;

  std::size_t size() const { return points.size(); }
};

using LabeledSample = Sample<LabeledPoint>;

struct SampleBudget {
  std::size_t m_v = 1;
  std::size_t m_p = 1;

  void validate() const {
    if (m_v < 1 || m_p < 1) throw InvalidArgument("sample budgets must be >= 1");
  }
};

// Reusable sampler over the support indices of a distribution.
template <class Point>
class Sampler {
 public:
  explicit Sampler(const DiscreteDistribution<Point>& dist)
      : dist_(&dist), index_(dist.masses().begin(), dist.masses().end()) {}

  std::size_t draw_index(Rng& rng) { return index_(rng); }
  const Point& draw(Rng& rng) { return dist_->support()[index_(rng)]; }

  std::vector<Point> draw(std::size_t m, Rng& rng) {
    std::vector<Point> out;
    out.reserve(m);
    for (std::size_t i = 0; i < m; ++i) out.push_back(draw(rng));
    return out;
  }

 private:
  const DiscreteDistribution<Point>* dist_;
  std::discrete_distribution<std::size_t> index_;
};

template <class Point>
std::vector<Point> sample_points(const DiscreteDistribution<Point>& dist, std::size_t m, Rng& rng) {
  if (m < 1) throw InvalidArgument("sample size must be >= 1");
  Sampler<Point> s(dist);
  return s.draw(m, rng);
}

// m i.i.d. draws; a pure function of (dist, m, seed).
template <class Point>
Sample<Point> sample(const DiscreteDistribution<Point>& dist, std::size_t m, Seed seed) {
  Rng rng = make_rng(seed);
  return Sample<Point>{sample_points(dist, m, rng), seed};
}

// Half the L1 distance over the union of both supports.
template <class Point>
double total_variation(const DiscreteDistribution<Point>& p, const DiscreteDistribution<Point>& q) {
  double sum = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    sum += std::abs(p.masses()[i] - q.mass_of(p.support()[i]));
  }
  for (std::size_t i = 0; i < q.size(); ++i) {
    if (!p.index_of(q.support()[i])) sum += q.masses()[i];
  }
  return std::min(1.0, 0.5 * sum);
}

// Half the L1 distance between two probability vectors over the same index set.
double total_variation(std::span<const double> p, std::span<const double> q);

// Exact integer counts over `denominator` by largest-remainder rounding.
std::vector<std::uint64_t> quantize_masses(std::span<const double> masses, std::uint64_t denominator);

inline constexpr std::uint64_t kDefaultJsonDenominator = 1'000'000'000'000ULL;

// {"support": [...], "counts": [...], "denominator": N}. Inexact distributions
// are quantized over kDefaultJsonDenominator.
template <class Point>
nlohmann::json to_json(const DiscreteDistribution<Point>& d) {
  nlohmann::json j;
  j["support"] = d.support();
  if (d.is_exact()) {
    j["counts"] = d.counts();
    j["denominator"] = d.denominator();
  } else {
    j["counts"] = quantize_masses(d.masses(), kDefaultJsonDenominator);
    j["denominator"] = kDefaultJsonDenominator;
  }
  return j;
}

template <class Point>
DiscreteDistribution<Point> distribution_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("support") || !j.contains("counts") ||
      !j.contains("denominator")) {
    throw InvalidArgument("distribution JSON needs support, counts and denominator");
  }
  try {
    auto support = j.at("support").get<std::vector<Point>>();
    auto counts = j.at("counts").get<std::vector<std::uint64_t>>();
    auto den = j.at("denominator").get<std::uint64_t>();
    return DiscreteDistribution<Point>::from_counts(std::move(support), std::move(counts), den);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(std::string("distribution JSON: ") + e.what());
  }
}

}  // namespace pacverify

#endif  // PACVERIFY_DISTRIBUTION_HPP_
