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

#ifndef PACVERIFY_LOSS_HPP_
#define PACVERIFY_LOSS_HPP_

#include <functional>

#include "pacverify/distribution.hpp"
#include "pacverify/error.hpp"

namespace pacverify {

// A loss Omega x H -> [0,1]. `reject_loss` is the value of the reject symbol;
// it is carried for completeness and never enters acceptance accounting.
template <class Z, class H>
struct LossFunction {
  std::function<double(const Z&, const H&)> evaluator;
  double reject_loss = 1.0;

  double operator()(const Z& z, const H& h) const {
    double v = evaluator(z, h);
    if (!(v >= 0.0 && v <= 1.0)) throw InvalidArgument("loss value outside [0,1]");
    return v;
  }
};

// 0-1 loss for any hypothesis callable as h(x) -> bool.
template <class H>
LossFunction<LabeledPoint, H> zero_one_loss() {
  return {[](const LabeledPoint& z, const H& h) { return (h(z.x) ? 1 : 0) != z.y ? 1.0 : 0.0; },
          1.0};
}

// (1/m) sum_i loss(z_i, h).
template <class Z, class H>
double empirical_loss(const H& h, std::span<const Z> s, const LossFunction<Z, H>& loss) {
  if (s.empty()) return 0.0;
  double total = 0.0;
  for (const auto& z : s) total += loss(z, h);
  return total / static_cast<double>(s.size());
}

template <class Z, class H>
double empirical_loss(const H& h, const Sample<Z>& s, const LossFunction<Z, H>& loss) {
  return empirical_loss<Z, H>(h, std::span<const Z>(s.points), loss);
}

// E_{Z ~ dist} loss(Z, h).
template <class Z, class H>
double population_loss(const H& h, const DiscreteDistribution<Z>& dist, const LossFunction<Z, H>& loss) {
  double total = 0.0;
  for (std::size_t i = 0; i < dist.size(); ++i) {
    if (dist.masses()[i] > 0.0) total += dist.masses()[i] * loss(dist.support()[i], h);
  }
  return total;
}

}  // namespace pacverify

#endif  // PACVERIFY_LOSS_HPP_
