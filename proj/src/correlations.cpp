// Copyright 2026 The Wigner Simulator Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "wigner/correlations.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace wigner {

DichotomicObservable::DichotomicObservable(Observable observable)
    : observable_(std::move(observable)) {
  if (observable_.outcomes.size() != 2) {
    throw DomainError("observable '" + observable_.name +
                      "' must have exactly two outcomes to carry values +1/-1");
  }
}

int DichotomicObservable::value(std::string_view outcome_label) const {
  const int index = observable_.outcome_index(outcome_label);
  if (index < 0) {
    throw DomainError("observable '" + observable_.name + "' has no outcome '" +
                      std::string(outcome_label) + "'");
  }
  return index == 0 ? 1 : -1;
}

double correlation(const PureState& state, const DichotomicObservable& a,
                   const DichotomicObservable& b) {
  const std::vector<Observable> pair = {a.observable(), b.observable()};
  const Distribution joint = joint_distribution(state, pair);
  double e = 0.0;
  for (const auto& [outcome, p] : joint.support()) {
    e += a.value(outcome[0]) * b.value(outcome[1]) * p;
  }
  return std::clamp(e, -1.0, 1.0);
}

double chsh(const PureState& state, const DichotomicObservable& a,
            const DichotomicObservable& a2, const DichotomicObservable& b,
            const DichotomicObservable& b2) {
  return std::abs(correlation(state, a, b) + correlation(state, a, b2) +
                  correlation(state, a2, b) - correlation(state, a2, b2));
}

}  // namespace wigner
