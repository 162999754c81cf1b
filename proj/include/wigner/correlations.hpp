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

#pragma once

#include "wigner/measurement.hpp"

namespace wigner {

/// Observable with exactly two outcomes read as values +1 and -1. The value
/// map is fixed: +1 for the first-listed outcome, -1 for the second.
class DichotomicObservable {
 public:
  explicit DichotomicObservable(Observable observable);

  const Observable& observable() const { return observable_; }
  int value(std::string_view outcome_label) const;

 private:
  Observable observable_;
};

/// E = sum of (+-1)(+-1) P(outcome pair) over the joint distribution of two
/// settings on disjoint subsystems. Always in [-1, 1].
double correlation(const PureState& state, const DichotomicObservable& a,
                   const DichotomicObservable& b);

/// S = |E(a,b) + E(a,b2) + E(a2,b) - E(a2,b2)|. Quantum states satisfy
/// S <= 2*sqrt(2); local models satisfy S <= 2.
double chsh(const PureState& state, const DichotomicObservable& a,
            const DichotomicObservable& a2, const DichotomicObservable& b,
            const DichotomicObservable& b2);

}  // namespace wigner
