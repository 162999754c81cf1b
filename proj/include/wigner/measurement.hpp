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

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "wigner/linalg.hpp"
#include "wigner/random.hpp"

namespace wigner {

/// Named, outcome-labeled orthogonal projector family resolving the identity
/// on its subsystems. Outcome order is significant: joint tables enumerate it
/// row-major and sampling walks its inverse CDF in declared order.
struct Observable {
  Observable(std::string name, std::vector<SystemSpec> systems,
             std::vector<std::pair<std::string, Projector>> outcomes);

  std::string name;
  std::vector<SystemSpec> systems;
  std::vector<std::pair<std::string, Projector>> outcomes;

  const Projector& projector_for(std::string_view outcome_label) const;
  int outcome_index(std::string_view outcome_label) const;  // -1 if absent
};

/// Observable with one normalized eigenstate per outcome.
Observable observable_from_eigenstates(
    std::string name, std::vector<std::pair<std::string, PureState>> eigenstates);

/// Observable with a (possibly multi-dimensional) eigenspace per outcome.
Observable observable_from_eigenspaces(
    std::string name,
    std::vector<std::pair<std::string, std::vector<PureState>>> eigenspaces);

/// Probability table over outcome-label tuples of an ordered variable list.
/// Entries keep full precision; values are clamped to [0,1] and must sum to 1
/// within kTol. The support covers every outcome combination, zeros included,
/// in row-major declared outcome order.
class Distribution {
 public:
  using Entry = std::pair<std::vector<std::string>, double>;

  Distribution(std::vector<std::string> variables, std::vector<Entry> support);

  const std::vector<std::string>& variables() const { return variables_; }
  const std::vector<Entry>& support() const { return support_; }

  /// Probability of an exact outcome tuple; throws if the tuple is absent.
  double probability(std::span<const std::string> outcome) const;

  double sum() const;

 private:
  std::vector<std::string> variables_;
  std::vector<Entry> support_;
};

/// Born rule: P(outcome i) = <psi|P_i|psi>.
Distribution born_distribution(const PureState& state, const Observable& obs);

/// Joint Born table for observables on pairwise disjoint subsystems.
/// P(o1..ok) = <psi|P_o1 ... P_ok|psi>. Overlapping subsystems are rejected:
/// a non-commuting joint has no single table.
Distribution joint_distribution(const PureState& state,
                                std::span<const Observable> obs_list);

/// Lueders rule: P psi / ||P psi||. Conditioning on an event of probability
/// below kConditionThreshold is an error.
PureState conditionalize(const PureState& state, const Projector& p);

/// Draws one outcome with Born probabilities via inverse CDF over the
/// declared outcome order, and returns the conditionalized post-state.
/// Fully determined by (state, obs, stream position).
std::pair<std::string, PureState> sample(const PureState& state,
                                         const Observable& obs,
                                         RandomStream& stream);

/// Sums probabilities over the dropped variable positions. `keep` must be
/// nonempty and name valid positions.
Distribution marginal(const Distribution& d, std::span<const std::size_t> keep);

/// Per-pair comparison of one side's marginals across the other side's
/// measurement choices (the unmeasured case is the baseline).
struct NoSignalingReport {
  struct Entry {
    std::string side1_observable;
    std::string side2_observable;
    double max_deviation = 0.0;
  };
  std::vector<Entry> entries;
  double max_deviation = 0.0;

  bool passes(double tol = kTol) const { return max_deviation < tol; }
};

/// For each side-1 observable, verifies that its marginal distribution is
/// independent of which side-2 observable is measured (or none at all).
/// Every side-1 observable must be disjoint from every side-2 observable.
NoSignalingReport no_signaling_audit(const PureState& state,
                                     std::span<const Observable> side1_choices,
                                     std::span<const Observable> side2_choices);

}  // namespace wigner
