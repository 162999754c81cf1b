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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "wigner/scenario.hpp"

namespace wigner {

/// Boolean algebra generated by a commuting projector family. The atoms are
/// the minimal nonzero elements; every element of the algebra is a subset of
/// atoms, so Boolean operations on elements are exact set operations.
struct Frame {
  std::string name;
  std::vector<std::pair<std::string, Projector>> atoms;

  const std::vector<SystemSpec>& systems() const;
  int atom_index(std::string_view label) const;
};

/// Atoms are the nonzero products of each generator or its complement,
/// labeled by sign pattern ('+' for the projector, '-' for its complement,
/// first generator first). Rejects non-commuting generators naming the pair.
Frame frame_from_commuting(std::string name, std::span<const Projector> generators);

/// Atoms are the joint eigenprojectors of observables on pairwise disjoint
/// subsystems, labeled by the outcome tuple joined with commas, enumerated
/// row-major with the first observable slowest.
Frame frame_from_observables(std::string name, std::span<const Observable> observables);

/// One nontrivial element shared by two frames: a subset of each frame's
/// atoms whose projector sums are equal.
struct SharedElement {
  std::vector<std::string> atoms1;
  std::vector<std::string> atoms2;
};

/// All shared elements of two frames on the same space, excluding zero and
/// identity. A nonempty result for distinct frames is what blocks embedding
/// both into one Boolean algebra.
std::vector<SharedElement> intertwinement(const Frame& f1, const Frame& f2);

/// Modality of one frame atom under a state: impossible when the Born
/// probability is below kZeroProbability, possible otherwise.
struct PossibilisticConstraint {
  std::string frame;
  std::vector<std::string> atoms;
  bool impossible = false;
  double probability = 0.0;
};

/// One constraint per atom of each frame, in frame then atom order.
std::vector<PossibilisticConstraint> possibilistic_constraints(const PureState& state,
                                                               std::span<const Frame> frames);

struct Assignment {
  std::string variable;
  std::string label;

  bool operator==(const Assignment&) const = default;
};

/// Outcome combination that no single-world valuation may contain.
struct ForbiddenCombo {
  std::vector<Assignment> clauses;
};

/// Search for a map assigning exactly one outcome label to every variable,
/// avoiding every forbidden combination and honoring every required
/// assignment.
struct ValuationProblem {
  std::vector<std::pair<std::string, std::vector<std::string>>> variables;
  std::vector<ForbiddenCombo> forbidden;
  std::vector<Assignment> required;
};

enum class DeductionKind { Forced, Violation, Exhausted };

/// One step of an unsatisfiability explanation. Forced: a constraint plus
/// the current assignment leaves one variable a single label. Violation: a
/// constraint is fully matched. Exhausted: no propagation chain exists and
/// the exhaustive search is cited instead.
struct DeductionStep {
  DeductionKind kind = DeductionKind::Exhausted;
  std::optional<Assignment> assigned;
  std::optional<std::size_t> constraint_index;
  std::string text;
};

struct ValuationResult {
  bool sat = false;
  std::vector<Assignment> witness;    // SAT: variables in declared order
  std::vector<DeductionStep> trace;   // UNSAT: deduction chain
};

/// Complete search over all one-label-per-variable assignments (guarded by
/// kMaxValuationSpace). SAT returns the lexicographically first witness in
/// declared variable and label order; UNSAT returns a deduction trace
/// starting from the required assignments.
ValuationResult global_valuation(const ValuationProblem& problem);

/// Possibilistic analysis of a scenario's coherent final state over named
/// observable groups, translated into a valuation problem and searched.
struct ContradictionReport {
  std::vector<std::pair<std::string, Distribution>> tables;
  std::vector<Frame> frames;
  std::vector<PossibilisticConstraint> constraints;
  ValuationProblem problem;
  ValuationResult result;
};

/// Builds one frame per observable-name group on the coherent (no-collapse)
/// final state, extracts the impossible atoms as forbidden combinations,
/// and runs the valuation search with the given required assignments.
ContradictionReport contradiction_report(const Scenario& s,
                                         std::span<const std::vector<std::string>> frame_groups,
                                         std::span<const Assignment> required);

/// The built-in analysis: frames (X,Y), (X,B), (A,Y), (A,B) on the final
/// state of the biased-coin scenario, requiring X=ok and Y=ok. UNSAT, with
/// a three-step trace: X=ok forces B=1, Y=ok forces A=h, and (A=h, B=1) is
/// forbidden.
ContradictionReport fr_contradiction_report();

/// Frames over a scenario's coherent final state plus every pairwise
/// intertwinement: which classical descriptions exist and where they
/// overlap.
struct FramesReport {
  struct Pair {
    std::string frame1;
    std::string frame2;
    std::vector<SharedElement> shared;
  };

  std::vector<Frame> frames;
  std::vector<PossibilisticConstraint> constraints;
  std::vector<Pair> intertwinements;
};

FramesReport frames_report(const Scenario& s,
                           std::span<const std::vector<std::string>> frame_groups);

}  // namespace wigner
