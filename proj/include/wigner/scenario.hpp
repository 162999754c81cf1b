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

#include <cstdint>
#include <map>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "wigner/measurement.hpp"

namespace wigner {

/// Measurement of a named observable, attributed to an agent.
struct MeasureAction {
  std::string agent;
  std::string observable;
};

/// Application of a named unitary declaration.
struct ApplyAction {
  std::string unitary;
};

/// Re-preparation of a single system in a named state. Valid only while the
/// system is unentangled from the rest; its current factor is discarded.
struct PrepareAction {
  std::string system;
  std::string state;
};

struct Step {
  std::string id;
  std::variant<MeasureAction, ApplyAction, PrepareAction> action;
};

/// Unitary on an explicit subsystem list. Programmatic only; the scenario
/// grammar expresses controlled unitaries.
struct PlainUnitary {
  std::string name;
  OperatorMatrix op;
};

/// One unitary on the target per control basis label. In collapse mode the
/// branch selected by the recorded control outcome is applied; in unitary
/// mode the whole controlled operator acts coherently.
struct ControlledUnitary {
  std::string name;
  std::string control;
  std::string target;
  std::vector<std::pair<std::string, Eigen::MatrixXcd>> branches;
};

using UnitaryDecl = std::variant<PlainUnitary, ControlledUnitary>;

/// Cut placement: the subset of Measure steps treated as producing actual
/// (collapsing) outcomes. Everything else stays in unitary description.
struct Perspective {
  std::string name;
  std::set<std::string> collapsing_steps;
};

/// Ordered preparation/unitary/measurement protocol with named observables,
/// named states (one of which must be "initial"), and at least one
/// perspective.
struct Scenario {
  std::vector<SystemSpec> systems;
  std::vector<std::pair<std::string, PureState>> states;
  std::vector<Observable> observables;
  std::vector<UnitaryDecl> unitaries;
  std::vector<Step> steps;
  std::vector<Perspective> perspectives;

  const PureState& initial() const;
  const PureState* find_state(std::string_view name) const;
  const Observable* find_observable(std::string_view name) const;
  const UnitaryDecl* find_unitary(std::string_view name) const;
  const Perspective* find_perspective(std::string_view name) const;
  const Step* find_step(std::string_view id) const;
};

/// One object per violated invariant. `entity` names the offending
/// declaration ("state initial", "observable X", ...) so callers can map
/// issues back to source positions.
struct ValidationIssue {
  std::string entity;
  std::string message;
};

/// Checks every scenario invariant: system specs, the dimension guard,
/// normalization of named states, reference resolution in steps and
/// perspectives, branch unitarity and label coverage of controlled
/// unitaries. Returns an empty list when the scenario is well-formed.
std::vector<ValidationIssue> validate_scenario(const Scenario& s);

/// Throws DomainError with the first issue if validation fails.
void require_valid(const Scenario& s);

/// The built-in biased-coin/qubit protocol: Alice measures the coin
/// observable A on sqrt(1/3)|h> + sqrt(2/3)|t>, a controlled preparation
/// writes the qubit (identity on h, Hadamard-type map on t), Bob measures B.
/// Super-observables X and Y live in the conjugate bases. Perspectives:
/// "observer" collapses both measurements, "superobserver" collapses none.
Scenario fr_scenario();

/// Two qubits in the singlet state with the four standard optimal CHSH
/// settings (A0, A1 on the left; B0, B1 on the right). No steps; one
/// all-unitary perspective.
Scenario singlet_scenario();

/// One coherent history: recorded collapse outcomes, its ensemble weight,
/// and the final state.
struct Branch {
  std::map<std::string, std::string> record;  // step id -> outcome label
  double probability = 1.0;
  PureState state;
};

struct BranchEnsemble {
  std::vector<Branch> branches;

  double total_probability() const;
};

/// Executes the steps in order under the given cut placement. Collapsing
/// Measure steps branch the ensemble with Born weights and Lueders
/// post-states; non-collapsing ones leave every branch untouched and record
/// nothing. Branches below kBranchPrune are dropped.
BranchEnsemble run_deterministic(const Scenario& s, const Perspective& p);

/// Ensemble-weighted joint Born probability of the event (a conjunction of
/// observable = outcome clauses on disjoint subsystems) on the final states.
double event_probability(const Scenario& s, const Perspective& p,
                         std::span<const std::pair<Observable, std::string>> event);

/// n end-to-end sampled runs; run i uses a stream derived from (seed, i).
/// The final_event_obs are sampled on each run's final state; returns the
/// outcome-tuple frequency table over all combinations.
Distribution sample_runs(const Scenario& s, const Perspective& p, std::size_t n,
                         std::uint64_t seed, std::span<const Observable> final_event_obs);

/// Ensemble-weighted mixture of the per-branch joint distributions.
Distribution joint_distribution(const BranchEnsemble& ensemble,
                                std::span<const Observable> observables);

/// Field-by-field comparison; numeric fields within tol.
bool structurally_equal(const Scenario& a, const Scenario& b, double tol = 1e-12);

}  // namespace wigner
