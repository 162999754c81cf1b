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

#include <cmath>

#include "doctest.h"

#include "wigner/scenario.hpp"

using namespace wigner;

namespace {

bool has_issue(const std::vector<ValidationIssue>& issues, const std::string& entity,
               const std::string& message_part) {
  for (const auto& issue : issues) {
    if (issue.entity == entity && issue.message.find(message_part) != std::string::npos) {
      return true;
    }
  }
  return false;
}

const Branch* branch_with(const BranchEnsemble& e, const std::string& step,
                          const std::string& label) {
  for (const auto& b : e.branches) {
    const auto it = b.record.find(step);
    if (it != b.record.end() && it->second == label) return &b;
  }
  return nullptr;
}

PureState two_level(const SystemSpec& sys, Complex a, Complex b) {
  Eigen::VectorXcd v(2);
  v << a, b;
  return PureState({sys}, v);
}

}  // namespace

TEST_CASE("built-in scenarios validate cleanly") {
  CHECK(validate_scenario(fr_scenario()).empty());
  CHECK(validate_scenario(singlet_scenario()).empty());
  CHECK_NOTHROW(require_valid(fr_scenario()));
}

TEST_CASE("scenario accessors") {
  const Scenario s = fr_scenario();
  CHECK(s.find_state("initial") != nullptr);
  CHECK(s.find_state("missing") == nullptr);
  CHECK(s.find_observable("X") != nullptr);
  CHECK(s.find_observable("Z") == nullptr);
  CHECK(s.find_unitary("flip") != nullptr);
  CHECK(s.find_perspective("observer") != nullptr);
  CHECK(s.find_step("bob") != nullptr);
  CHECK(s.initial().dimension() == 4);

  Scenario no_initial = s;
  no_initial.states.clear();
  CHECK_THROWS_AS(no_initial.initial(), DomainError);
}

TEST_CASE("validation issue catalogue") {
  const Scenario base = fr_scenario();

  SUBCASE("no systems") {
    Scenario s;
    CHECK(has_issue(validate_scenario(s), "scenario", "no systems declared"));
  }
  SUBCASE("duplicate system") {
    Scenario s = base;
    s.systems.push_back(s.systems[0]);
    CHECK(has_issue(validate_scenario(s), "system coin", "duplicate system name"));
  }
  SUBCASE("missing initial state") {
    Scenario s = base;
    s.states.clear();
    CHECK(has_issue(validate_scenario(s), "scenario", "missing state 'initial'"));
  }
  SUBCASE("state on undeclared system") {
    Scenario s = base;
    const SystemSpec ghost{"ghost", 2, {"a", "b"}};
    s.states.emplace_back("extra", two_level(ghost, 1.0, 0.0));
    CHECK(has_issue(validate_scenario(s), "state extra", "references undeclared system 'ghost'"));
  }
  SUBCASE("state with mismatched system declaration") {
    Scenario s = base;
    const SystemSpec relabeled{"coin", 2, {"x", "y"}};
    s.states.emplace_back("extra", two_level(relabeled, 1.0, 0.0));
    CHECK(has_issue(validate_scenario(s), "state extra",
                    "system 'coin' does not match its declaration"));
  }
  SUBCASE("unnormalized state") {
    Scenario s = base;
    s.states.emplace_back("extra", two_level(s.systems[0], 0.5, 0.5));
    CHECK(has_issue(validate_scenario(s), "state extra", "is not normalized"));
  }
  SUBCASE("initial state must span all systems in order") {
    Scenario s = base;
    s.states[0].second = two_level(s.systems[0], 1.0, 0.0);
    CHECK(has_issue(validate_scenario(s), "state initial",
                    "must be declared on all systems in order"));
  }
  SUBCASE("duplicate observable") {
    Scenario s = base;
    s.observables.push_back(s.observables[0]);
    CHECK(has_issue(validate_scenario(s), "observable A", "duplicate observable name"));
  }
  SUBCASE("controlled unitary guards") {
    Scenario s = base;
    auto& cu = std::get<ControlledUnitary>(s.unitaries[0]);

    SUBCASE("unknown control label") {
      cu.branches[0].first = "x";
      const auto issues = validate_scenario(s);
      CHECK(has_issue(issues, "unitary flip", "unknown control label 'x'"));
      CHECK(has_issue(issues, "unitary flip", "missing branch for control label 'h'"));
    }
    SUBCASE("duplicate branch label") {
      cu.branches[1].first = "h";
      CHECK(has_issue(validate_scenario(s), "unitary flip", "duplicate branch label 'h'"));
    }
    SUBCASE("non-unitary branch") {
      cu.branches[0].second *= 2.0;
      CHECK(has_issue(validate_scenario(s), "unitary flip", "branch 'h' is not unitary"));
    }
    SUBCASE("wrong branch dimension") {
      cu.branches[0].second = Eigen::MatrixXcd::Identity(3, 3);
      CHECK(has_issue(validate_scenario(s), "unitary flip", "branch 'h' has wrong dimension"));
    }
    SUBCASE("control equals target") {
      cu.control = "qubit";
      CHECK(has_issue(validate_scenario(s), "unitary flip", "control and target must differ"));
    }
    SUBCASE("undeclared control") {
      cu.control = "ghost";
      CHECK(has_issue(validate_scenario(s), "unitary flip",
                      "control system 'ghost' is not declared"));
    }
  }
  SUBCASE("plain unitary dimension and unitarity") {
    Scenario s = base;
    Eigen::MatrixXcd bad = Eigen::MatrixXcd::Identity(4, 4);
    bad(0, 0) = 2.0;
    s.unitaries.push_back(
        PlainUnitary{"warp", OperatorMatrix{{s.systems[0], s.systems[1]}, bad}});
    CHECK(has_issue(validate_scenario(s), "unitary warp", "operator is not unitary"));
  }
  SUBCASE("step references") {
    Scenario s = base;
    s.steps.push_back({"ghost", MeasureAction{"Eve", "Z"}});
    CHECK(has_issue(validate_scenario(s), "step ghost", "references unknown observable 'Z'"));

    s.steps.back() = {"ghost2", ApplyAction{"warp"}};
    CHECK(has_issue(validate_scenario(s), "step ghost2", "references unknown unitary 'warp'"));

    s.steps.back() = {"alice", MeasureAction{"Alice", "A"}};
    CHECK(has_issue(validate_scenario(s), "step alice", "duplicate step id"));
  }
  SUBCASE("prepare step state shape") {
    Scenario s = base;
    s.states.emplace_back("wide", s.initial());
    s.steps.push_back({"re", PrepareAction{"qubit", "wide"}});
    CHECK(has_issue(validate_scenario(s), "step re",
                    "prepare state 'wide' must be declared on exactly system 'qubit'"));
  }
  SUBCASE("perspectives") {
    Scenario s = base;
    s.perspectives.clear();
    CHECK(has_issue(validate_scenario(s), "scenario", "at least one perspective is required"));

    s = base;
    s.perspectives.push_back({"extra", {"nope"}});
    CHECK(has_issue(validate_scenario(s), "perspective extra", "references unknown step 'nope'"));

    s = base;
    s.perspectives.push_back({"extra", {"prep"}});
    CHECK(has_issue(validate_scenario(s), "perspective extra",
                    "collapsing step 'prep' is not a measurement step"));
  }
  SUBCASE("require_valid throws the first issue") {
    Scenario s;
    CHECK_THROWS_WITH_AS(require_valid(s), "scenario: no systems declared", DomainError);
  }
}

TEST_CASE("collapse-mode run branches with born weights") {
  const Scenario s = fr_scenario();
  const BranchEnsemble e = run_deterministic(s, *s.find_perspective("observer"));

  REQUIRE(e.branches.size() == 3);
  CHECK(e.total_probability() == doctest::Approx(1.0).epsilon(1e-12));
  for (const auto& b : e.branches) {
    CHECK(b.probability == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
    CHECK(b.state.norm() == doctest::Approx(1.0).epsilon(1e-12));
  }

  const Branch* h0 = branch_with(e, "alice", "h");
  REQUIRE(h0 != nullptr);
  CHECK(h0->record.at("bob") == "0");
  CHECK(std::abs(h0->state.amplitudes()(0) - Complex(1.0, 0.0)) < 1e-12);

  // The (t,0) and (t,1) branches exist; (h,1) was never created.
  CHECK(branch_with(e, "bob", "1") != nullptr);
  for (const auto& b : e.branches) {
    const bool h1 = b.record.at("alice") == "h" && b.record.at("bob") == "1";
    CHECK_FALSE(h1);
  }
}

TEST_CASE("unitary-mode run keeps one coherent branch") {
  const Scenario s = fr_scenario();
  const BranchEnsemble e = run_deterministic(s, *s.find_perspective("superobserver"));

  REQUIRE(e.branches.size() == 1);
  const Branch& b = e.branches[0];
  CHECK(b.probability == doctest::Approx(1.0));
  CHECK(b.record.empty());

  const double a = std::sqrt(1.0 / 3.0);
  CHECK(std::abs(b.state.amplitudes()(0) - Complex(a, 0.0)) < 1e-9);
  CHECK(std::abs(b.state.amplitudes()(1)) < 1e-9);
  CHECK(std::abs(b.state.amplitudes()(2) - Complex(a, 0.0)) < 1e-9);
  CHECK(std::abs(b.state.amplitudes()(3) - Complex(a, 0.0)) < 1e-9);
}

TEST_CASE("zero-weight branches are pruned") {
  Scenario s = fr_scenario();
  Eigen::VectorXcd init = Eigen::VectorXcd::Zero(4);
  init(0) = 1.0;  // exactly |h,0>
  s.states[0].second = PureState({s.systems[0], s.systems[1]}, init);

  const BranchEnsemble e = run_deterministic(s, *s.find_perspective("observer"));
  REQUIRE(e.branches.size() == 1);
  CHECK(e.branches[0].record.at("alice") == "h");
  CHECK(e.branches[0].record.at("bob") == "0");
}

TEST_CASE("controlled unitary reads the recorded outcome when collapsed") {
  // With the coin collapsed to t, only the rotation branch acts: the qubit
  // ends in the equal superposition and Bob's outcomes split 1/2 - 1/2.
  const Scenario s = fr_scenario();
  const BranchEnsemble e = run_deterministic(s, *s.find_perspective("observer"));
  const Branch* t0 = branch_with(e, "bob", "0");
  const Branch* t1 = branch_with(e, "bob", "1");
  REQUIRE(t0 != nullptr);
  REQUIRE(t1 != nullptr);

  // Under the cut, P(bob=0 | alice=t) = 1/2 so both t-branches carry
  // (2/3) * (1/2) = 1/3.
  CHECK(t1->probability == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("controlled unitary applies coherently when the control is not collapsed") {
  Scenario s = fr_scenario();
  // Only Bob's measurement collapses; Alice's stays unitary, so the coin
  // keeps its superposition and the controlled operator acts as a whole.
  s.perspectives.push_back({"bob_only", {"bob"}});
  const BranchEnsemble e = run_deterministic(s, *s.find_perspective("bob_only"));

  REQUIRE(e.branches.size() == 2);
  const Branch* b0 = branch_with(e, "bob", "0");
  const Branch* b1 = branch_with(e, "bob", "1");
  REQUIRE(b0 != nullptr);
  REQUIRE(b1 != nullptr);
  CHECK(b0->probability == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK(b1->probability == doctest::Approx(1.0 / 3.0).epsilon(1e-12));

  // The bob=0 branch keeps the coin coherent: (|h,0> + |t,0>) renormalized.
  const double r = std::sqrt(0.5);
  CHECK(std::abs(b0->state.amplitudes()(0) - Complex(r, 0.0)) < 1e-12);
  CHECK(std::abs(b0->state.amplitudes()(2) - Complex(r, 0.0)) < 1e-12);
}

TEST_CASE("recorded control outcome must name a branch") {
  Scenario s = fr_scenario();
  // Measure the coin in the conjugate basis instead: outcomes ok/fail do not
  // match the branch labels h/t.
  auto& measure = std::get<MeasureAction>(s.steps[0].action);
  measure.observable = "X";
  REQUIRE(validate_scenario(s).empty());

  CHECK_THROWS_WITH_AS(
      run_deterministic(s, *s.find_perspective("observer")),
      "controlled unitary 'flip': recorded control outcome 'ok' does not name a branch",
      DomainError);

  // The fully unitary perspective never consults the record.
  CHECK_NOTHROW(run_deterministic(s, *s.find_perspective("superobserver")));
}

TEST_CASE("prepare replaces an unentangled factor") {
  Scenario s = fr_scenario();
  const SystemSpec qubit = s.systems[1];
  const double r = std::sqrt(0.5);
  s.states.emplace_back("plus", two_level(qubit, r, r));
  s.steps.push_back({"reset", PrepareAction{"qubit", "plus"}});
  REQUIRE(validate_scenario(s).empty());

  // After Alice and Bob both collapse, every branch is a product state, so
  // the reset is legal and forces the qubit into |+>.
  const BranchEnsemble e = run_deterministic(s, *s.find_perspective("observer"));
  REQUIRE(e.branches.size() == 3);
  for (const auto& b : e.branches) {
    const Eigen::VectorXcd& amps = b.state.amplitudes();
    const bool heads = b.record.at("alice") == "h";
    const Eigen::Index base = heads ? 0 : 2;
    CHECK(std::abs(amps(base) - Complex(r, 0.0)) < 1e-12);
    CHECK(std::abs(amps(base + 1) - Complex(r, 0.0)) < 1e-12);
  }

  // In the coherent run the qubit is entangled with the coin by then.
  CHECK_THROWS_WITH_AS(
      run_deterministic(s, *s.find_perspective("superobserver")),
      "prepare step 'reset': system 'qubit' is entangled with the rest of the state",
      DomainError);
}

TEST_CASE("event probability exposes the central clash") {
  const Scenario s = fr_scenario();
  const std::pair<Observable, std::string> event[] = {
      {*s.find_observable("X"), "ok"},
      {*s.find_observable("Y"), "ok"},
  };
  const double p_observer = event_probability(s, *s.find_perspective("observer"), event);
  const double p_super = event_probability(s, *s.find_perspective("superobserver"), event);
  CHECK(p_observer == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(p_super == doctest::Approx(1.0 / 12.0).epsilon(1e-12));

  const std::pair<Observable, std::string> overlapping[] = {
      {*s.find_observable("X"), "ok"},
      {*s.find_observable("A"), "h"},
  };
  CHECK_THROWS_WITH_AS(event_probability(s, *s.find_perspective("observer"), overlapping),
                       "event clauses share system 'coin'", DomainError);

  const std::pair<Observable, std::string> bad_label[] = {{*s.find_observable("X"), "nope"}};
  CHECK_THROWS_AS(event_probability(s, *s.find_perspective("observer"), bad_label),
                  DomainError);
}

TEST_CASE("ensemble joint distribution differs between perspectives") {
  const Scenario s = fr_scenario();
  const Observable obs[] = {*s.find_observable("X"), *s.find_observable("Y")};

  const Distribution collapsed =
      joint_distribution(run_deterministic(s, *s.find_perspective("observer")), obs);
  // Every branch is a product state with uniform conjugate-basis statistics.
  for (const auto& [labels, p] : collapsed.support()) {
    CHECK(p == doctest::Approx(0.25).epsilon(1e-12));
  }

  const Distribution coherent =
      joint_distribution(run_deterministic(s, *s.find_perspective("superobserver")), obs);
  const std::vector<std::string> okok{"ok", "ok"};
  const std::vector<std::string> failfail{"fail", "fail"};
  CHECK(coherent.probability(okok) == doctest::Approx(1.0 / 12.0).epsilon(1e-12));
  CHECK(coherent.probability(failfail) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("sampled runs are reproducible and converge") {
  const Scenario s = fr_scenario();
  const Perspective& p = *s.find_perspective("superobserver");
  const Observable obs[] = {*s.find_observable("X"), *s.find_observable("Y")};

  const Distribution d1 = sample_runs(s, p, 5000, 12345, obs);
  const Distribution d2 = sample_runs(s, p, 5000, 12345, obs);
  REQUIRE(d1.support().size() == d2.support().size());
  for (std::size_t i = 0; i < d1.support().size(); ++i) {
    CHECK(d1.support()[i].first == d2.support()[i].first);
    // Bit-for-bit: same seed, same counts.
    CHECK(d1.support()[i].second == d2.support()[i].second);
  }
  CHECK(d1.sum() == doctest::Approx(1.0).epsilon(1e-12));

  const std::vector<std::string> okok{"ok", "ok"};
  CHECK(d1.probability(okok) == doctest::Approx(1.0 / 12.0).epsilon(0.35));

  const Distribution other = sample_runs(s, p, 5000, 54321, obs);
  bool any_difference = false;
  for (std::size_t i = 0; i < d1.support().size(); ++i) {
    any_difference = any_difference || d1.support()[i].second != other.support()[i].second;
  }
  CHECK(any_difference);

  CHECK_THROWS_WITH_AS(sample_runs(s, p, 0, 1, obs), "sample count must be positive",
                       DomainError);
  CHECK_THROWS_WITH_AS(sample_runs(s, p, 10, 1, {}), "no observables to sample", DomainError);
}

TEST_CASE("structural equality") {
  const Scenario a = fr_scenario();
  CHECK(structurally_equal(a, fr_scenario()));

  SUBCASE("system rename") {
    Scenario b = fr_scenario();
    b.systems[0].name = "penny";
    CHECK_FALSE(structurally_equal(a, b));
  }
  SUBCASE("amplitude perturbations respect the tolerance") {
    Scenario b = fr_scenario();
    b.states[0].second.amplitudes()(0) += 1e-14;
    CHECK(structurally_equal(a, b));
    b.states[0].second.amplitudes()(0) += 1e-6;
    CHECK_FALSE(structurally_equal(a, b));
  }
  SUBCASE("observable order matters") {
    Scenario b = fr_scenario();
    std::swap(b.observables[0], b.observables[1]);
    CHECK_FALSE(structurally_equal(a, b));
  }
  SUBCASE("perspective sets matter") {
    Scenario b = fr_scenario();
    b.perspectives[0].collapsing_steps.erase("bob");
    CHECK_FALSE(structurally_equal(a, b));
  }
  SUBCASE("branch matrices matter") {
    Scenario b = fr_scenario();
    std::get<ControlledUnitary>(b.unitaries[0]).branches[0].second =
        -Eigen::MatrixXcd::Identity(2, 2);
    CHECK_FALSE(structurally_equal(a, b));
  }
  SUBCASE("extra step") {
    Scenario b = fr_scenario();
    b.steps.push_back({"again", ApplyAction{"flip"}});
    CHECK_FALSE(structurally_equal(a, b));
  }
}

TEST_CASE("in-branch statistics of the measured pair are perspective-independent") {
  // The conjugate super-observables disagree between perspectives, but the
  // directly measured pair does not: both cut placements leave the same
  // (A,B) table, zeros included.
  const Scenario s = fr_scenario();
  const Observable obs[] = {*s.find_observable("A"), *s.find_observable("B")};

  const Distribution collapsed =
      joint_distribution(run_deterministic(s, *s.find_perspective("observer")), obs);
  const Distribution coherent =
      joint_distribution(run_deterministic(s, *s.find_perspective("superobserver")), obs);

  const std::vector<std::pair<std::vector<std::string>, double>> expected{
      {{"h", "0"}, 1.0 / 3.0},
      {{"h", "1"}, 0.0},
      {{"t", "0"}, 1.0 / 3.0},
      {{"t", "1"}, 1.0 / 3.0}};
  for (const auto& [labels, p] : expected) {
    CHECK(collapsed.probability(labels) == doctest::Approx(p).epsilon(1e-9));
    CHECK(coherent.probability(labels) == doctest::Approx(p).epsilon(1e-9));
    CHECK(collapsed.probability(labels) ==
          doctest::Approx(coherent.probability(labels)).epsilon(1e-12));
  }
}
