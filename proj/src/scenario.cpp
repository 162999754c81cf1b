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

#include "wigner/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <utility>

#include "wigner/random.hpp"

namespace wigner {

namespace {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", v);
  return buf;
}

const SystemSpec* find_system_spec(const Scenario& s, std::string_view name) {
  for (const auto& sys : s.systems) {
    if (sys.name == name) return &sys;
  }
  return nullptr;
}

std::string unitary_name(const UnitaryDecl& u) {
  if (const auto* plain = std::get_if<PlainUnitary>(&u)) return plain->name;
  return std::get<ControlledUnitary>(u).name;
}

}  // namespace

const PureState& Scenario::initial() const {
  const PureState* st = find_state("initial");
  if (st == nullptr) throw DomainError("scenario has no state named 'initial'");
  return *st;
}

const PureState* Scenario::find_state(std::string_view name) const {
  for (const auto& [n, st] : states) {
    if (n == name) return &st;
  }
  return nullptr;
}

const Observable* Scenario::find_observable(std::string_view name) const {
  for (const auto& obs : observables) {
    if (obs.name == name) return &obs;
  }
  return nullptr;
}

const UnitaryDecl* Scenario::find_unitary(std::string_view name) const {
  for (const auto& u : unitaries) {
    if (unitary_name(u) == name) return &u;
  }
  return nullptr;
}

const Perspective* Scenario::find_perspective(std::string_view name) const {
  for (const auto& p : perspectives) {
    if (p.name == name) return &p;
  }
  return nullptr;
}

const Step* Scenario::find_step(std::string_view id) const {
  for (const auto& st : steps) {
    if (st.id == id) return &st;
  }
  return nullptr;
}

namespace {

void validate_state_decl(const Scenario& s, const std::string& name, const PureState& st,
                         std::vector<ValidationIssue>& issues) {
  const std::string entity = "state " + name;
  for (const auto& sys : st.systems()) {
    const SystemSpec* declared = find_system_spec(s, sys.name);
    if (declared == nullptr) {
      issues.push_back({entity, "references undeclared system '" + sys.name + "'"});
    } else if (!(sys == *declared)) {
      issues.push_back({entity, "system '" + sys.name + "' does not match its declaration"});
    }
  }
  const double norm = st.norm();
  if (std::abs(norm - 1.0) > kTol) {
    issues.push_back({entity, "is not normalized (norm " + format_double(norm) + ")"});
  }
}

}  // namespace

std::vector<ValidationIssue> validate_scenario(const Scenario& s) {
  std::vector<ValidationIssue> issues;

  if (s.systems.empty()) {
    issues.push_back({"scenario", "no systems declared"});
  }
  std::set<std::string> system_names;
  long composite = 1;
  for (const auto& sys : s.systems) {
    try {
      sys.validate();
    } catch (const std::exception& e) {
      issues.push_back({"system " + sys.name, e.what()});
      continue;
    }
    if (!system_names.insert(sys.name).second) {
      issues.push_back({"system " + sys.name, "duplicate system name"});
    }
    if (composite <= kMaxCompositeDimension) composite *= sys.dimension;
  }
  if (composite > kMaxCompositeDimension) {
    issues.push_back({"scenario", "composite dimension exceeds " +
                                      std::to_string(kMaxCompositeDimension)});
  }

  std::set<std::string> state_names;
  for (const auto& [name, st] : s.states) {
    if (!state_names.insert(name).second) {
      issues.push_back({"state " + name, "duplicate state name"});
      continue;
    }
    validate_state_decl(s, name, st, issues);
  }
  if (state_names.count("initial") == 0) {
    issues.push_back({"scenario", "missing state 'initial'"});
  } else {
    const PureState* init = s.find_state("initial");
    bool full_order = init->systems().size() == s.systems.size();
    for (std::size_t i = 0; full_order && i < s.systems.size(); ++i) {
      full_order = init->systems()[i] == s.systems[i];
    }
    if (!full_order) {
      issues.push_back({"state initial", "must be declared on all systems in order"});
    }
  }

  std::set<std::string> observable_names;
  for (const auto& obs : s.observables) {
    const std::string entity = "observable " + obs.name;
    if (!observable_names.insert(obs.name).second) {
      issues.push_back({entity, "duplicate observable name"});
      continue;
    }
    for (const auto& sys : obs.systems) {
      const SystemSpec* declared = find_system_spec(s, sys.name);
      if (declared == nullptr) {
        issues.push_back({entity, "references undeclared system '" + sys.name + "'"});
      } else if (!(sys == *declared)) {
        issues.push_back({entity, "system '" + sys.name + "' does not match its declaration"});
      }
    }
  }

  std::set<std::string> unitary_names;
  for (const auto& decl : s.unitaries) {
    const std::string name = unitary_name(decl);
    const std::string entity = "unitary " + name;
    if (!unitary_names.insert(name).second) {
      issues.push_back({entity, "duplicate unitary name"});
      continue;
    }
    if (const auto* plain = std::get_if<PlainUnitary>(&decl)) {
      long dim = 1;
      bool systems_ok = true;
      for (const auto& sys : plain->op.systems) {
        const SystemSpec* declared = find_system_spec(s, sys.name);
        if (declared == nullptr || !(sys == *declared)) {
          issues.push_back({entity, "references undeclared system '" + sys.name + "'"});
          systems_ok = false;
        } else {
          dim *= sys.dimension;
        }
      }
      if (systems_ok) {
        if (plain->op.entries.rows() != dim || plain->op.entries.cols() != dim) {
          issues.push_back({entity, "operator dimension does not match its systems"});
        } else if (!is_unitary(plain->op)) {
          issues.push_back({entity, "operator is not unitary"});
        }
      }
      continue;
    }
    const auto& cu = std::get<ControlledUnitary>(decl);
    const SystemSpec* control = find_system_spec(s, cu.control);
    const SystemSpec* target = find_system_spec(s, cu.target);
    if (control == nullptr) {
      issues.push_back({entity, "control system '" + cu.control + "' is not declared"});
    }
    if (target == nullptr) {
      issues.push_back({entity, "target system '" + cu.target + "' is not declared"});
    }
    if (control != nullptr && target != nullptr && cu.control == cu.target) {
      issues.push_back({entity, "control and target must differ"});
    }
    if (control == nullptr || target == nullptr) continue;
    std::set<std::string> seen;
    for (const auto& [label, matrix] : cu.branches) {
      if (control->label_index(label) < 0) {
        issues.push_back({entity, "unknown control label '" + label + "'"});
        continue;
      }
      if (!seen.insert(label).second) {
        issues.push_back({entity, "duplicate branch label '" + label + "'"});
        continue;
      }
      if (matrix.rows() != target->dimension || matrix.cols() != target->dimension) {
        issues.push_back({entity, "branch '" + label + "' has wrong dimension"});
      } else if (!is_unitary(OperatorMatrix{{*target}, matrix})) {
        issues.push_back({entity, "branch '" + label + "' is not unitary"});
      }
    }
    for (const auto& label : control->basis_labels) {
      if (seen.count(label) == 0) {
        issues.push_back({entity, "missing branch for control label '" + label + "'"});
      }
    }
  }

  std::set<std::string> step_ids;
  std::set<std::string> measure_ids;
  for (const auto& step : s.steps) {
    const std::string entity = "step " + step.id;
    if (!step_ids.insert(step.id).second) {
      issues.push_back({entity, "duplicate step id"});
      continue;
    }
    if (const auto* m = std::get_if<MeasureAction>(&step.action)) {
      measure_ids.insert(step.id);
      if (s.find_observable(m->observable) == nullptr) {
        issues.push_back({entity, "references unknown observable '" + m->observable + "'"});
      }
    } else if (const auto* a = std::get_if<ApplyAction>(&step.action)) {
      if (s.find_unitary(a->unitary) == nullptr) {
        issues.push_back({entity, "references unknown unitary '" + a->unitary + "'"});
      }
    } else {
      const auto& pr = std::get<PrepareAction>(step.action);
      const SystemSpec* sys = find_system_spec(s, pr.system);
      if (sys == nullptr) {
        issues.push_back({entity, "references undeclared system '" + pr.system + "'"});
      }
      const PureState* st = s.find_state(pr.state);
      if (st == nullptr) {
        issues.push_back({entity, "references unknown state '" + pr.state + "'"});
      } else if (sys != nullptr &&
                 (st->systems().size() != 1 || !(st->systems()[0] == *sys))) {
        issues.push_back(
            {entity, "prepare state '" + pr.state + "' must be declared on exactly system '" +
                         pr.system + "'"});
      }
    }
  }

  if (s.perspectives.empty()) {
    issues.push_back({"scenario", "at least one perspective is required"});
  }
  std::set<std::string> perspective_names;
  for (const auto& p : s.perspectives) {
    const std::string entity = "perspective " + p.name;
    if (!perspective_names.insert(p.name).second) {
      issues.push_back({entity, "duplicate perspective name"});
      continue;
    }
    for (const auto& id : p.collapsing_steps) {
      if (step_ids.count(id) == 0) {
        issues.push_back({entity, "references unknown step '" + id + "'"});
      } else if (measure_ids.count(id) == 0) {
        issues.push_back({entity, "collapsing step '" + id + "' is not a measurement step"});
      }
    }
  }

  return issues;
}

void require_valid(const Scenario& s) {
  const auto issues = validate_scenario(s);
  if (!issues.empty()) {
    throw DomainError(issues.front().entity + ": " + issues.front().message);
  }
}

Scenario fr_scenario() {
  const SystemSpec coin{"coin", 2, {"h", "t"}};
  const SystemSpec qubit{"qubit", 2, {"0", "1"}};
  const std::vector<SystemSpec> both{coin, qubit};

  Eigen::VectorXcd init = Eigen::VectorXcd::Zero(4);
  init(0) = std::sqrt(1.0 / 3.0);  // (h,0)
  init(2) = std::sqrt(2.0 / 3.0);  // (t,0)

  const double r = std::sqrt(0.5);
  auto coin_state = [&](Complex ah, Complex at) {
    Eigen::VectorXcd v(2);
    v << ah, at;
    return PureState({coin}, v);
  };
  auto qubit_state = [&](Complex a0, Complex a1) {
    Eigen::VectorXcd v(2);
    v << a0, a1;
    return PureState({qubit}, v);
  };

  Scenario s;
  s.systems = both;
  s.states.emplace_back("initial", PureState(both, init));
  s.observables.push_back(observable_from_eigenstates(
      "A", {{"h", coin_state(1.0, 0.0)}, {"t", coin_state(0.0, 1.0)}}));
  s.observables.push_back(observable_from_eigenstates(
      "B", {{"0", qubit_state(1.0, 0.0)}, {"1", qubit_state(0.0, 1.0)}}));
  s.observables.push_back(observable_from_eigenstates(
      "X", {{"ok", coin_state(r, -r)}, {"fail", coin_state(r, r)}}));
  s.observables.push_back(observable_from_eigenstates(
      "Y", {{"ok", qubit_state(r, -r)}, {"fail", qubit_state(r, r)}}));

  Eigen::MatrixXcd id2 = Eigen::MatrixXcd::Identity(2, 2);
  Eigen::MatrixXcd had(2, 2);
  had << r, r, r, -r;  // columns are the images of |0> and |1>
  s.unitaries.push_back(ControlledUnitary{"flip", "coin", "qubit", {{"h", id2}, {"t", had}}});

  s.steps.push_back({"alice", MeasureAction{"Alice", "A"}});
  s.steps.push_back({"prep", ApplyAction{"flip"}});
  s.steps.push_back({"bob", MeasureAction{"Bob", "B"}});

  s.perspectives.push_back({"observer", {"alice", "bob"}});
  s.perspectives.push_back({"superobserver", {}});
  return s;
}

Scenario singlet_scenario() {
  const SystemSpec left{"left", 2, {"u", "d"}};
  const SystemSpec right{"right", 2, {"u", "d"}};

  Eigen::VectorXcd init = Eigen::VectorXcd::Zero(4);
  const double r = std::sqrt(0.5);
  init(1) = r;   // (u,d)
  init(2) = -r;  // (d,u)

  // Measurement direction at Bloch angle theta in the x-z plane has
  // eigenstates cos(theta/2)|u> + sin(theta/2)|d> and its orthogonal
  // complement. Settings 0, pi/2 on the left and +-pi/4 on the right
  // realize the maximal CHSH violation on the singlet.
  auto direction = [](const SystemSpec& sys, const std::string& name, double bloch_angle) {
    const double c = std::cos(bloch_angle / 2.0);
    const double sn = std::sin(bloch_angle / 2.0);
    Eigen::VectorXcd plus(2), minus(2);
    plus << c, sn;
    minus << -sn, c;
    return observable_from_eigenstates(
        name, {{"plus", PureState({sys}, plus)}, {"minus", PureState({sys}, minus)}});
  };

  const double pi = std::acos(-1.0);
  Scenario s;
  s.systems = {left, right};
  s.states.emplace_back("initial", PureState({left, right}, init));
  s.observables.push_back(direction(left, "A0", 0.0));
  s.observables.push_back(direction(left, "A1", pi / 2.0));
  s.observables.push_back(direction(right, "B0", pi / 4.0));
  s.observables.push_back(direction(right, "B1", -pi / 4.0));
  s.perspectives.push_back({"unitary", {}});
  return s;
}

double BranchEnsemble::total_probability() const {
  double total = 0.0;
  for (const auto& b : branches) total += b.probability;
  return total;
}

namespace {

// Index of the last step before `before` that is a collapsing measurement
// of an observable acting exactly on the control system, or nullopt.
std::optional<std::string> control_record_step(const Scenario& s, const Perspective& p,
                                               std::size_t before,
                                               const ControlledUnitary& cu) {
  const SystemSpec* control = find_system_spec(s, cu.control);
  if (control == nullptr) return std::nullopt;
  std::optional<std::string> found;
  for (std::size_t k = 0; k < before; ++k) {
    const auto* m = std::get_if<MeasureAction>(&s.steps[k].action);
    if (m == nullptr || p.collapsing_steps.count(s.steps[k].id) == 0) continue;
    const Observable* obs = s.find_observable(m->observable);
    if (obs == nullptr) continue;
    if (obs->systems.size() == 1 && obs->systems[0] == *control) {
      found = s.steps[k].id;
    }
  }
  return found;
}

const Eigen::MatrixXcd& branch_matrix(const ControlledUnitary& cu, std::string_view label) {
  for (const auto& [l, m] : cu.branches) {
    if (l == label) return m;
  }
  throw DomainError("controlled unitary '" + cu.name + "': recorded control outcome '" +
                    std::string(label) + "' does not name a branch");
}

// Sigma_c |c><c| (x) U_c on [control, target], control index slowest.
OperatorMatrix coherent_controlled(const Scenario& s, const ControlledUnitary& cu) {
  const SystemSpec& control = *find_system_spec(s, cu.control);
  const SystemSpec& target = *find_system_spec(s, cu.target);
  const int dt = target.dimension;
  Eigen::MatrixXcd full =
      Eigen::MatrixXcd::Zero(control.dimension * dt, control.dimension * dt);
  for (int c = 0; c < control.dimension; ++c) {
    full.block(c * dt, c * dt, dt, dt) = branch_matrix(cu, control.basis_labels[c]);
  }
  return OperatorMatrix{{control, target}, full};
}

// Applies the unitary referenced by an apply step at position step_index to
// one branch state, honoring a collapsed control record when present.
void apply_unitary_step(const Scenario& s, const Perspective& p, std::size_t step_index,
                        const ApplyAction& act,
                        const std::map<std::string, std::string>& record, PureState& state) {
  const UnitaryDecl& decl = *s.find_unitary(act.unitary);
  if (const auto* plain = std::get_if<PlainUnitary>(&decl)) {
    state = apply(plain->op, state);
    return;
  }
  const auto& cu = std::get<ControlledUnitary>(decl);
  const auto recorded = control_record_step(s, p, step_index, cu);
  if (recorded.has_value()) {
    const SystemSpec& target = *find_system_spec(s, cu.target);
    const Eigen::MatrixXcd& u = branch_matrix(cu, record.at(*recorded));
    state = apply(OperatorMatrix{{target}, u}, state);
    return;
  }
  state = apply(coherent_controlled(s, cu), state);
}

// Swaps the factor held by one unentangled system for a fresh single-system
// state. The remainder factor keeps a canonical phase (largest-magnitude
// component real positive).
PureState replace_factor(const PureState& psi, const SystemSpec& target,
                         const PureState& fresh, const std::string& step_id) {
  const auto& systems = psi.systems();
  std::size_t t = 0;
  while (t < systems.size() && !(systems[t] == target)) ++t;
  if (t == systems.size()) {
    throw DomainError("prepare step '" + step_id + "': system '" + target.name +
                      "' is not part of the state");
  }

  Eigen::Index stride = 1;
  for (std::size_t k = systems.size(); k-- > t + 1;) stride *= systems[k].dimension;
  const Eigen::Index d = target.dimension;
  const Eigen::Index rest = psi.dimension() / d;

  // base(r) for each multi-index over the non-target systems.
  std::vector<Eigen::Index> base(rest);
  {
    std::vector<Eigen::Index> digits(systems.size(), 0);
    for (Eigen::Index r = 0; r < rest; ++r) {
      Eigen::Index offset = 0;
      Eigen::Index s_stride = 1;
      for (std::size_t k = systems.size(); k-- > 0;) {
        if (k != t) offset += digits[k] * s_stride;
        s_stride *= systems[k].dimension;
      }
      base[r] = offset;
      for (std::size_t k = systems.size(); k-- > 0;) {
        if (k == t) continue;
        if (++digits[k] < systems[k].dimension) break;
        digits[k] = 0;
      }
    }
  }

  Eigen::MatrixXcd m(d, rest);
  for (Eigen::Index x = 0; x < d; ++x) {
    for (Eigen::Index r = 0; r < rest; ++r) m(x, r) = psi.amplitudes()(base[r] + x * stride);
  }

  Eigen::Index pivot = 0;
  m.rowwise().squaredNorm().maxCoeff(&pivot);
  Eigen::VectorXcd rest_factor = m.row(pivot).transpose();
  rest_factor /= rest_factor.norm();
  Eigen::Index lead = 0;
  rest_factor.cwiseAbs().maxCoeff(&lead);
  rest_factor *= std::abs(rest_factor(lead)) / rest_factor(lead);

  Eigen::VectorXcd u(d);
  for (Eigen::Index x = 0; x < d; ++x) {
    u(x) = (m.row(x).transpose().cwiseProduct(rest_factor.conjugate())).sum();
  }
  const double residual = (m - u * rest_factor.transpose()).cwiseAbs().maxCoeff();
  if (residual > kTol) {
    throw DomainError("prepare step '" + step_id + "': system '" + target.name +
                      "' is entangled with the rest of the state");
  }

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.dimension());
  for (Eigen::Index r = 0; r < rest; ++r) {
    for (Eigen::Index x = 0; x < d; ++x) {
      out(base[r] + x * stride) = fresh.amplitudes()(x) * rest_factor(r);
    }
  }
  return PureState(systems, out);
}

void require_valid_run(const Scenario& s, const Perspective& p) {
  require_valid(s);
  for (const auto& id : p.collapsing_steps) {
    const Step* step = s.find_step(id);
    if (step == nullptr) {
      throw DomainError("perspective " + p.name + ": references unknown step '" + id + "'");
    }
    if (!std::holds_alternative<MeasureAction>(step->action)) {
      throw DomainError("perspective " + p.name + ": collapsing step '" + id +
                        "' is not a measurement step");
    }
  }
}

}  // namespace

BranchEnsemble run_deterministic(const Scenario& s, const Perspective& p) {
  require_valid_run(s, p);

  BranchEnsemble ensemble;
  ensemble.branches.push_back(Branch{{}, 1.0, s.initial()});

  for (std::size_t k = 0; k < s.steps.size(); ++k) {
    const Step& step = s.steps[k];
    if (const auto* m = std::get_if<MeasureAction>(&step.action)) {
      if (p.collapsing_steps.count(step.id) == 0) continue;
      const Observable& obs = *s.find_observable(m->observable);
      std::vector<Branch> next;
      for (const auto& branch : ensemble.branches) {
        for (const auto& [label, proj] : obs.outcomes) {
          PureState projected = apply(proj.op(), branch.state);
          const double weight = std::real(inner_product(branch.state, projected));
          const double prob = branch.probability * weight;
          if (prob <= kBranchPrune) continue;
          Branch child{branch.record, prob, normalize(projected)};
          child.record[step.id] = label;
          next.push_back(std::move(child));
        }
      }
      ensemble.branches = std::move(next);
    } else if (const auto* a = std::get_if<ApplyAction>(&step.action)) {
      for (auto& branch : ensemble.branches) {
        apply_unitary_step(s, p, k, *a, branch.record, branch.state);
      }
    } else {
      const auto& pr = std::get<PrepareAction>(step.action);
      const SystemSpec& target = *find_system_spec(s, pr.system);
      const PureState& fresh = *s.find_state(pr.state);
      for (auto& branch : ensemble.branches) {
        branch.state = replace_factor(branch.state, target, fresh, step.id);
      }
    }
  }
  return ensemble;
}

double event_probability(const Scenario& s, const Perspective& p,
                         std::span<const std::pair<Observable, std::string>> event) {
  for (std::size_t i = 0; i < event.size(); ++i) {
    for (std::size_t j = i + 1; j < event.size(); ++j) {
      for (const auto& si : event[i].first.systems) {
        for (const auto& sj : event[j].first.systems) {
          if (si.name == sj.name) {
            throw DomainError("event clauses share system '" + si.name + "'");
          }
        }
      }
    }
  }

  const BranchEnsemble ensemble = run_deterministic(s, p);
  double total = 0.0;
  for (const auto& branch : ensemble.branches) {
    PureState projected = branch.state;
    for (const auto& [obs, label] : event) {
      projected = apply(obs.projector_for(label).op(), projected);
    }
    total += branch.probability * std::real(inner_product(branch.state, projected));
  }
  return std::clamp(total, 0.0, 1.0);
}

Distribution sample_runs(const Scenario& s, const Perspective& p, std::size_t n,
                         std::uint64_t seed, std::span<const Observable> final_event_obs) {
  if (n == 0) throw DomainError("sample count must be positive");
  if (final_event_obs.empty()) throw DomainError("no observables to sample");
  require_valid_run(s, p);

  std::size_t tuple_count = 1;
  for (const auto& obs : final_event_obs) tuple_count *= obs.outcomes.size();
  std::vector<std::size_t> counts(tuple_count, 0);

  RandomStream root(seed);
  for (std::size_t i = 0; i < n; ++i) {
    RandomStream stream = root.derive(i);
    PureState state = s.initial();
    std::map<std::string, std::string> record;
    for (std::size_t k = 0; k < s.steps.size(); ++k) {
      const Step& step = s.steps[k];
      if (const auto* m = std::get_if<MeasureAction>(&step.action)) {
        if (p.collapsing_steps.count(step.id) == 0) continue;
        auto [label, post] = sample(state, *s.find_observable(m->observable), stream);
        record[step.id] = label;
        state = std::move(post);
      } else if (const auto* a = std::get_if<ApplyAction>(&step.action)) {
        apply_unitary_step(s, p, k, *a, record, state);
      } else {
        const auto& pr = std::get<PrepareAction>(step.action);
        state = replace_factor(state, *find_system_spec(s, pr.system),
                               *s.find_state(pr.state), step.id);
      }
    }
    std::size_t index = 0;
    for (const auto& obs : final_event_obs) {
      auto [label, post] = sample(state, obs, stream);
      index = index * obs.outcomes.size() + obs.outcome_index(label);
      state = std::move(post);
    }
    counts[index] += 1;
  }

  std::vector<std::string> variables;
  for (const auto& obs : final_event_obs) variables.push_back(obs.name);
  std::vector<Distribution::Entry> support;
  std::vector<std::size_t> digits(final_event_obs.size(), 0);
  for (std::size_t t = 0; t < tuple_count; ++t) {
    std::vector<std::string> labels;
    for (std::size_t k = 0; k < final_event_obs.size(); ++k) {
      labels.push_back(final_event_obs[k].outcomes[digits[k]].first);
    }
    support.emplace_back(std::move(labels),
                         static_cast<double>(counts[t]) / static_cast<double>(n));
    for (std::size_t k = final_event_obs.size(); k-- > 0;) {
      if (++digits[k] < final_event_obs[k].outcomes.size()) break;
      digits[k] = 0;
    }
  }
  return Distribution(std::move(variables), std::move(support));
}

Distribution joint_distribution(const BranchEnsemble& ensemble,
                                std::span<const Observable> observables) {
  if (ensemble.branches.empty()) throw DomainError("branch ensemble is empty");
  std::vector<std::string> variables;
  std::vector<Distribution::Entry> accumulated;
  for (std::size_t b = 0; b < ensemble.branches.size(); ++b) {
    const Branch& branch = ensemble.branches[b];
    const Distribution d = joint_distribution(branch.state, observables);
    if (b == 0) {
      variables = d.variables();
      for (const auto& [outcome, p] : d.support()) {
        accumulated.emplace_back(outcome, branch.probability * p);
      }
      continue;
    }
    for (std::size_t i = 0; i < accumulated.size(); ++i) {
      accumulated[i].second += branch.probability * d.support()[i].second;
    }
  }
  return Distribution(std::move(variables), std::move(accumulated));
}

namespace {

bool matrices_equal(const Eigen::MatrixXcd& a, const Eigen::MatrixXcd& b, double tol) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return (a - b).cwiseAbs().maxCoeff() <= tol;
}

bool states_equal(const PureState& a, const PureState& b, double tol) {
  if (a.systems() != b.systems()) return false;
  return (a.amplitudes() - b.amplitudes()).cwiseAbs().maxCoeff() <= tol;
}

bool observables_equal(const Observable& a, const Observable& b, double tol) {
  if (a.name != b.name || a.systems != b.systems) return false;
  if (a.outcomes.size() != b.outcomes.size()) return false;
  for (std::size_t i = 0; i < a.outcomes.size(); ++i) {
    if (a.outcomes[i].first != b.outcomes[i].first) return false;
    if (!matrices_equal(a.outcomes[i].second.entries(), b.outcomes[i].second.entries(),
                        tol)) {
      return false;
    }
  }
  return true;
}

bool unitaries_equal(const UnitaryDecl& a, const UnitaryDecl& b, double tol) {
  if (a.index() != b.index()) return false;
  if (const auto* pa = std::get_if<PlainUnitary>(&a)) {
    const auto& pb = std::get<PlainUnitary>(b);
    return pa->name == pb.name && pa->op.systems == pb.op.systems &&
           matrices_equal(pa->op.entries, pb.op.entries, tol);
  }
  const auto& ca = std::get<ControlledUnitary>(a);
  const auto& cb = std::get<ControlledUnitary>(b);
  if (ca.name != cb.name || ca.control != cb.control || ca.target != cb.target) return false;
  if (ca.branches.size() != cb.branches.size()) return false;
  for (std::size_t i = 0; i < ca.branches.size(); ++i) {
    if (ca.branches[i].first != cb.branches[i].first) return false;
    if (!matrices_equal(ca.branches[i].second, cb.branches[i].second, tol)) return false;
  }
  return true;
}

bool steps_equal(const Step& a, const Step& b) {
  if (a.id != b.id || a.action.index() != b.action.index()) return false;
  if (const auto* ma = std::get_if<MeasureAction>(&a.action)) {
    const auto& mb = std::get<MeasureAction>(b.action);
    return ma->agent == mb.agent && ma->observable == mb.observable;
  }
  if (const auto* aa = std::get_if<ApplyAction>(&a.action)) {
    return aa->unitary == std::get<ApplyAction>(b.action).unitary;
  }
  const auto& pa = std::get<PrepareAction>(a.action);
  const auto& pb = std::get<PrepareAction>(b.action);
  return pa.system == pb.system && pa.state == pb.state;
}

}  // namespace

bool structurally_equal(const Scenario& a, const Scenario& b, double tol) {
  if (a.systems != b.systems) return false;
  if (a.states.size() != b.states.size()) return false;
  for (std::size_t i = 0; i < a.states.size(); ++i) {
    if (a.states[i].first != b.states[i].first) return false;
    if (!states_equal(a.states[i].second, b.states[i].second, tol)) return false;
  }
  if (a.observables.size() != b.observables.size()) return false;
  for (std::size_t i = 0; i < a.observables.size(); ++i) {
    if (!observables_equal(a.observables[i], b.observables[i], tol)) return false;
  }
  if (a.unitaries.size() != b.unitaries.size()) return false;
  for (std::size_t i = 0; i < a.unitaries.size(); ++i) {
    if (!unitaries_equal(a.unitaries[i], b.unitaries[i], tol)) return false;
  }
  if (a.steps.size() != b.steps.size()) return false;
  for (std::size_t i = 0; i < a.steps.size(); ++i) {
    if (!steps_equal(a.steps[i], b.steps[i])) return false;
  }
  if (a.perspectives.size() != b.perspectives.size()) return false;
  for (std::size_t i = 0; i < a.perspectives.size(); ++i) {
    if (a.perspectives[i].name != b.perspectives[i].name) return false;
    if (a.perspectives[i].collapsing_steps != b.perspectives[i].collapsing_steps) return false;
  }
  return true;
}

}  // namespace wigner
