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

#include "wigner/frames.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <sstream>
#include <utility>

namespace wigner {

namespace {

std::string assignment_text(const Assignment& a) { return a.variable + "=" + a.label; }

std::string combo_text(const ForbiddenCombo& combo) {
  std::string out = "{";
  for (std::size_t i = 0; i < combo.clauses.size(); ++i) {
    if (i > 0) out += ", ";
    out += assignment_text(combo.clauses[i]);
  }
  out += "}";
  return out;
}

}  // namespace

const std::vector<SystemSpec>& Frame::systems() const {
  if (atoms.empty()) throw DomainError("frame '" + name + "' has no atoms");
  return atoms.front().second.systems();
}

int Frame::atom_index(std::string_view label) const {
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    if (atoms[i].first == label) return static_cast<int>(i);
  }
  return -1;
}

namespace {

void check_completeness(const Frame& frame) {
  const Eigen::Index dim = frame.atoms.front().second.entries().rows();
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(dim, dim);
  for (const auto& [label, proj] : frame.atoms) sum += proj.entries();
  const double deviation =
      (sum - Eigen::MatrixXcd::Identity(dim, dim)).cwiseAbs().maxCoeff();
  if (deviation > kTol) {
    std::ostringstream msg;
    msg << "frame '" << frame.name << "' atoms do not resolve the identity (deviation "
        << deviation << ")";
    throw DomainError(msg.str());
  }
}

}  // namespace

Frame frame_from_commuting(std::string name, std::span<const Projector> generators) {
  if (generators.empty()) {
    throw DomainError("frame '" + name + "' requires at least one generator");
  }
  for (std::size_t i = 1; i < generators.size(); ++i) {
    if (generators[i].systems() != generators[0].systems()) {
      std::ostringstream msg;
      msg << "generators 0 and " << i << " act on different systems";
      throw DomainError(msg.str());
    }
  }
  for (std::size_t i = 0; i < generators.size(); ++i) {
    for (std::size_t j = i + 1; j < generators.size(); ++j) {
      if (!commutes(generators[i], generators[j])) {
        std::ostringstream msg;
        msg << "projectors " << i << " and " << j << " do not commute";
        throw DomainError(msg.str());
      }
    }
  }
  const std::size_t n = generators.size();
  if (n >= 20) throw DomainError("generator count exceeds the search guard");

  const Eigen::Index dim = generators[0].entries().rows();
  const Eigen::MatrixXcd identity = Eigen::MatrixXcd::Identity(dim, dim);

  Frame frame{std::move(name), {}};
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    Eigen::MatrixXcd product = identity;
    std::string label(n, '+');
    for (std::size_t i = 0; i < n; ++i) {
      const bool complement = ((mask >> (n - 1 - i)) & 1u) != 0;
      if (complement) label[i] = '-';
      product = product * (complement ? (identity - generators[i].entries()).eval()
                                      : generators[i].entries());
    }
    if (product.cwiseAbs().maxCoeff() <= kTol) continue;
    frame.atoms.emplace_back(label,
                             Projector(OperatorMatrix{generators[0].systems(), product}));
  }
  check_completeness(frame);
  return frame;
}

Frame frame_from_observables(std::string name, std::span<const Observable> observables) {
  if (observables.empty()) {
    throw DomainError("frame '" + name + "' requires at least one observable");
  }
  for (std::size_t i = 0; i < observables.size(); ++i) {
    for (std::size_t j = i + 1; j < observables.size(); ++j) {
      for (const auto& si : observables[i].systems) {
        for (const auto& sj : observables[j].systems) {
          if (si.name == sj.name) {
            throw DomainError("observables '" + observables[i].name + "' and '" +
                              observables[j].name + "' share system '" + si.name + "'");
          }
        }
      }
    }
  }
  long atom_count = 1;
  for (const auto& obs : observables) {
    atom_count *= static_cast<long>(obs.outcomes.size());
    if (atom_count > kMaxValuationSpace) {
      throw DomainError("frame atom count exceeds the search guard");
    }
  }

  Frame frame{std::move(name), {}};
  std::vector<std::size_t> digits(observables.size(), 0);
  for (long a = 0; a < atom_count; ++a) {
    std::string label;
    OperatorMatrix op = observables[0].outcomes[digits[0]].second.op();
    label = observables[0].outcomes[digits[0]].first;
    for (std::size_t k = 1; k < observables.size(); ++k) {
      const auto& [outcome_label, proj] = observables[k].outcomes[digits[k]];
      op = tensor(op, proj.op());
      label += ",";
      label += outcome_label;
    }
    frame.atoms.emplace_back(std::move(label), Projector(op));
    for (std::size_t k = observables.size(); k-- > 0;) {
      if (++digits[k] < observables[k].outcomes.size()) break;
      digits[k] = 0;
    }
  }
  check_completeness(frame);
  return frame;
}

std::vector<SharedElement> intertwinement(const Frame& f1, const Frame& f2) {
  if (f1.systems() != f2.systems()) {
    throw DomainError("frames '" + f1.name + "' and '" + f2.name +
                      "' live on different spaces");
  }
  const std::size_t n1 = f1.atoms.size();
  const std::size_t n2 = f2.atoms.size();
  if (n1 + n2 > 20) throw DomainError("intertwinement search space exceeds the guard");

  auto subset_sums = [](const Frame& f) {
    const std::size_t n = f.atoms.size();
    const Eigen::Index dim = f.atoms.front().second.entries().rows();
    std::vector<Eigen::MatrixXcd> sums(std::size_t{1} << n);
    sums[0] = Eigen::MatrixXcd::Zero(dim, dim);
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
      const std::uint32_t low = mask & (~mask + 1u);
      const int idx = std::countr_zero(low);
      sums[mask] = sums[mask ^ low] + f.atoms[idx].second.entries();
    }
    return sums;
  };
  const auto sums1 = subset_sums(f1);
  const auto sums2 = subset_sums(f2);

  auto labels_of = [](const Frame& f, std::uint32_t mask) {
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < f.atoms.size(); ++i) {
      if ((mask >> i) & 1u) labels.push_back(f.atoms[i].first);
    }
    return labels;
  };

  std::vector<SharedElement> shared;
  const std::uint32_t full1 = (1u << n1) - 1u;
  const std::uint32_t full2 = (1u << n2) - 1u;
  for (std::uint32_t m1 = 1; m1 < full1; ++m1) {
    for (std::uint32_t m2 = 1; m2 < full2; ++m2) {
      if ((sums1[m1] - sums2[m2]).cwiseAbs().maxCoeff() <= kTol) {
        shared.push_back({labels_of(f1, m1), labels_of(f2, m2)});
      }
    }
  }
  return shared;
}

std::vector<PossibilisticConstraint> possibilistic_constraints(const PureState& state,
                                                               std::span<const Frame> frames) {
  std::vector<PossibilisticConstraint> constraints;
  for (const auto& frame : frames) {
    for (const auto& [label, proj] : frame.atoms) {
      const PureState projected = apply(proj.op(), state);
      const double p = std::max(0.0, std::real(inner_product(state, projected)));
      constraints.push_back({frame.name, {label}, p < kZeroProbability, p});
    }
  }
  return constraints;
}

namespace {

struct ProblemIndex {
  std::map<std::string, std::size_t> variable_of;
  std::vector<std::size_t> domain_size;
};

ProblemIndex validate_problem(const ValuationProblem& problem) {
  ProblemIndex index;
  for (std::size_t v = 0; v < problem.variables.size(); ++v) {
    const auto& [name, labels] = problem.variables[v];
    if (!index.variable_of.emplace(name, v).second) {
      throw DomainError("duplicate variable '" + name + "'");
    }
    if (labels.empty()) throw DomainError("variable '" + name + "' has no labels");
    std::set<std::string> seen;
    for (const auto& l : labels) {
      if (!seen.insert(l).second) {
        throw DomainError("variable '" + name + "' lists label '" + l + "' twice");
      }
    }
    index.domain_size.push_back(labels.size());
  }

  auto check_reference = [&](const Assignment& a, const char* what) {
    auto it = index.variable_of.find(a.variable);
    if (it == index.variable_of.end()) {
      throw DomainError(std::string(what) + " references unknown variable '" + a.variable +
                        "'");
    }
    const auto& labels = problem.variables[it->second].second;
    if (std::find(labels.begin(), labels.end(), a.label) == labels.end()) {
      throw DomainError(std::string(what) + " references unknown label '" + a.label +
                        "' of variable '" + a.variable + "'");
    }
  };

  for (const auto& combo : problem.forbidden) {
    if (combo.clauses.empty()) throw DomainError("forbidden combination is empty");
    std::set<std::string> vars;
    for (const auto& clause : combo.clauses) {
      check_reference(clause, "forbidden combination");
      if (!vars.insert(clause.variable).second) {
        throw DomainError("forbidden combination references variable '" + clause.variable +
                          "' twice");
      }
    }
  }

  std::map<std::string, std::string> required_label;
  for (const auto& req : problem.required) {
    check_reference(req, "required assignment");
    auto [it, inserted] = required_label.emplace(req.variable, req.label);
    if (!inserted && it->second != req.label) {
      throw DomainError("conflicting required assignments for variable '" + req.variable +
                        "'");
    }
  }
  return index;
}

int label_index(const ValuationProblem& problem, std::size_t var, std::string_view label) {
  const auto& labels = problem.variables[var].second;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

// Unit-propagation explanation of an unsatisfiable problem. Restarts from
// the first constraint after every forced assignment so the earliest
// violated constraint terminates the trace.
std::vector<DeductionStep> propagation_trace(const ValuationProblem& problem,
                                             const ProblemIndex& index,
                                             long assignment_space) {
  std::vector<int> assigned(problem.variables.size(), -1);
  std::vector<std::set<int>> excluded(problem.variables.size());
  for (const auto& req : problem.required) {
    const std::size_t v = index.variable_of.at(req.variable);
    assigned[v] = label_index(problem, v, req.label);
  }

  std::vector<DeductionStep> trace;
  bool progress = true;
  while (progress) {
    progress = false;
    for (std::size_t ci = 0; ci < problem.forbidden.size(); ++ci) {
      const auto& combo = problem.forbidden[ci];
      bool inactive = false;  // a clause is contradicted, or two are open
      std::vector<const Assignment*> matched;
      const Assignment* open = nullptr;
      for (const auto& clause : combo.clauses) {
        const std::size_t v = index.variable_of.at(clause.variable);
        const int want = label_index(problem, v, clause.label);
        if (assigned[v] < 0) {
          if (open != nullptr) {
            inactive = true;
            break;
          }
          open = &clause;
        } else if (assigned[v] == want) {
          matched.push_back(&clause);
        } else {
          inactive = true;
          break;
        }
      }
      if (inactive) continue;
      if (open == nullptr) {
        DeductionStep step;
        step.kind = DeductionKind::Violation;
        step.constraint_index = ci;
        step.text = combo_text(combo) + " is forbidden";
        trace.push_back(std::move(step));
        return trace;
      }
      const std::size_t v = index.variable_of.at(open->variable);
      const int banned = label_index(problem, v, open->label);
      if (excluded[v].count(banned) != 0) continue;
      excluded[v].insert(banned);
      if (excluded[v].size() + 1 != index.domain_size[v]) continue;
      int remaining = -1;
      for (std::size_t l = 0; l < index.domain_size[v]; ++l) {
        if (excluded[v].count(static_cast<int>(l)) == 0) remaining = static_cast<int>(l);
      }
      assigned[v] = remaining;
      Assignment forced{problem.variables[v].first,
                        problem.variables[v].second[static_cast<std::size_t>(remaining)]};
      std::string premises;
      for (const auto* clause : matched) {
        if (!premises.empty()) premises += ", ";
        premises += assignment_text(*clause);
      }
      DeductionStep step;
      step.kind = DeductionKind::Forced;
      step.assigned = forced;
      step.constraint_index = ci;
      step.text = premises.empty() ? assignment_text(forced) + " is the only remaining value"
                                   : premises + " => " + assignment_text(forced);
      trace.push_back(std::move(step));
      progress = true;
      break;
    }
  }

  DeductionStep step;
  step.kind = DeductionKind::Exhausted;
  std::ostringstream text;
  text << "no consistent valuation exists (exhaustive search over " << assignment_space
       << " assignments)";
  step.text = text.str();
  trace.push_back(std::move(step));
  return trace;
}

}  // namespace

ValuationResult global_valuation(const ValuationProblem& problem) {
  const ProblemIndex index = validate_problem(problem);

  long assignment_space = 1;
  for (const std::size_t d : index.domain_size) {
    assignment_space *= static_cast<long>(d);
    if (assignment_space > kMaxValuationSpace) {
      throw DomainError("valuation space exceeds " + std::to_string(kMaxValuationSpace) +
                        " assignments");
    }
  }

  std::vector<int> required_index(problem.variables.size(), -1);
  for (const auto& req : problem.required) {
    const std::size_t v = index.variable_of.at(req.variable);
    required_index[v] = label_index(problem, v, req.label);
  }

  std::vector<int> assignment(problem.variables.size(), -1);
  auto violates = [&](std::size_t just_assigned) {
    for (const auto& combo : problem.forbidden) {
      bool involved = false;
      bool all_matched = true;
      for (const auto& clause : combo.clauses) {
        const std::size_t v = index.variable_of.at(clause.variable);
        if (v == just_assigned) involved = true;
        if (assignment[v] < 0 || assignment[v] != label_index(problem, v, clause.label)) {
          all_matched = false;
          break;
        }
      }
      if (involved && all_matched) return true;
    }
    return false;
  };

  auto search = [&](auto&& self, std::size_t v) -> bool {
    if (v == problem.variables.size()) return true;
    for (std::size_t l = 0; l < index.domain_size[v]; ++l) {
      if (required_index[v] >= 0 && static_cast<int>(l) != required_index[v]) continue;
      assignment[v] = static_cast<int>(l);
      if (!violates(v) && self(self, v + 1)) return true;
    }
    assignment[v] = -1;
    return false;
  };

  ValuationResult result;
  if (search(search, 0)) {
    result.sat = true;
    for (std::size_t v = 0; v < problem.variables.size(); ++v) {
      result.witness.push_back({problem.variables[v].first,
                                problem.variables[v].second[static_cast<std::size_t>(
                                    assignment[v])]});
    }
    return result;
  }
  result.sat = false;
  result.trace = propagation_trace(problem, index, assignment_space);
  return result;
}

ContradictionReport contradiction_report(const Scenario& s,
                                         std::span<const std::vector<std::string>> frame_groups,
                                         std::span<const Assignment> required) {
  if (frame_groups.empty()) throw DomainError("no observable groups given");

  const Perspective coherent{"coherent", {}};
  const BranchEnsemble ensemble = run_deterministic(s, coherent);
  const PureState& state = ensemble.branches.front().state;

  ContradictionReport report;
  std::vector<std::vector<const Observable*>> groups;
  for (const auto& names : frame_groups) {
    if (names.empty()) throw DomainError("observable group is empty");
    std::vector<const Observable*> group;
    std::vector<Observable> copies;
    std::string frame_name = "(";
    for (std::size_t i = 0; i < names.size(); ++i) {
      const Observable* obs = s.find_observable(names[i]);
      if (obs == nullptr) throw DomainError("unknown observable '" + names[i] + "'");
      group.push_back(obs);
      copies.push_back(*obs);
      if (i > 0) frame_name += ",";
      frame_name += names[i];
    }
    frame_name += ")";
    groups.push_back(group);
    report.tables.emplace_back(frame_name, joint_distribution(state, copies));
    report.frames.push_back(frame_from_observables(frame_name, copies));
  }
  report.constraints = possibilistic_constraints(state, report.frames);

  std::set<std::string> used;
  for (const auto& group : groups) {
    for (const auto* obs : group) used.insert(obs->name);
  }
  for (const auto& obs : s.observables) {
    if (used.count(obs.name) == 0) continue;
    std::vector<std::string> labels;
    for (const auto& [label, proj] : obs.outcomes) labels.push_back(label);
    report.problem.variables.emplace_back(obs.name, std::move(labels));
  }

  std::size_t constraint_cursor = 0;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& group = groups[g];
    std::vector<std::size_t> digits(group.size(), 0);
    const std::size_t atom_count = report.frames[g].atoms.size();
    for (std::size_t a = 0; a < atom_count; ++a, ++constraint_cursor) {
      if (report.constraints[constraint_cursor].impossible) {
        ForbiddenCombo combo;
        for (std::size_t k = 0; k < group.size(); ++k) {
          combo.clauses.push_back(
              {group[k]->name, group[k]->outcomes[digits[k]].first});
        }
        report.problem.forbidden.push_back(std::move(combo));
      }
      for (std::size_t k = group.size(); k-- > 0;) {
        if (++digits[k] < group[k]->outcomes.size()) break;
        digits[k] = 0;
      }
    }
  }

  report.problem.required.assign(required.begin(), required.end());
  report.result = global_valuation(report.problem);
  return report;
}

ContradictionReport fr_contradiction_report() {
  const Scenario s = fr_scenario();
  const std::vector<std::vector<std::string>> groups = {
      {"X", "Y"}, {"X", "B"}, {"A", "Y"}, {"A", "B"}};
  const std::vector<Assignment> required = {{"X", "ok"}, {"Y", "ok"}};
  return contradiction_report(s, groups, required);
}

FramesReport frames_report(const Scenario& s,
                           std::span<const std::vector<std::string>> frame_groups) {
  if (frame_groups.empty()) throw DomainError("no observable groups given");

  const Perspective coherent{"coherent", {}};
  const BranchEnsemble ensemble = run_deterministic(s, coherent);
  const PureState& state = ensemble.branches.front().state;

  FramesReport report;
  for (const auto& names : frame_groups) {
    if (names.empty()) throw DomainError("observable group is empty");
    std::vector<Observable> group;
    std::string frame_name = "(";
    for (std::size_t i = 0; i < names.size(); ++i) {
      const Observable* obs = s.find_observable(names[i]);
      if (obs == nullptr) throw DomainError("unknown observable '" + names[i] + "'");
      group.push_back(*obs);
      if (i > 0) frame_name += ",";
      frame_name += names[i];
    }
    frame_name += ")";
    report.frames.push_back(frame_from_observables(frame_name, group));
  }
  report.constraints = possibilistic_constraints(state, report.frames);
  for (std::size_t i = 0; i < report.frames.size(); ++i) {
    for (std::size_t j = i + 1; j < report.frames.size(); ++j) {
      report.intertwinements.push_back({report.frames[i].name, report.frames[j].name,
                                        intertwinement(report.frames[i], report.frames[j])});
    }
  }
  return report;
}

}  // namespace wigner
