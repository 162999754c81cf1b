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

#include "wigner/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>
#include <sstream>

namespace wigner {

namespace {

void require_subsystems_of(const Observable& obs, const PureState& state) {
  for (const auto& sys : obs.systems) {
    const auto it = std::find_if(state.systems().begin(), state.systems().end(),
                                 [&](const SystemSpec& s) { return s.name == sys.name; });
    if (it == state.systems().end()) {
      throw DomainError("observable '" + obs.name + "' acts on system '" + sys.name +
                        "' which the state does not contain");
    }
    if (!(*it == sys)) {
      throw DomainError("system '" + sys.name + "' differs between observable '" +
                        obs.name + "' and state");
    }
  }
}

void require_pairwise_disjoint(std::span<const Observable> obs_list) {
  for (std::size_t i = 0; i < obs_list.size(); ++i) {
    for (std::size_t j = i + 1; j < obs_list.size(); ++j) {
      for (const auto& a : obs_list[i].systems) {
        for (const auto& b : obs_list[j].systems) {
          if (a.name == b.name) {
            throw DomainError("observables '" + obs_list[i].name + "' and '" +
                              obs_list[j].name + "' share system '" + a.name +
                              "': non-commuting joint requested");
          }
        }
      }
    }
  }
}

double born_weight(const PureState& state, const Projector& p) {
  const PureState projected = apply(p.op(), state);
  return std::real(inner_product(state, projected));
}

}  // namespace

Observable::Observable(std::string name_, std::vector<SystemSpec> systems_,
                       std::vector<std::pair<std::string, Projector>> outcomes_)
    : name(std::move(name_)), systems(std::move(systems_)), outcomes(std::move(outcomes_)) {
  if (name.empty()) throw DomainError("observable name must be nonempty");
  if (outcomes.empty()) {
    throw DomainError("observable '" + name + "' has no outcomes");
  }
  std::set<std::string> labels;
  for (const auto& [label, proj] : outcomes) {
    if (!labels.insert(label).second) {
      throw DomainError("observable '" + name + "' repeats outcome label '" + label + "'");
    }
    if (proj.systems() != systems) {
      throw DomainError("observable '" + name + "' outcome '" + label +
                        "' projects on a different subsystem list");
    }
  }
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    for (std::size_t j = i + 1; j < outcomes.size(); ++j) {
      const double overlap =
          (outcomes[i].second.entries() * outcomes[j].second.entries()).cwiseAbs().maxCoeff();
      if (overlap > kTol) {
        throw DomainError("observable '" + name + "' outcomes '" + outcomes[i].first +
                          "' and '" + outcomes[j].first + "' are not orthogonal");
      }
    }
  }
  Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(outcomes[0].second.entries().rows(),
                                                outcomes[0].second.entries().cols());
  for (const auto& [label, proj] : outcomes) sum += proj.entries();
  const double completeness =
      (sum - Eigen::MatrixXcd::Identity(sum.rows(), sum.cols())).cwiseAbs().maxCoeff();
  if (completeness > kTol) {
    std::ostringstream msg;
    msg << "observable '" << name << "' outcomes do not resolve the identity (deviation "
        << completeness << ")";
    throw DomainError(msg.str());
  }
}

const Projector& Observable::projector_for(std::string_view outcome_label) const {
  for (const auto& [label, proj] : outcomes) {
    if (label == outcome_label) return proj;
  }
  throw DomainError("observable '" + name + "' has no outcome '" +
                    std::string(outcome_label) + "'");
}

int Observable::outcome_index(std::string_view outcome_label) const {
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    if (outcomes[i].first == outcome_label) return static_cast<int>(i);
  }
  return -1;
}

Observable observable_from_eigenstates(
    std::string name, std::vector<std::pair<std::string, PureState>> eigenstates) {
  std::vector<std::pair<std::string, std::vector<PureState>>> spaces;
  spaces.reserve(eigenstates.size());
  for (auto& [label, state] : eigenstates) {
    spaces.emplace_back(std::move(label), std::vector<PureState>{std::move(state)});
  }
  return observable_from_eigenspaces(std::move(name), std::move(spaces));
}

Observable observable_from_eigenspaces(
    std::string name,
    std::vector<std::pair<std::string, std::vector<PureState>>> eigenspaces) {
  if (eigenspaces.empty()) {
    throw DomainError("observable '" + name + "' has no outcomes");
  }
  std::vector<std::pair<std::string, Projector>> outcomes;
  outcomes.reserve(eigenspaces.size());
  for (const auto& [label, vectors] : eigenspaces) {
    outcomes.emplace_back(label, projector_onto(vectors));
  }
  std::vector<SystemSpec> systems = outcomes[0].second.systems();
  return Observable(std::move(name), std::move(systems), std::move(outcomes));
}

Distribution::Distribution(std::vector<std::string> variables, std::vector<Entry> support)
    : variables_(std::move(variables)), support_(std::move(support)) {
  std::set<std::vector<std::string>> seen;
  double total = 0.0;
  for (auto& [outcome, p] : support_) {
    if (outcome.size() != variables_.size()) {
      throw DomainError("distribution entry arity does not match its variable list");
    }
    if (!seen.insert(outcome).second) {
      throw DomainError("distribution repeats an outcome tuple");
    }
    if (p < -kTol || p > 1.0 + kTol) {
      std::ostringstream msg;
      msg << "probability " << p << " outside [0,1] beyond tolerance";
      throw DomainError(msg.str());
    }
    p = std::clamp(p, 0.0, 1.0);
    total += p;
  }
  if (std::abs(total - 1.0) > kTol) {
    std::ostringstream msg;
    msg << "distribution sums to " << total << ", not 1";
    throw DomainError(msg.str());
  }
}

double Distribution::probability(std::span<const std::string> outcome) const {
  for (const auto& [key, p] : support_) {
    if (key.size() == outcome.size() && std::equal(key.begin(), key.end(), outcome.begin())) {
      return p;
    }
  }
  throw DomainError("outcome tuple not present in distribution");
}

double Distribution::sum() const {
  double total = 0.0;
  for (const auto& [key, p] : support_) total += p;
  return total;
}

Distribution born_distribution(const PureState& state, const Observable& obs) {
  require_subsystems_of(obs, state);
  std::vector<Distribution::Entry> support;
  support.reserve(obs.outcomes.size());
  for (const auto& [label, proj] : obs.outcomes) {
    support.emplace_back(std::vector<std::string>{label}, born_weight(state, proj));
  }
  return Distribution({obs.name}, std::move(support));
}

Distribution joint_distribution(const PureState& state,
                                std::span<const Observable> obs_list) {
  if (obs_list.empty()) throw DomainError("joint_distribution needs at least one observable");
  require_pairwise_disjoint(obs_list);
  std::vector<std::string> variables;
  for (const auto& obs : obs_list) {
    require_subsystems_of(obs, state);
    variables.push_back(obs.name);
  }

  std::vector<Distribution::Entry> support;
  std::vector<std::size_t> digits(obs_list.size(), 0);
  while (true) {
    std::vector<std::string> outcome(obs_list.size());
    PureState projected = state;
    for (std::size_t i = 0; i < obs_list.size(); ++i) {
      const auto& [label, proj] = obs_list[i].outcomes[digits[i]];
      outcome[i] = label;
      projected = apply(proj.op(), projected);
    }
    support.emplace_back(std::move(outcome), std::real(inner_product(state, projected)));

    int pos = static_cast<int>(obs_list.size()) - 1;
    for (; pos >= 0; --pos) {
      if (++digits[pos] < obs_list[pos].outcomes.size()) break;
      digits[pos] = 0;
    }
    if (pos < 0) break;
  }
  return Distribution(std::move(variables), std::move(support));
}

PureState conditionalize(const PureState& state, const Projector& p) {
  const PureState projected = apply(p.op(), state);
  const double weight = std::real(inner_product(state, projected));
  if (weight <= kConditionThreshold) {
    std::ostringstream msg;
    msg << "conditioning on impossible event (probability " << weight << ")";
    throw DomainError(msg.str());
  }
  return PureState(projected.systems(), projected.amplitudes() / std::sqrt(weight));
}

std::pair<std::string, PureState> sample(const PureState& state, const Observable& obs,
                                         RandomStream& stream) {
  require_subsystems_of(obs, state);
  const double u = stream.next_unit();
  double cumulative = 0.0;
  int fallback = -1;
  for (std::size_t i = 0; i < obs.outcomes.size(); ++i) {
    const auto& [label, proj] = obs.outcomes[i];
    PureState projected = apply(proj.op(), state);
    const double p = std::real(inner_product(state, projected));
    if (p > kConditionThreshold) fallback = static_cast<int>(i);
    cumulative += std::max(p, 0.0);
    if (u < cumulative && p > kConditionThreshold) {
      return {label, PureState(projected.systems(), projected.amplitudes() / std::sqrt(p))};
    }
  }
  // u landed in the roundoff gap above the final cumulative weight.
  if (fallback < 0) throw DomainError("sample: state assigns no outcome positive probability");
  const auto& [label, proj] = obs.outcomes[fallback];
  return {label, conditionalize(state, proj)};
}

Distribution marginal(const Distribution& d, std::span<const std::size_t> keep) {
  if (keep.empty()) throw DomainError("marginal requires a nonempty keep set");
  std::set<std::size_t> unique;
  for (const std::size_t pos : keep) {
    if (pos >= d.variables().size()) {
      throw DomainError("marginal position out of range");
    }
    if (!unique.insert(pos).second) throw DomainError("marginal repeats a position");
  }

  std::vector<std::string> variables;
  for (const std::size_t pos : keep) variables.push_back(d.variables()[pos]);

  // First-seen order keeps the projected table deterministic.
  std::vector<Distribution::Entry> support;
  std::map<std::vector<std::string>, std::size_t> index;
  for (const auto& [outcome, p] : d.support()) {
    std::vector<std::string> projected;
    projected.reserve(keep.size());
    for (const std::size_t pos : keep) projected.push_back(outcome[pos]);
    const auto it = index.find(projected);
    if (it == index.end()) {
      index.emplace(projected, support.size());
      support.emplace_back(std::move(projected), p);
    } else {
      support[it->second].second += p;
    }
  }
  return Distribution(std::move(variables), std::move(support));
}

NoSignalingReport no_signaling_audit(const PureState& state,
                                     std::span<const Observable> side1_choices,
                                     std::span<const Observable> side2_choices) {
  for (const auto& s1 : side1_choices) {
    for (const auto& s2 : side2_choices) {
      const Observable pair_check[] = {s1, s2};
      require_pairwise_disjoint(pair_check);
    }
  }

  NoSignalingReport report;
  for (const auto& s1 : side1_choices) {
    const Distribution baseline = born_distribution(state, s1);
    for (const auto& s2 : side2_choices) {
      const Observable pair[] = {s1, s2};
      const Distribution joint = joint_distribution(state, pair);
      const std::size_t keep[] = {0};
      const Distribution reduced = marginal(joint, keep);
      double deviation = 0.0;
      for (const auto& [outcome, p] : baseline.support()) {
        deviation = std::max(deviation, std::abs(p - reduced.probability(outcome)));
      }
      report.entries.push_back({s1.name, s2.name, deviation});
      report.max_deviation = std::max(report.max_deviation, deviation);
    }
  }
  return report;
}

}  // namespace wigner
