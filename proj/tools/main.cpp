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
#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "wigner/correlations.hpp"
#include "wigner/dsl.hpp"
#include "wigner/frames.hpp"
#include "wigner/render.hpp"
#include "wigner/scenario.hpp"

namespace {

using namespace wigner;

/// Exit code 2: bad invocation, unresolvable names, unparseable input.
/// DomainError stays exit code 1: the input was well-formed but the
/// requested computation is not defined on it.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
  std::vector<std::string> parts;
  std::string current;
  for (const char c : text) {
    if (c == sep) {
      parts.push_back(current);
      current.clear();
    } else if (c != ' ') {
      current += c;
    }
  }
  parts.push_back(current);
  return parts;
}

std::string diagnostics_text(const std::string& origin,
                             const std::vector<ParseDiagnostic>& diagnostics) {
  std::ostringstream out;
  for (const auto& d : diagnostics) {
    out << origin << ":" << d.line << ":" << d.column << ": error: " << d.message << "\n";
  }
  return out.str();
}

bool scn_path(const std::string& name) {
  return name.size() > 4 && name.substr(name.size() - 4) == ".scn";
}

/// Built-in names resolve first; anything else must be a readable .scn file.
Scenario load_scenario(const std::string& name) {
  if (name == "fr") return fr_scenario();
  if (name == "singlet") return singlet_scenario();
  if (!scn_path(name)) {
    throw UsageError("unknown scenario '" + name +
                     "': expected a built-in name (fr, singlet) or a .scn file");
  }
  std::ifstream in(name);
  if (!in) throw UsageError("cannot open scenario file '" + name + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  ParseResult parsed = parse_scenario(buffer.str());
  if (!parsed.ok()) {
    throw UsageError(diagnostics_text(name, parsed.diagnostics));
  }
  return std::move(*parsed.scenario);
}

const Observable& observable_or_throw(const Scenario& s, const std::string& name) {
  const Observable* obs = s.find_observable(name);
  if (obs == nullptr) throw UsageError("unknown observable '" + name + "'");
  return *obs;
}

const Perspective& perspective_or_throw(const Scenario& s, const std::string& name) {
  const Perspective* p = s.find_perspective(name);
  if (p == nullptr) throw UsageError("unknown perspective '" + name + "'");
  return *p;
}

std::vector<Observable> observable_list(const Scenario& s, const std::string& text) {
  std::vector<Observable> list;
  for (const auto& name : split(text, ',')) {
    if (name.empty()) throw UsageError("empty observable name in '" + text + "'");
    list.push_back(observable_or_throw(s, name));
  }
  return list;
}

/// "X=ok,Y=ok" -> [(X, ok), (Y, ok)]
std::vector<std::pair<Observable, std::string>> parse_event(const Scenario& s,
                                                            const std::string& text) {
  std::vector<std::pair<Observable, std::string>> event;
  for (const auto& clause : split(text, ',')) {
    const std::size_t eq = clause.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 >= clause.size()) {
      throw UsageError("event clause '" + clause + "' is not of the form OBSERVABLE=OUTCOME");
    }
    const Observable& obs = observable_or_throw(s, clause.substr(0, eq));
    const std::string label = clause.substr(eq + 1);
    if (obs.outcome_index(label) < 0) {
      throw UsageError("observable '" + obs.name + "' has no outcome '" + label + "'");
    }
    event.emplace_back(obs, label);
  }
  return event;
}

/// "X,Y;X,B" -> [["X","Y"], ["X","B"]]; names validated against the scenario.
std::vector<std::vector<std::string>> parse_groups(const Scenario& s, const std::string& text) {
  std::vector<std::vector<std::string>> groups;
  for (const auto& group : split(text, ';')) {
    std::vector<std::string> names;
    for (const auto& name : split(group, ',')) {
      if (name.empty()) throw UsageError("empty observable name in '" + text + "'");
      observable_or_throw(s, name);
      names.push_back(name);
    }
    groups.push_back(std::move(names));
  }
  return groups;
}

Format parse_format(const std::string& text) {
  return text == "json" ? Format::Json : Format::Text;
}

/// Final state with every step in unitary description: a one-branch run.
PureState coherent_final_state(const Scenario& s) {
  const Perspective coherent{"coherent", {}};
  return run_deterministic(s, coherent).branches.front().state;
}

/// The two connected components of the shared-system graph over all
/// observables, for the default no-signaling split.
std::pair<std::vector<Observable>, std::vector<Observable>> bipartition(const Scenario& s) {
  const std::size_t n = s.observables.size();
  std::vector<std::size_t> component(n);
  for (std::size_t i = 0; i < n; ++i) component[i] = i;
  const auto root = [&](std::size_t i) {
    while (component[i] != i) i = component[i] = component[component[i]];
    return i;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      bool shares = false;
      for (const auto& si : s.observables[i].systems) {
        for (const auto& sj : s.observables[j].systems) {
          if (si.name == sj.name) shares = true;
        }
      }
      if (shares) component[root(i)] = root(j);
    }
  }
  std::vector<std::size_t> roots;
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t r = root(i);
    bool seen = false;
    for (const std::size_t known : roots) seen = seen || known == r;
    if (!seen) roots.push_back(r);
  }
  if (roots.size() != 2) {
    throw UsageError("cannot split the observables into two sides by shared systems; pass "
                     "--observables \"SIDE1;SIDE2\"");
  }
  std::pair<std::vector<Observable>, std::vector<Observable>> sides;
  for (std::size_t i = 0; i < n; ++i) {
    (root(i) == roots[0] ? sides.first : sides.second).push_back(s.observables[i]);
  }
  return sides;
}

struct CommonFlags {
  std::string scenario;
  std::string format = "text";
};

void add_common(CLI::App* cmd, CommonFlags& flags) {
  cmd->add_option("--scenario", flags.scenario, "built-in name (fr, singlet) or .scn file")
      ->required();
  cmd->add_option("--format", flags.format, "output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();
}

int cmd_run(const CommonFlags& flags, const std::string& perspective, const std::string& event,
            std::size_t samples, std::uint64_t seed) {
  const Scenario s = load_scenario(flags.scenario);
  const Perspective& p = perspective_or_throw(s, perspective);
  const Format format = parse_format(flags.format);
  if (event.empty()) {
    if (samples > 0) throw UsageError("--samples requires --event");
    std::cout << render(run_deterministic(s, p), format);
    return 0;
  }
  const auto clauses = parse_event(s, event);
  if (samples > 0) {
    std::vector<Observable> obs;
    for (const auto& [o, label] : clauses) obs.push_back(o);
    std::cout << render(sample_runs(s, p, samples, seed, obs), format);
    return 0;
  }
  const double prob = event_probability(s, p, clauses);
  if (format == Format::Json) {
    const nlohmann::json j{{"event", event}, {"probability", prob}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << format_probability(prob) << "\n";
  }
  return 0;
}

int cmd_distribution(const CommonFlags& flags, const std::string& perspective,
                     const std::string& observables) {
  const Scenario s = load_scenario(flags.scenario);
  const Perspective& p = perspective_or_throw(s, perspective);
  const std::vector<Observable> obs = observable_list(s, observables);
  const BranchEnsemble ensemble = run_deterministic(s, p);
  std::cout << render(joint_distribution(ensemble, obs), parse_format(flags.format));
  return 0;
}

int cmd_consistency(const CommonFlags& flags, const std::string& observables,
                    const std::string& event) {
  const Format format = parse_format(flags.format);
  if (flags.scenario == "fr" && observables.empty() && event.empty()) {
    std::cout << render(fr_contradiction_report(), format);
    return 0;
  }
  const Scenario s = load_scenario(flags.scenario);
  if (observables.empty()) {
    throw UsageError("--observables is required for scenarios other than the built-in fr");
  }
  const auto groups = parse_groups(s, observables);
  std::vector<Assignment> required;
  if (!event.empty()) {
    for (const auto& [obs, label] : parse_event(s, event)) {
      required.push_back({obs.name, label});
    }
  }
  std::cout << render(contradiction_report(s, groups, required), format);
  return 0;
}

int cmd_frames(const CommonFlags& flags, const std::string& observables) {
  const Format format = parse_format(flags.format);
  const Scenario s = load_scenario(flags.scenario);
  std::vector<std::vector<std::string>> groups;
  if (!observables.empty()) {
    groups = parse_groups(s, observables);
  } else if (flags.scenario == "fr") {
    groups = {{"X", "Y"}, {"X", "B"}, {"A", "Y"}, {"A", "B"}};
  } else {
    throw UsageError("--observables is required for scenarios other than the built-in fr");
  }
  std::cout << render(frames_report(s, groups), format);
  return 0;
}

int cmd_chsh(const CommonFlags& flags, const std::string& observables) {
  const Scenario s = load_scenario(flags.scenario);
  std::vector<Observable> obs;
  if (!observables.empty()) {
    obs = observable_list(s, observables);
  } else {
    obs = s.observables;
  }
  if (obs.size() != 4) {
    throw UsageError("chsh needs exactly four observables (a, a', b, b'); got " +
                     std::to_string(obs.size()));
  }
  const PureState state = coherent_final_state(s);
  const DichotomicObservable a(obs[0]);
  const DichotomicObservable a2(obs[1]);
  const DichotomicObservable b(obs[2]);
  const DichotomicObservable b2(obs[3]);

  const double eab = correlation(state, a, b);
  const double eab2 = correlation(state, a, b2);
  const double ea2b = correlation(state, a2, b);
  const double ea2b2 = correlation(state, a2, b2);
  const double s_value = chsh(state, a, a2, b, b2);

  char buf[64];
  const auto g = [&buf](double v) {
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return std::string(buf);
  };
  if (parse_format(flags.format) == Format::Json) {
    nlohmann::json correlations;
    correlations[obs[0].name + "," + obs[2].name] = eab;
    correlations[obs[0].name + "," + obs[3].name] = eab2;
    correlations[obs[1].name + "," + obs[2].name] = ea2b;
    correlations[obs[1].name + "," + obs[3].name] = ea2b2;
    const nlohmann::json j{{"correlations", correlations},
                           {"S", s_value},
                           {"tsirelson_bound", 2.0 * std::sqrt(2.0)}};
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "E(" << obs[0].name << "," << obs[2].name << ") = " << g(eab) << "\n";
    std::cout << "E(" << obs[0].name << "," << obs[3].name << ") = " << g(eab2) << "\n";
    std::cout << "E(" << obs[1].name << "," << obs[2].name << ") = " << g(ea2b) << "\n";
    std::cout << "E(" << obs[1].name << "," << obs[3].name << ") = " << g(ea2b2) << "\n";
    std::cout << "S = " << g(s_value) << "\n";
  }
  return 0;
}

int cmd_nosignal(const CommonFlags& flags, const std::string& observables, double tolerance) {
  const Scenario s = load_scenario(flags.scenario);
  std::vector<Observable> side1;
  std::vector<Observable> side2;
  if (!observables.empty()) {
    const auto groups = split(observables, ';');
    if (groups.size() != 2) {
      throw UsageError("--observables must list exactly two sides separated by ';'");
    }
    side1 = observable_list(s, groups[0]);
    side2 = observable_list(s, groups[1]);
  } else {
    std::tie(side1, side2) = bipartition(s);
  }
  const PureState state = coherent_final_state(s);
  std::cout << render(no_signaling_audit(state, side1, side2), parse_format(flags.format),
                      tolerance);
  return 0;
}

int cmd_parse(const CommonFlags& flags) {
  const Scenario s = load_scenario(flags.scenario);
  (void)s;
  if (parse_format(flags.format) == Format::Json) {
    std::cout << "{\n  \"ok\": true\n}\n";
  } else {
    std::cout << "ok\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum thought-experiment simulator: perspectives, frames, and correlations"};
  app.require_subcommand(1);

  CommonFlags run_flags;
  std::string run_perspective;
  std::string run_event;
  std::size_t run_samples = 0;
  std::uint64_t run_seed = 1;
  CLI::App* run_cmd =
      app.add_subcommand("run", "execute a scenario under a perspective's cut placement");
  add_common(run_cmd, run_flags);
  run_cmd->add_option("--perspective", run_perspective, "perspective name")->required();
  run_cmd->add_option("--event", run_event, "event clauses OBS=OUTCOME[,OBS=OUTCOME...]");
  run_cmd->add_option("--samples", run_samples, "sample the event frequency over N runs");
  run_cmd->add_option("--seed", run_seed, "base seed for sampling")->capture_default_str();

  CommonFlags dist_flags;
  std::string dist_perspective;
  std::string dist_observables;
  CLI::App* dist_cmd =
      app.add_subcommand("distribution", "joint outcome table on a perspective's final state");
  add_common(dist_cmd, dist_flags);
  dist_cmd->add_option("--perspective", dist_perspective, "perspective name")->required();
  dist_cmd->add_option("--observables", dist_observables, "comma-separated observable names")
      ->required();

  CommonFlags cons_flags;
  std::string cons_observables;
  std::string cons_event;
  CLI::App* cons_cmd = app.add_subcommand(
      "consistency", "possibilistic constraints and single-world valuation search");
  add_common(cons_cmd, cons_flags);
  cons_cmd->add_option("--observables", cons_observables,
                       "semicolon-separated frame groups, e.g. \"X,Y;X,B;A,Y;A,B\"");
  cons_cmd->add_option("--event", cons_event, "required assignments OBS=OUTCOME[,...]");

  CommonFlags frames_flags;
  std::string frames_observables;
  CLI::App* frames_cmd =
      app.add_subcommand("frames", "Boolean frames, modalities, and intertwinement");
  add_common(frames_cmd, frames_flags);
  frames_cmd->add_option("--observables", frames_observables,
                         "semicolon-separated frame groups");

  CommonFlags chsh_flags;
  std::string chsh_observables;
  CLI::App* chsh_cmd = app.add_subcommand("chsh", "CHSH correlations and the S value");
  add_common(chsh_cmd, chsh_flags);
  chsh_cmd->add_option("--observables", chsh_observables,
                       "four observable names: a, a', b, b'");

  CommonFlags nosig_flags;
  std::string nosig_observables;
  double nosig_tolerance = 1e-9;
  CLI::App* nosig_cmd = app.add_subcommand("nosignal", "marginal-invariance audit");
  add_common(nosig_cmd, nosig_flags);
  nosig_cmd->add_option("--observables", nosig_observables,
                        "two sides separated by ';', e.g. \"A,X;B,Y\"");
  nosig_cmd->add_option("--tolerance", nosig_tolerance, "audit tolerance")
      ->capture_default_str();

  CommonFlags parse_flags;
  CLI::App* parse_cmd = app.add_subcommand("parse", "validate a scenario and report ok");
  add_common(parse_cmd, parse_flags);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (run_cmd->parsed()) {
      return cmd_run(run_flags, run_perspective, run_event, run_samples, run_seed);
    }
    if (dist_cmd->parsed()) {
      return cmd_distribution(dist_flags, dist_perspective, dist_observables);
    }
    if (cons_cmd->parsed()) return cmd_consistency(cons_flags, cons_observables, cons_event);
    if (frames_cmd->parsed()) return cmd_frames(frames_flags, frames_observables);
    if (chsh_cmd->parsed()) return cmd_chsh(chsh_flags, chsh_observables);
    if (nosig_cmd->parsed()) return cmd_nosignal(nosig_flags, nosig_observables, nosig_tolerance);
    if (parse_cmd->parsed()) return cmd_parse(parse_flags);
  } catch (const UsageError& e) {
    std::string message = e.what();
    if (message.empty() || message.back() != '\n') message += '\n';
    std::cerr << message;
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
