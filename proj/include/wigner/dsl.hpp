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
#include <string>
#include <string_view>
#include <vector>

#include "wigner/scenario.hpp"

namespace wigner {

/// Positioned message from the scenario parser. Line and column are
/// 1-based and point into the source text.
struct ParseDiagnostic {
  enum class Severity { Error, Warning };

  int line = 1;
  int column = 1;
  std::string message;
  Severity severity = Severity::Error;
};

/// Either a validated Scenario or the diagnostics that prevented one.
struct ParseResult {
  std::optional<Scenario> scenario;
  std::vector<ParseDiagnostic> diagnostics;

  bool ok() const { return scenario.has_value(); }
};

/// Parses the scenario text format: one statement per line, `#` comments.
/// Statement forms:
///
///   system coin dim 2 labels h, t
///   state initial on coin, qubit = sqrt(1/3)*|h,0> + sqrt(2/3)*|t,0>
///   observable X on coin outcome ok = ... outcome fail = ...
///   unitary flip on qubit controlled by coin when h apply [|0>; |1>] ...
///   step alice measure A by Alice     (also: apply U | prepare sys as st)
///   perspective observer collapse alice, bob     (or: collapse none)
///
/// Coefficients are decimal numbers, fractions, sqrt(fraction), i, and
/// their products. Repeated kets accumulate, so complex amplitudes can be
/// written as a real term plus an i* term. Parsing continues past a bad
/// statement so one pass reports as much as possible; any diagnostic means
/// no scenario is returned.
ParseResult parse_scenario(std::string_view text);

/// Renders a scenario back to the text format with 17-significant-digit
/// coefficients, so parse -> serialize -> parse is structurally idempotent.
/// Throws DomainError for constructs the grammar cannot express: operators
/// without a controlled form, and outcome projectors of rank above one.
std::string serialize_scenario(const Scenario& s);

/// Ket-expression text for a state's nonzero amplitudes, e.g.
/// "0.57735*|h,0> + 0.57735*|t,0>". Amplitude components smaller in
/// magnitude than drop_below are omitted.
std::string ket_expression(const PureState& state, int significant_digits,
                           double drop_below = 1e-15);

}  // namespace wigner
