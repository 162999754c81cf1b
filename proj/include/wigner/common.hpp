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

#include <complex>
#include <stdexcept>
#include <string>

namespace wigner {

using Complex = std::complex<double>;

/// Global comparison tolerance. Separates the exact zeros of the scenarios
/// handled here from double-precision roundoff.
inline constexpr double kTol = 1e-9;

/// Born probabilities below this are classified as impossible events.
/// Shared with the frames module so "zero probability" is one global notion.
inline constexpr double kZeroProbability = 1e-9;

/// Branches with weight below this are pruned from ensembles.
inline constexpr double kBranchPrune = 1e-12;

/// Minimum event probability accepted by conditionalize.
inline constexpr double kConditionThreshold = 1e-12;

/// Composite-dimension guard. The artifact is a desk-scale verifier.
inline constexpr long kMaxCompositeDimension = 4096;

/// Guard on the assignment space searched by global_valuation.
inline constexpr long kMaxValuationSpace = 1L << 20;

/// Violation of a domain rule: mismatched systems, non-orthogonal inputs,
/// conditioning on an impossible event, exceeded guards. Carries a message
/// naming the offender.
class DomainError : public std::runtime_error {
 public:
  explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace wigner
