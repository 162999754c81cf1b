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

#include <string>

#include "wigner/frames.hpp"
#include "wigner/scenario.hpp"

namespace wigner {

enum class Format { Text, Json };

/// Six significant digits; values below zero_tol print as exact "0" so
/// structural zeros are visibly distinct from small numbers.
std::string format_probability(double p, double zero_tol = kZeroProbability);

/// Aligned outcome/probability table, or a JSON object keyed by
/// comma-joined outcome tuples.
std::string render(const Distribution& d, Format format,
                   double zero_tol = kZeroProbability);

/// Branch table: index, weight, measurement record, final state ket.
std::string render(const BranchEnsemble& e, Format format);

std::string render(const NoSignalingReport& r, Format format, double tol = kTol);

/// SAT: the witness assignment. UNSAT: the numbered deduction trace.
std::string render(const ValuationResult& r, Format format);

/// Joint tables, impossible outcomes, the induced valuation problem, and
/// the search result.
std::string render(const ContradictionReport& r, Format format);

/// Frames with their atoms and modalities, plus pairwise intertwinements.
std::string render(const FramesReport& r, Format format);

}  // namespace wigner
