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

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "wigner/common.hpp"

namespace wigner {

/// A named finite-dimensional subsystem with an ordered, labeled basis.
struct SystemSpec {
  std::string name;
  int dimension = 0;
  std::vector<std::string> basis_labels;

  /// Index of `label` in the basis, -1 if absent.
  int label_index(std::string_view label) const;

  /// Throws DomainError unless labels are distinct and match the dimension.
  void validate() const;

  friend bool operator==(const SystemSpec&, const SystemSpec&) = default;
};

/// Complex amplitude vector over the joint basis of an ordered list of
/// subsystems. Amplitudes are indexed row-major in declared system order:
/// the first system varies slowest. Label-tuple I/O always uses declared
/// order.
class PureState {
 public:
  PureState(std::vector<SystemSpec> systems, Eigen::VectorXcd amplitudes);

  /// The basis state with amplitude 1 on the given label tuple.
  static PureState basis_state(std::vector<SystemSpec> systems,
                               std::span<const std::string> labels);

  const std::vector<SystemSpec>& systems() const { return systems_; }
  const Eigen::VectorXcd& amplitudes() const { return amplitudes_; }
  Eigen::VectorXcd& amplitudes() { return amplitudes_; }
  Eigen::Index dimension() const { return amplitudes_.size(); }

  double norm() const { return amplitudes_.norm(); }

  /// Flat index of a full label tuple (one label per system, declared order).
  Eigen::Index index_of(std::span<const std::string> labels) const;

  /// Label tuple at a flat index.
  std::vector<std::string> labels_at(Eigen::Index index) const;

  Complex amplitude(std::span<const std::string> labels) const {
    return amplitudes_[index_of(labels)];
  }

 private:
  std::vector<SystemSpec> systems_;
  Eigen::VectorXcd amplitudes_;
};

/// Square complex matrix over the joint basis of an ordered subsystem list.
/// Carrier for unitaries and projectors.
struct OperatorMatrix {
  OperatorMatrix(std::vector<SystemSpec> systems, Eigen::MatrixXcd entries);

  std::vector<SystemSpec> systems;
  Eigen::MatrixXcd entries;

  Eigen::Index dimension() const { return entries.rows(); }
};

/// Orthogonal projector: P = P-dagger and P^2 = P within kTol, checked at
/// construction.
class Projector {
 public:
  explicit Projector(OperatorMatrix op);

  const OperatorMatrix& op() const { return op_; }
  const std::vector<SystemSpec>& systems() const { return op_.systems; }
  const Eigen::MatrixXcd& entries() const { return op_.entries; }

 private:
  OperatorMatrix op_;
};

/// <a|b>. States must live on the same system list.
Complex inner_product(const PureState& a, const PureState& b);

/// Rescales to unit norm; idempotent. Throws on (numerically) zero states.
PureState normalize(const PureState& s);

/// Product state on the concatenated system list. The operands must have
/// disjoint system sets.
PureState tensor(const PureState& a, const PureState& b);

/// Kronecker product on the concatenated system list.
OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b);

/// Identity operator on the given subsystem list.
OperatorMatrix identity_on(std::vector<SystemSpec> systems);

OperatorMatrix adjoint(const OperatorMatrix& op);

bool is_unitary(const OperatorMatrix& op, double tol = kTol);

/// Applies `op` on its subsystems, identity elsewhere. The operator's
/// subsystems must all occur in the state's system list; they may sit in
/// any positions and any order.
PureState apply(const OperatorMatrix& op, const PureState& s);

/// Sum of |v><v| over the given vectors, which must be mutually orthogonal
/// and normalized within kTol. Rejections name the offending pair or index.
Projector projector_onto(std::span<const PureState> vectors);

/// True iff the max-norm of PQ - QP is within kTol. Projectors must live on
/// the same joint space.
bool commutes(const Projector& p, const Projector& q);

}  // namespace wigner
