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

#include "wigner/linalg.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace wigner {

namespace {

long checked_joint_dimension(const std::vector<SystemSpec>& systems) {
  long dim = 1;
  std::set<std::string> seen;
  for (const auto& sys : systems) {
    sys.validate();
    if (!seen.insert(sys.name).second) {
      throw DomainError("duplicate system '" + sys.name + "' in joint space");
    }
    dim *= sys.dimension;
    if (dim > kMaxCompositeDimension) {
      std::ostringstream msg;
      msg << "composite dimension exceeds the guard of " << kMaxCompositeDimension;
      throw DomainError(msg.str());
    }
  }
  return dim;
}

// Row-major strides: the first system varies slowest.
std::vector<Eigen::Index> strides_of(const std::vector<SystemSpec>& systems) {
  std::vector<Eigen::Index> stride(systems.size(), 1);
  for (int i = static_cast<int>(systems.size()) - 2; i >= 0; --i) {
    stride[i] = stride[i + 1] * systems[i + 1].dimension;
  }
  return stride;
}

}  // namespace

int SystemSpec::label_index(std::string_view label) const {
  for (std::size_t i = 0; i < basis_labels.size(); ++i) {
    if (basis_labels[i] == label) return static_cast<int>(i);
  }
  return -1;
}

void SystemSpec::validate() const {
  if (name.empty()) throw DomainError("system name must be nonempty");
  if (dimension < 1) {
    throw DomainError("system '" + name + "' must have positive dimension");
  }
  if (static_cast<int>(basis_labels.size()) != dimension) {
    std::ostringstream msg;
    msg << "system '" << name << "' declares " << basis_labels.size()
        << " labels for dimension " << dimension;
    throw DomainError(msg.str());
  }
  std::set<std::string> seen;
  for (const auto& label : basis_labels) {
    if (!seen.insert(label).second) {
      throw DomainError("system '" + name + "' repeats basis label '" + label + "'");
    }
  }
}

PureState::PureState(std::vector<SystemSpec> systems, Eigen::VectorXcd amplitudes)
    : systems_(std::move(systems)), amplitudes_(std::move(amplitudes)) {
  const long dim = checked_joint_dimension(systems_);
  if (amplitudes_.size() != dim) {
    std::ostringstream msg;
    msg << "amplitude vector has length " << amplitudes_.size()
        << " but the joint basis has dimension " << dim;
    throw DomainError(msg.str());
  }
}

PureState PureState::basis_state(std::vector<SystemSpec> systems,
                                 std::span<const std::string> labels) {
  const long dim = checked_joint_dimension(systems);
  Eigen::VectorXcd amps = Eigen::VectorXcd::Zero(dim);
  PureState state(std::move(systems), std::move(amps));
  state.amplitudes_[state.index_of(labels)] = Complex(1.0, 0.0);
  return state;
}

Eigen::Index PureState::index_of(std::span<const std::string> labels) const {
  if (labels.size() != systems_.size()) {
    std::ostringstream msg;
    msg << "label tuple has " << labels.size() << " entries for "
        << systems_.size() << " systems";
    throw DomainError(msg.str());
  }
  const auto stride = strides_of(systems_);
  Eigen::Index index = 0;
  for (std::size_t i = 0; i < systems_.size(); ++i) {
    const int li = systems_[i].label_index(labels[i]);
    if (li < 0) {
      throw DomainError("system '" + systems_[i].name + "' has no basis label '" +
                        labels[i] + "'");
    }
    index += li * stride[i];
  }
  return index;
}

std::vector<std::string> PureState::labels_at(Eigen::Index index) const {
  if (index < 0 || index >= dimension()) {
    throw DomainError("basis index out of range");
  }
  std::vector<std::string> labels(systems_.size());
  for (int i = static_cast<int>(systems_.size()) - 1; i >= 0; --i) {
    const int d = systems_[i].dimension;
    labels[i] = systems_[i].basis_labels[index % d];
    index /= d;
  }
  return labels;
}

OperatorMatrix::OperatorMatrix(std::vector<SystemSpec> sys, Eigen::MatrixXcd m)
    : systems(std::move(sys)), entries(std::move(m)) {
  const long dim = checked_joint_dimension(systems);
  if (entries.rows() != entries.cols()) {
    throw DomainError("operator matrix must be square");
  }
  if (entries.rows() != dim) {
    std::ostringstream msg;
    msg << "operator matrix has dimension " << entries.rows()
        << " but the joint basis has dimension " << dim;
    throw DomainError(msg.str());
  }
}

Projector::Projector(OperatorMatrix op) : op_(std::move(op)) {
  const auto& m = op_.entries;
  const double herm = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (herm > kTol) {
    std::ostringstream msg;
    msg << "projector is not self-adjoint (max deviation " << herm << ")";
    throw DomainError(msg.str());
  }
  const double idem = (m * m - m).cwiseAbs().maxCoeff();
  if (idem > kTol) {
    std::ostringstream msg;
    msg << "projector is not idempotent (max deviation " << idem << ")";
    throw DomainError(msg.str());
  }
}

Complex inner_product(const PureState& a, const PureState& b) {
  if (a.systems() != b.systems()) {
    throw DomainError("inner product of states on different system lists");
  }
  return a.amplitudes().dot(b.amplitudes());  // conjugates a
}

PureState normalize(const PureState& s) {
  const double n = s.norm();
  if (n < 1e-300) throw DomainError("cannot normalize a zero state");
  return PureState(s.systems(), s.amplitudes() / n);
}

PureState tensor(const PureState& a, const PureState& b) {
  for (const auto& sys : a.systems()) {
    for (const auto& other : b.systems()) {
      if (sys.name == other.name) {
        throw DomainError("tensor operands share system '" + sys.name + "'");
      }
    }
  }
  std::vector<SystemSpec> systems = a.systems();
  systems.insert(systems.end(), b.systems().begin(), b.systems().end());
  Eigen::VectorXcd amps(a.dimension() * b.dimension());
  for (Eigen::Index i = 0; i < a.dimension(); ++i) {
    amps.segment(i * b.dimension(), b.dimension()) = a.amplitudes()[i] * b.amplitudes();
  }
  return PureState(std::move(systems), std::move(amps));
}

OperatorMatrix tensor(const OperatorMatrix& a, const OperatorMatrix& b) {
  for (const auto& sys : a.systems) {
    for (const auto& other : b.systems) {
      if (sys.name == other.name) {
        throw DomainError("tensor operands share system '" + sys.name + "'");
      }
    }
  }
  std::vector<SystemSpec> systems = a.systems;
  systems.insert(systems.end(), b.systems.begin(), b.systems.end());
  const Eigen::Index da = a.dimension(), db = b.dimension();
  Eigen::MatrixXcd m(da * db, da * db);
  for (Eigen::Index i = 0; i < da; ++i) {
    for (Eigen::Index j = 0; j < da; ++j) {
      m.block(i * db, j * db, db, db) = a.entries(i, j) * b.entries;
    }
  }
  return OperatorMatrix(std::move(systems), std::move(m));
}

OperatorMatrix identity_on(std::vector<SystemSpec> systems) {
  const long dim = checked_joint_dimension(systems);
  return OperatorMatrix(std::move(systems), Eigen::MatrixXcd::Identity(dim, dim));
}

OperatorMatrix adjoint(const OperatorMatrix& op) {
  return OperatorMatrix(op.systems, op.entries.adjoint());
}

bool is_unitary(const OperatorMatrix& op, double tol) {
  const Eigen::Index d = op.dimension();
  return (op.entries.adjoint() * op.entries - Eigen::MatrixXcd::Identity(d, d))
             .cwiseAbs()
             .maxCoeff() <= tol;
}

PureState apply(const OperatorMatrix& op, const PureState& s) {
  // Positions of the operator's subsystems inside the state, in operator order.
  std::vector<std::size_t> target(op.systems.size());
  for (std::size_t i = 0; i < op.systems.size(); ++i) {
    bool found = false;
    for (std::size_t j = 0; j < s.systems().size(); ++j) {
      if (s.systems()[j].name == op.systems[i].name) {
        if (!(s.systems()[j] == op.systems[i])) {
          throw DomainError("subsystem '" + op.systems[i].name +
                            "' differs between operator and state");
        }
        target[i] = j;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DomainError("subsystem '" + op.systems[i].name + "' not present in state");
    }
  }

  const auto stride = strides_of(s.systems());
  const Eigen::Index d_op = op.dimension();

  // Flat offset of each operator-basis index inside the full state.
  std::vector<Eigen::Index> offset(d_op, 0);
  {
    std::vector<int> digits(op.systems.size(), 0);
    for (Eigen::Index t = 0; t < d_op; ++t) {
      Eigen::Index off = 0;
      for (std::size_t i = 0; i < op.systems.size(); ++i) {
        off += digits[i] * stride[target[i]];
      }
      offset[t] = off;
      for (int i = static_cast<int>(op.systems.size()) - 1; i >= 0; --i) {
        if (++digits[i] < op.systems[i].dimension) break;
        digits[i] = 0;
      }
    }
  }

  // Enumerate base offsets over the untouched systems.
  std::vector<std::size_t> rest;
  for (std::size_t j = 0; j < s.systems().size(); ++j) {
    if (std::find(target.begin(), target.end(), j) == target.end()) rest.push_back(j);
  }
  std::vector<Eigen::Index> bases;
  bases.reserve(s.dimension() / d_op);
  {
    std::vector<int> digits(rest.size(), 0);
    const Eigen::Index count = s.dimension() / d_op;
    for (Eigen::Index r = 0; r < count; ++r) {
      Eigen::Index base = 0;
      for (std::size_t i = 0; i < rest.size(); ++i) base += digits[i] * stride[rest[i]];
      bases.push_back(base);
      for (int i = static_cast<int>(rest.size()) - 1; i >= 0; --i) {
        if (++digits[i] < s.systems()[rest[i]].dimension) break;
        digits[i] = 0;
      }
    }
  }

  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(s.dimension());
  Eigen::VectorXcd slice(d_op);
  for (const Eigen::Index base : bases) {
    for (Eigen::Index t = 0; t < d_op; ++t) slice[t] = s.amplitudes()[base + offset[t]];
    slice = op.entries * slice;
    for (Eigen::Index t = 0; t < d_op; ++t) out[base + offset[t]] = slice[t];
  }
  return PureState(s.systems(), std::move(out));
}

Projector projector_onto(std::span<const PureState> vectors) {
  if (vectors.empty()) {
    throw DomainError("projector_onto requires at least one vector");
  }
  const auto& systems = vectors[0].systems();
  for (std::size_t i = 1; i < vectors.size(); ++i) {
    if (vectors[i].systems() != systems) {
      std::ostringstream msg;
      msg << "projector_onto vector " << i << " lives on a different system list";
      throw DomainError(msg.str());
    }
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    const double n = vectors[i].norm();
    if (std::abs(n - 1.0) > kTol) {
      std::ostringstream msg;
      msg << "projector_onto vector " << i << " is not normalized (norm " << n << ")";
      throw DomainError(msg.str());
    }
  }
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    for (std::size_t j = i + 1; j < vectors.size(); ++j) {
      const double overlap = std::abs(inner_product(vectors[i], vectors[j]));
      if (overlap > kTol) {
        std::ostringstream msg;
        msg << "projector_onto vectors " << i << " and " << j
            << " are not orthogonal (|overlap| " << overlap << ")";
        throw DomainError(msg.str());
      }
    }
  }
  const Eigen::Index d = vectors[0].dimension();
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(d, d);
  for (const auto& v : vectors) {
    p += v.amplitudes() * v.amplitudes().adjoint();
  }
  return Projector(OperatorMatrix(systems, std::move(p)));
}

bool commutes(const Projector& p, const Projector& q) {
  if (p.systems() != q.systems()) {
    throw DomainError("commutes: projectors live on different joint spaces");
  }
  const auto& a = p.entries();
  const auto& b = q.entries();
  return (a * b - b * a).cwiseAbs().maxCoeff() <= kTol;
}

}  // namespace wigner
