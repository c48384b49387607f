// Copyright 2026 The rhist Authors
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
#include <cstddef>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rh/error.hpp"
#include "rh/tolerance.hpp"

namespace rh {

namespace detail {
struct ProjectorAccess;
}

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

/// max_ij |m_ij|
double max_abs(const Matrix& m);

/// True when every off-diagonal entry is exactly zero.
bool is_diagonal(const Matrix& m);

/// a * b with fast paths when either factor is exactly diagonal.
Matrix multiply(const Matrix& a, const Matrix& b);

/// Kronecker product a ⊗ b (a is the slow index).
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

/// Normalized pure state |Ψ⟩.
class StateVector {
 public:
  /// Validates ‖v‖ = 1 within tol.norm; throws NotNormalized.
  StateVector(Vector amplitudes, const ToleranceConfig& tol = {});

  /// Divides by the norm; throws NotNormalized for a (numerically) zero vector.
  static StateVector normalized(Vector amplitudes);

  std::size_t dim() const { return static_cast<std::size_t>(amplitudes_.size()); }
  const Vector& amplitudes() const { return amplitudes_; }

 private:
  Vector amplitudes_;
};

class HermitianOperator {
 public:
  /// Throws NotHermitian (magnitude = max |M − M†|) or DimensionMismatch if not square.
  HermitianOperator(Matrix entries, const ToleranceConfig& tol = {});

  static HermitianOperator zero(std::size_t dim);

  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  bool is_zero() const { return entries_.isZero(0.0); }

 private:
  Matrix entries_;
};

class Projector {
 public:
  std::size_t dim() const { return static_cast<std::size_t>(entries_.rows()); }
  const Matrix& entries() const { return entries_; }
  std::size_t rank() const { return rank_; }

  static Projector identity(std::size_t dim);
  static Projector zero(std::size_t dim);
  /// |v⟩⟨v| / ⟨v|v⟩
  static Projector onto(const Vector& v);
  /// Sum of computational-basis projectors for the given indices.
  static Projector basis(std::size_t dim, const std::vector<std::size_t>& indices);

 private:
  friend Projector validate_projector(Matrix m, const ToleranceConfig& tol);
  friend struct detail::ProjectorAccess;
  Projector(Matrix entries, std::size_t rank) : entries_(std::move(entries)), rank_(rank) {}

  Matrix entries_;
  std::size_t rank_ = 0;
};

/// Checks Hermiticity then idempotency and caches rank = round(trace).
Projector validate_projector(Matrix m, const ToleranceConfig& tol = {});

/// Exhaustive set of mutually exclusive projectors.
class ProjectorFamily {
 public:
  std::size_t dim() const { return dim_; }
  std::size_t size() const { return members_.size(); }
  const std::vector<Projector>& members() const { return members_; }
  const Projector& operator[](std::size_t i) const { return members_[i]; }
  const std::vector<std::string>& labels() const { return labels_; }

 private:
  friend struct detail::ProjectorAccess;
  friend ProjectorFamily validate_family(std::vector<Projector>, std::vector<std::string>,
                                         const ToleranceConfig&);
  ProjectorFamily(std::size_t dim, std::vector<Projector> members, std::vector<std::string> labels)
      : dim_(dim), members_(std::move(members)), labels_(std::move(labels)) {}

  std::size_t dim_ = 0;
  std::vector<Projector> members_;
  std::vector<std::string> labels_;
};

/// Empty labels are replaced by "0", "1", ...  Throws DimensionMismatch,
/// NotExclusive (first offending pair) or NotExhaustive (‖Σ P − I‖_max). When
/// both exclusivity and exhaustiveness fail the message names both.
ProjectorFamily validate_family(std::vector<Projector> members, std::vector<std::string> labels = {},
                                const ToleranceConfig& tol = {});

/// e^{iHΔt} via Hermitian eigendecomposition.
Matrix unitary_of(const HermitianOperator& h, double dt);

/// Heisenberg evolution e^{iH(t_to−t_from)} P e^{−iH(t_to−t_from)}.
Projector evolve_projector(const Projector& p, const HermitianOperator& h, double t_from,
                           double t_to, const ToleranceConfig& tol = {});

/// Same as evolve_projector applied to every member, reusing one unitary.
ProjectorFamily evolve_family(const ProjectorFamily& family, const HermitianOperator& h,
                              double t_from, double t_to, const ToleranceConfig& tol = {});

/// Family whose members are sums over disjoint groups of `family` members. Exclusivity is
/// inherited; each sum is checked for idempotency and the groups must cover every member.
/// Errors: InvalidPartition, NotIdempotent.
ProjectorFamily merge_members(const ProjectorFamily& family, const std::vector<std::vector<std::size_t>>& groups,
                              std::vector<std::string> labels, const ToleranceConfig& tol = {});

/// Symmetric (Löwdin) orthonormalization of linearly independent vectors:
/// the orthonormal set closest to the normalized inputs. Throws
/// EigendecompositionFailure when the inputs are (numerically) dependent.
std::vector<Vector> lowdin_orthonormalize(const std::vector<Vector>& vectors);

}  // namespace rh
