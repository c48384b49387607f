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

#include "rh/hilbert.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace rh {

namespace {

std::string describe(const char* what, double magnitude) {
  std::ostringstream os;
  os << what << " (max violation " << magnitude << ")";
  return os.str();
}

}  // namespace

// ---- errors / tolerances -------------------------------------------------

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::NotHermitian: return "NotHermitian";
    case Errc::NotIdempotent: return "NotIdempotent";
    case Errc::NotExclusive: return "NotExclusive";
    case Errc::NotExhaustive: return "NotExhaustive";
    case Errc::NotNormalized: return "NotNormalized";
    case Errc::EigendecompositionFailure: return "EigendecompositionFailure";
    case Errc::DimensionMismatch: return "DimensionMismatch";
    case Errc::TimesNotIncreasing: return "TimesNotIncreasing";
    case Errc::CompletenessViolation: return "CompletenessViolation";
    case Errc::IndexOutOfRange: return "IndexOutOfRange";
    case Errc::InvalidPartition: return "InvalidPartition";
    case Errc::ScheduleMismatch: return "ScheduleMismatch";
    case Errc::RecordTimeNotAfterHistories: return "RecordTimeNotAfterHistories";
    case Errc::WrongKind: return "WrongKind";
    case Errc::NotRecorded: return "NotRecorded";
    case Errc::AlignmentIncomplete: return "AlignmentIncomplete";
    case Errc::NotDecoherent: return "NotDecoherent";
    case Errc::AllBranchesNull: return "AllBranchesNull";
    case Errc::ZeroEvidence: return "ZeroEvidence";
    case Errc::ParamOutOfRange: return "ParamOutOfRange";
    case Errc::PacketOverflow: return "PacketOverflow";
    case Errc::DimensionGuard: return "DimensionGuard";
    case Errc::ProbabilityMismatch: return "ProbabilityMismatch";
    case Errc::HierarchyViolation: return "HierarchyViolation";
  }
  return "Unknown";
}

Error::Error(Errc code, std::string detail, double magnitude)
    : std::runtime_error(std::string(to_string(code)) + ": " + detail),
      code_(code),
      magnitude_(magnitude) {}

void ToleranceConfig::validate() const {
  for (double v : {norm, herm, proj, rec, dec}) {
    if (!(v >= 0.0)) throw Error(Errc::ParamOutOfRange, "tolerances must be nonnegative");
  }
}

ToleranceConfig ToleranceConfig::profile(std::string_view name) {
  ToleranceConfig t;
  if (name == "default" || name.empty()) return t;
  if (name == "strict") return {1e-14, 1e-14, 1e-12, 1e-10, 1e-10};
  if (name == "loose") return {1e-9, 1e-9, 1e-8, 1e-6, 1e-6};
  throw Error(Errc::ParamOutOfRange, "unknown tolerance profile '" + std::string(name) + "'");
}

// ---- kernels -------------------------------------------------------------

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

bool is_diagonal(const Matrix& m) {
  if (m.rows() != m.cols()) return false;
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (i != j && m(i, j) != Complex{}) return false;
  return true;
}

Matrix multiply(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw Error(Errc::DimensionMismatch, "matrix product shapes");
  if (is_diagonal(a)) return a.diagonal().asDiagonal() * b;
  if (is_diagonal(b)) return a * b.diagonal().asDiagonal();
  return a * b;
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Vector kron(const Vector& a, const Vector& b) {
  Vector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

// ---- states and operators --------------------------------------------------

StateVector::StateVector(Vector amplitudes, const ToleranceConfig& tol)
    : amplitudes_(std::move(amplitudes)) {
  if (amplitudes_.size() == 0) throw Error(Errc::DimensionMismatch, "empty state vector");
  double dev = std::abs(amplitudes_.norm() - 1.0);
  if (dev > tol.norm) throw Error(Errc::NotNormalized, describe("state norm differs from 1", dev), dev);
}

StateVector StateVector::normalized(Vector amplitudes) {
  double n = amplitudes.norm();
  if (!(n > 0.0)) throw Error(Errc::NotNormalized, "cannot normalize a zero vector");
  amplitudes /= n;
  return StateVector(std::move(amplitudes));
}

HermitianOperator::HermitianOperator(Matrix entries, const ToleranceConfig& tol)
    : entries_(std::move(entries)) {
  if (entries_.rows() != entries_.cols() || entries_.rows() == 0)
    throw Error(Errc::DimensionMismatch, "Hamiltonian must be a nonempty square matrix");
  double dev = max_abs(entries_ - entries_.adjoint());
  if (dev > tol.herm) throw Error(Errc::NotHermitian, describe("H differs from its adjoint", dev), dev);
}

HermitianOperator HermitianOperator::zero(std::size_t dim) {
  return HermitianOperator(Matrix::Zero(dim, dim));
}

Projector validate_projector(Matrix m, const ToleranceConfig& tol) {
  if (m.rows() != m.cols() || m.rows() == 0)
    throw Error(Errc::DimensionMismatch, "projector must be a nonempty square matrix");
  double herm = max_abs(m - m.adjoint());
  if (herm > tol.herm) throw Error(Errc::NotHermitian, describe("P differs from its adjoint", herm), herm);
  double idem = is_diagonal(m) ? (m.diagonal().array().square() - m.diagonal().array()).abs().maxCoeff()
                               : max_abs(m * m - m);
  if (idem > tol.proj) throw Error(Errc::NotIdempotent, describe("P*P differs from P", idem), idem);
  auto rank = static_cast<std::size_t>(std::llround(m.trace().real()));
  return Projector(std::move(m), rank);
}

Projector Projector::identity(std::size_t dim) { return Projector(Matrix::Identity(dim, dim), dim); }

Projector Projector::zero(std::size_t dim) { return Projector(Matrix::Zero(dim, dim), 0); }

Projector Projector::onto(const Vector& v) {
  double n2 = v.squaredNorm();
  if (!(n2 > 0.0)) throw Error(Errc::NotNormalized, "rank-1 projector onto a zero vector");
  return Projector(v * v.adjoint() / n2, 1);
}

Projector Projector::basis(std::size_t dim, const std::vector<std::size_t>& indices) {
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t i : indices) {
    if (i >= dim) throw Error(Errc::IndexOutOfRange, "basis index " + std::to_string(i));
    if (m(i, i) != Complex{}) throw Error(Errc::NotIdempotent, "repeated basis index", 1.0);
    m(i, i) = 1.0;
  }
  return Projector(std::move(m), indices.size());
}

ProjectorFamily validate_family(std::vector<Projector> members, std::vector<std::string> labels,
                                const ToleranceConfig& tol) {
  if (members.empty()) throw Error(Errc::NotExhaustive, "empty family", 1.0);
  std::size_t dim = members.front().dim();
  for (const auto& p : members)
    if (p.dim() != dim) throw Error(Errc::DimensionMismatch, "family members differ in dimension");
  if (labels.empty())
    for (std::size_t i = 0; i < members.size(); ++i) labels.push_back(std::to_string(i));
  if (labels.size() != members.size())
    throw Error(Errc::DimensionMismatch, "label count differs from member count");

  Matrix sum = Matrix::Zero(dim, dim);
  for (const auto& p : members) sum += p.entries();
  double exhaust = max_abs(sum - Matrix::Identity(dim, dim));

  std::vector<bool> diagonal;
  for (const auto& p : members) diagonal.push_back(is_diagonal(p.entries()));
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      const Matrix& pa = members[a].entries();
      const Matrix& pb = members[b].entries();
      double overlap = diagonal[a] && diagonal[b]
                           ? pa.diagonal().cwiseProduct(pb.diagonal()).cwiseAbs().maxCoeff()
                           : max_abs(multiply(pa, pb));
      if (overlap > tol.proj) {
        std::ostringstream os;
        os << "members " << a << " and " << b << " overlap (max entry " << overlap << ")";
        if (exhaust > tol.proj) os << "; also NotExhaustive (|sum - I| = " << exhaust << ")";
        throw Error(Errc::NotExclusive, os.str(), overlap);
      }
    }
  }
  if (exhaust > tol.proj) throw Error(Errc::NotExhaustive, describe("sum of members differs from I", exhaust), exhaust);
  return ProjectorFamily(dim, std::move(members), std::move(labels));
}

// ---- evolution -------------------------------------------------------------

Matrix unitary_of(const HermitianOperator& h, double dt) {
  const Matrix& m = h.entries();
  const auto n = m.rows();
  if (dt == 0.0 || h.is_zero()) return Matrix::Identity(n, n);
  if (is_diagonal(m)) {
    Vector phases(n);
    for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::polar(1.0, m(i, i).real() * dt);
    return phases.asDiagonal();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(m);
  if (eig.info() != Eigen::Success)
    throw Error(Errc::EigendecompositionFailure, "Hermitian eigensolver did not converge");
  Vector phases(n);
  for (Eigen::Index i = 0; i < n; ++i) phases(i) = std::polar(1.0, eig.eigenvalues()(i) * dt);
  return eig.eigenvectors() * phases.asDiagonal() * eig.eigenvectors().adjoint();
}

namespace detail {

struct ProjectorAccess {
  static Projector make(Matrix m, std::size_t rank) { return Projector(std::move(m), rank); }
  static ProjectorFamily family(std::size_t dim, std::vector<Projector> members, std::vector<std::string> labels) {
    return ProjectorFamily(dim, std::move(members), std::move(labels));
  }
};

}  // namespace detail

namespace {

Projector conjugate(const Projector& p, const Matrix& u, const ToleranceConfig& tol) {
  const Matrix& e = p.entries();
  if (!is_diagonal(e)) {
    Matrix m = multiply(multiply(u, e), u.adjoint());
    m = 0.5 * (m + m.adjoint()).eval();
    return validate_projector(std::move(m), tol);
  }
  // U P U† = W W† with W the columns of U selected by P.
  std::vector<Eigen::Index> cols;
  for (Eigen::Index i = 0; i < e.rows(); ++i)
    if (e(i, i).real() > 0.5) cols.push_back(i);
  const auto r = static_cast<Eigen::Index>(cols.size());
  Matrix w(u.rows(), r);
  for (Eigen::Index k = 0; k < r; ++k) w.col(k) = u.col(cols[static_cast<std::size_t>(k)]);
  Matrix m = w * w.adjoint();
  m = 0.5 * (m + m.adjoint()).eval();
  // (W W†)² − W W† = W (W†W − I) W†
  Matrix g = w.adjoint() * w - Matrix::Identity(r, r);
  double idem = r == 0 ? 0.0 : max_abs(w * (g * w.adjoint()));
  if (idem > tol.proj) throw Error(Errc::NotIdempotent, describe("evolved P*P differs from P", idem), idem);
  return detail::ProjectorAccess::make(std::move(m), cols.size());
}

}  // namespace

Projector evolve_projector(const Projector& p, const HermitianOperator& h, double t_from,
                           double t_to, const ToleranceConfig& tol) {
  if (p.dim() != h.dim()) throw Error(Errc::DimensionMismatch, "projector and Hamiltonian dimensions");
  if (t_to == t_from || h.is_zero()) return p;
  return conjugate(p, unitary_of(h, t_to - t_from), tol);
}

ProjectorFamily evolve_family(const ProjectorFamily& family, const HermitianOperator& h,
                              double t_from, double t_to, const ToleranceConfig& tol) {
  if (family.dim() != h.dim()) throw Error(Errc::DimensionMismatch, "family and Hamiltonian dimensions");
  if (t_to == t_from || h.is_zero()) return family;
  Matrix u = unitary_of(h, t_to - t_from);
  std::vector<Projector> out;
  out.reserve(family.size());
  Matrix sum = Matrix::Zero(u.rows(), u.cols());
  for (const auto& p : family.members()) {
    out.push_back(conjugate(p, u, tol));
    sum += out.back().entries();
  }
  // Conjugation by a unitary preserves exclusivity; only the rounding in Σ P is rechecked.
  double exhaust = max_abs(sum - Matrix::Identity(u.rows(), u.cols()));
  if (exhaust > tol.proj)
    throw Error(Errc::NotExhaustive, describe("evolved members no longer sum to I", exhaust), exhaust);
  return detail::ProjectorAccess::family(family.dim(), std::move(out), family.labels());
}

ProjectorFamily merge_members(const ProjectorFamily& family, const std::vector<std::vector<std::size_t>>& groups,
                              std::vector<std::string> labels, const ToleranceConfig& tol) {
  if (labels.size() != groups.size()) throw Error(Errc::DimensionMismatch, "label count differs from group count");
  const auto n = static_cast<Eigen::Index>(family.dim());
  std::vector<bool> used(family.size(), false);
  std::vector<Projector> out;
  for (const auto& group : groups) {
    if (group.empty()) throw Error(Errc::InvalidPartition, "empty member group");
    Matrix sum = Matrix::Zero(n, n);
    for (std::size_t i : group) {
      if (i >= family.size() || used[i]) throw Error(Errc::InvalidPartition, "member " + std::to_string(i) + " grouped twice or out of range");
      used[i] = true;
      sum += family[i].entries();
    }
    out.push_back(group.size() == 1 ? family[group.front()] : validate_projector(std::move(sum), tol));
  }
  if (std::find(used.begin(), used.end(), false) != used.end())
    throw Error(Errc::InvalidPartition, "member groups do not cover the family");
  return detail::ProjectorAccess::family(family.dim(), std::move(out), std::move(labels));
}

std::vector<Vector> lowdin_orthonormalize(const std::vector<Vector>& vectors) {
  if (vectors.empty()) return {};
  const auto n = static_cast<Eigen::Index>(vectors.size());
  Matrix x(vectors.front().size(), n);
  for (Eigen::Index k = 0; k < n; ++k) {
    double nk = vectors[k].norm();
    if (!(nk > 0.0)) throw Error(Errc::EigendecompositionFailure, "zero vector in orthonormalization");
    x.col(k) = vectors[k] / nk;
  }
  Matrix gram = x.adjoint() * x;
  Eigen::SelfAdjointEigenSolver<Matrix> eig(gram);
  if (eig.info() != Eigen::Success)
    throw Error(Errc::EigendecompositionFailure, "Gram eigensolver did not converge");
  constexpr double kDependent = 1e-13;
  if (eig.eigenvalues().minCoeff() < kDependent)
    throw Error(Errc::EigendecompositionFailure, "vectors are linearly dependent", eig.eigenvalues().minCoeff());
  Eigen::VectorXd inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  Matrix f = x * (eig.eigenvectors() * inv_sqrt.cast<Complex>().asDiagonal() * eig.eigenvectors().adjoint());
  std::vector<Vector> out;
  for (Eigen::Index k = 0; k < n; ++k) out.emplace_back(f.col(k));
  return out;
}

}  // namespace rh
