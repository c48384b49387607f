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

// Random finite models for property tests.

#include <algorithm>
#include <cmath>
#include <optional>
#include <random>
#include <vector>

#include "rh/histories.hpp"
#include "rh/measures.hpp"

namespace rh::gen {

inline Matrix random_unitary(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Matrix z(n, n);
  for (Eigen::Index i = 0; i < z.rows(); ++i)
    for (Eigen::Index j = 0; j < z.cols(); ++j) z(i, j) = Complex(g(rng), g(rng));
  Eigen::HouseholderQR<Matrix> qr(z);
  return qr.householderQ() * Matrix::Identity(n, n);
}

inline Vector random_vector(std::size_t n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vector v(n);
  for (Eigen::Index i = 0; i < v.size(); ++i) v(i) = Complex(g(rng), g(rng));
  return v;
}

inline StateVector random_state(std::size_t n, std::mt19937_64& rng) {
  return StateVector::normalized(random_vector(n, rng));
}

inline HermitianOperator random_hamiltonian(std::size_t n, std::mt19937_64& rng) {
  Matrix a(n, n);
  std::normal_distribution<double> g;
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) a(i, j) = Complex(g(rng), g(rng));
  return HermitianOperator(0.5 * (a + a.adjoint()));
}

/// Splits the columns of a random unitary into `parts` nonempty blocks.
inline ProjectorFamily random_family(std::size_t n, std::size_t parts, std::mt19937_64& rng) {
  Matrix u = random_unitary(n, rng);
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i < parts ? i : std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng);
  std::vector<Projector> members;
  for (std::size_t p = 0; p < parts; ++p) {
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      if (owner[i] == p) m += u.col(i) * u.col(i).adjoint();
    members.push_back(validate_projector(0.5 * (m + m.adjoint())));
  }
  return validate_family(std::move(members));
}

/// Random set with 1..max_times slots on a space of dimension 2..max_dim.
struct RandomModel {
  StateVector state;
  HistorySet set;
};

inline RandomModel random_model(std::mt19937_64& rng, std::size_t max_dim = 8, std::size_t max_times = 3) {
  std::size_t n = std::uniform_int_distribution<std::size_t>(2, max_dim)(rng);
  std::size_t times = std::uniform_int_distribution<std::size_t>(1, max_times)(rng);
  bool dynamic = std::bernoulli_distribution(0.5)(rng);
  HermitianOperator h = dynamic ? random_hamiltonian(n, rng) : HermitianOperator::zero(n);
  std::vector<ScheduledFamily> schedule;
  for (std::size_t t = 0; t < times; ++t) {
    std::size_t parts = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(n, 3))(rng);
    schedule.emplace_back(random_family(n, parts, rng), static_cast<double>(t) * 0.7);
  }
  return {random_state(n, rng), build_history_set(std::move(h), std::move(schedule))};
}

/// Random families that all commute: blocks of columns of one unitary.
inline ProjectorFamily commuting_family(const Matrix& u, std::size_t parts, std::mt19937_64& rng) {
  const auto n = static_cast<std::size_t>(u.rows());
  std::vector<std::size_t> owner(n);
  for (std::size_t i = 0; i < n; ++i) owner[i] = i < parts ? i : std::uniform_int_distribution<std::size_t>(0, parts - 1)(rng);
  std::shuffle(owner.begin(), owner.end(), rng);
  std::vector<Projector> members;
  for (std::size_t p = 0; p < parts; ++p) {
    Matrix m = Matrix::Zero(n, n);
    for (std::size_t i = 0; i < n; ++i)
      if (owner[i] == p) m += u.col(i) * u.col(i).adjoint();
    members.push_back(validate_projector(0.5 * (m + m.adjoint())));
  }
  return validate_family(std::move(members));
}

/// Exactly decoherent set: commuting families and a Hamiltonian diagonal in the same basis.
inline RandomModel random_decoherent(std::mt19937_64& rng, std::size_t max_dim = 8, std::size_t max_times = 3) {
  std::size_t n = std::uniform_int_distribution<std::size_t>(2, max_dim)(rng);
  std::size_t times = std::uniform_int_distribution<std::size_t>(1, max_times)(rng);
  Matrix u = random_unitary(n, rng);
  std::normal_distribution<double> g;
  Eigen::VectorXd e(n);
  for (auto& x : e) x = g(rng);
  HermitianOperator h(u * e.cast<Complex>().asDiagonal() * u.adjoint());
  std::vector<ScheduledFamily> schedule;
  for (std::size_t t = 0; t < times; ++t) {
    std::size_t parts = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(n, 3))(rng);
    schedule.emplace_back(commuting_family(u, parts, rng), static_cast<double>(t));
  }
  return {random_state(n, rng), build_history_set(std::move(h), std::move(schedule))};
}

struct RecordedModel {
  StateVector state;
  HistorySet set;
  RecordFamily records;
};

/// Strongly recorded construction on system ⊗ ancilla (dim 2·d): commuting system
/// families, |Ψ⟩ = |ψ⟩⊗|a⟩ and R_α = C_α⊗|a⟩⟨a| + X_α⊗(I − |a⟩⟨a|) with X an
/// unrelated random family, so R_αΨ = C_αΨ without R_α = C_α.
inline RecordedModel random_strongly_recorded(std::mt19937_64& rng, std::size_t sys_dim,
                                              const std::vector<double>& times) {
  const std::size_t d = sys_dim;
  Matrix u = random_unitary(d, rng);
  std::normal_distribution<double> g;
  Eigen::VectorXd e(d);
  for (auto& x : e) x = g(rng);
  Matrix hs = u * e.cast<Complex>().asDiagonal() * u.adjoint();
  Matrix ha = random_hamiltonian(2, rng).entries();
  Matrix h = kron(hs, Matrix::Identity(2, 2)) + kron(Matrix::Identity(d, d), ha);
  HermitianOperator hsys(0.5 * (hs + hs.adjoint()));

  std::vector<ScheduledFamily> sys_schedule, schedule;
  for (double t : times) {
    std::size_t parts = std::uniform_int_distribution<std::size_t>(2, std::min<std::size_t>(d, 3))(rng);
    auto f = commuting_family(u, parts, rng);
    std::vector<Projector> lifted;
    for (const auto& p : f.members()) lifted.push_back(validate_projector(kron(p.entries(), Matrix::Identity(2, 2))));
    schedule.emplace_back(validate_family(std::move(lifted)), t);
    sys_schedule.emplace_back(std::move(f), t);
  }
  auto sys_set = build_history_set(hsys, std::move(sys_schedule));
  auto set = build_history_set(HermitianOperator(0.5 * (h + h.adjoint())), std::move(schedule));

  Vector a = random_vector(2, rng);
  a /= a.norm();
  Matrix pa = a * a.adjoint();
  Matrix qa = Matrix::Identity(2, 2) - pa;
  const std::size_t k = sys_set.count();
  auto x = random_family(d, std::min(k, d), rng);
  std::vector<std::size_t> slot(k);
  for (std::size_t i = 0; i < k; ++i) slot[i] = i;
  std::shuffle(slot.begin(), slot.end(), rng);
  std::vector<Projector> members;
  std::vector<std::optional<std::size_t>> alignment;
  for (std::size_t i = 0; i < k; ++i) {
    Matrix xi = slot[i] < x.size() ? x[slot[i]].entries() : Matrix::Zero(d, d);
    Matrix r = kron(sys_set.chain(i), pa) + kron(xi, qa);
    members.push_back(validate_projector(0.5 * (r + r.adjoint())));
    alignment.emplace_back(i);
  }
  double tr = times.back() + 1.0;
  auto records = make_record_family(set, validate_family(std::move(members)), tr, tr, std::move(alignment));
  StateVector state(kron(random_state(d, rng).amplitudes(), a));
  return {std::move(state), std::move(set), std::move(records)};
}

inline RecordedModel random_strongly_recorded(std::mt19937_64& rng, std::size_t max_sys = 4, std::size_t max_times = 3) {
  std::size_t d = std::uniform_int_distribution<std::size_t>(2, max_sys)(rng);
  std::size_t n = std::uniform_int_distribution<std::size_t>(1, max_times)(rng);
  std::vector<double> times;
  for (std::size_t i = 0; i < n; ++i) times.push_back(0.5 * static_cast<double>(i));
  return random_strongly_recorded(rng, d, times);
}

/// Random record family aligned with every history (zero projectors pad when K > dim).
inline RecordFamily random_records(const HistorySet& set, std::mt19937_64& rng) {
  const std::size_t n = set.dim(), k = set.count();
  auto f = random_family(n, std::min(n, k), rng);
  std::vector<Projector> members;
  std::vector<std::optional<std::size_t>> alignment;
  for (std::size_t i = 0; i < k; ++i) {
    members.push_back(i < f.size() ? f[i] : Projector::zero(n));
    alignment.emplace_back(i);
  }
  std::shuffle(alignment.begin(), alignment.end(), rng);
  return make_record_family(set, validate_family(std::move(members)), set.last_time() + 1.0, set.last_time() + 1.0,
                            std::move(alignment));
}

}  // namespace rh::gen
