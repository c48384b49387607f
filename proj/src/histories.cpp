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

#include "rh/histories.hpp"

#include <algorithm>
#include <sstream>

namespace rh {

// ---- IndexShape ----------------------------------------------------------

IndexShape::IndexShape(std::vector<std::size_t> radices) : radices_(std::move(radices)) {
  count_ = 1;
  for (std::size_t r : radices_) count_ *= r;
}

std::size_t IndexShape::flat(const HistoryIndex& index) const {
  if (index.size() != radices_.size())
    throw Error(Errc::IndexOutOfRange, "history index has " + std::to_string(index.size()) +
                                           " components, expected " + std::to_string(radices_.size()));
  std::size_t f = 0;
  for (std::size_t k = 0; k < index.size(); ++k) {
    if (index[k] >= radices_[k])
      throw Error(Errc::IndexOutOfRange, "component " + std::to_string(k) + " = " +
                                             std::to_string(index[k]) + " out of range");
    f = f * radices_[k] + index[k];
  }
  return f;
}

HistoryIndex IndexShape::multi(std::size_t flat) const {
  if (flat >= count_) throw Error(Errc::IndexOutOfRange, "flat history index " + std::to_string(flat));
  HistoryIndex out(radices_.size());
  for (std::size_t k = radices_.size(); k-- > 0;) {
    out[k] = flat % radices_[k];
    flat /= radices_[k];
  }
  return out;
}

// ---- HistorySet ------------------------------------------------------------

HistorySet::HistorySet(HermitianOperator h, std::vector<ScheduledFamily> schedule,
                       std::vector<ProjectorFamily> heisenberg)
    : hamiltonian_(std::move(h)),
      schedule_(std::move(schedule)),
      heisenberg_(std::move(heisenberg)),
      cache_(std::make_shared<ChainCache>()) {
  std::vector<std::size_t> radices;
  for (const auto& f : heisenberg_) radices.push_back(f.size());
  shape_ = IndexShape(std::move(radices));
  cache_->chains.resize(shape_.count());
}

Matrix HistorySet::chain(std::size_t k) const {
  if (k >= count()) throw Error(Errc::IndexOutOfRange, "history " + std::to_string(k));
  {
    std::lock_guard lock(cache_->mutex);
    if (cache_->chains[k]) return *cache_->chains[k];
  }
  HistoryIndex idx = shape_.multi(k);
  Matrix c = heisenberg_[0][idx[0]].entries();
  for (std::size_t s = 1; s < idx.size(); ++s) c = multiply(heisenberg_[s][idx[s]].entries(), c);
  std::lock_guard lock(cache_->mutex);
  if (!cache_->chains[k]) cache_->chains[k] = c;
  return c;
}

Vector HistorySet::apply_chain(std::size_t k, const Vector& v) const {
  if (k >= count()) throw Error(Errc::IndexOutOfRange, "history " + std::to_string(k));
  HistoryIndex idx = shape_.multi(k);
  Vector out = v;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    const Matrix& p = heisenberg_[s][idx[s]].entries();
    if (is_diagonal(p))
      out = p.diagonal().cwiseProduct(out);
    else
      out = p * out;
  }
  return out;
}

std::string HistorySet::label(std::size_t k) const {
  HistoryIndex idx = shape_.multi(k);
  std::string out;
  for (std::size_t s = 0; s < idx.size(); ++s) {
    if (s) out += '/';
    out += heisenberg_[s].labels()[idx[s]];
  }
  return out;
}

HistorySet build_history_set(HermitianOperator h, std::vector<ScheduledFamily> schedule,
                             const ToleranceConfig& tol) {
  if (schedule.empty()) throw Error(Errc::ScheduleMismatch, "empty schedule");
  for (std::size_t k = 0; k < schedule.size(); ++k) {
    if (schedule[k].family.dim() != h.dim())
      throw Error(Errc::DimensionMismatch, "family " + std::to_string(k) + " has dim " +
                                               std::to_string(schedule[k].family.dim()) +
                                               ", Hamiltonian has " + std::to_string(h.dim()));
    if (k > 0 && !(schedule[k].time > schedule[k - 1].time))
      throw Error(Errc::TimesNotIncreasing, "slot " + std::to_string(k) + " time is not after slot " +
                                                std::to_string(k - 1));
  }
  std::vector<ProjectorFamily> heisenberg;
  heisenberg.reserve(schedule.size());
  for (const auto& s : schedule)
    heisenberg.push_back(evolve_family(s.family, h, s.reference_time, s.time, tol));

  // Σ_α C_α = S_n ⋯ S_1 with S_k the sum of family k.
  const auto n = static_cast<Eigen::Index>(h.dim());
  Matrix total = Matrix::Identity(n, n);
  for (const auto& f : heisenberg) {
    Matrix s = Matrix::Zero(n, n);
    for (const auto& p : f.members()) s += p.entries();
    total = multiply(s, total);
  }
  double dev = max_abs(total - Matrix::Identity(n, n));
  if (dev > tol.proj) {
    std::ostringstream os;
    os << "sum of chain operators differs from I by " << dev;
    throw Error(Errc::CompletenessViolation, os.str(), dev);
  }
  return HistorySet(std::move(h), std::move(schedule), std::move(heisenberg));
}

Matrix chain_operator(const HistorySet& set, const HistoryIndex& index) { return set.chain(index); }

BranchVector branch_vector(const HistorySet& set, const StateVector& state, const HistoryIndex& index) {
  if (state.dim() != set.dim()) throw Error(Errc::DimensionMismatch, "state and history set dimensions");
  return {index, set.apply_chain(set.shape().flat(index), state.amplitudes())};
}

// ---- Partition -------------------------------------------------------------

Partition::Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t count)
    : blocks_(std::move(blocks)), owner_(count, count), count_(count) {
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    if (blocks_[b].empty()) throw Error(Errc::InvalidPartition, "block " + std::to_string(b) + " is empty");
    for (std::size_t k : blocks_[b]) {
      if (k >= count) throw Error(Errc::InvalidPartition, "history " + std::to_string(k) + " out of range");
      if (owner_[k] != count)
        throw Error(Errc::InvalidPartition, "history " + std::to_string(k) + " appears in two blocks");
      owner_[k] = b;
    }
  }
  for (std::size_t k = 0; k < count; ++k)
    if (owner_[k] == count) throw Error(Errc::InvalidPartition, "history " + std::to_string(k) + " not covered");
}

Partition Partition::of_indices(const std::vector<std::vector<HistoryIndex>>& blocks, const IndexShape& shape) {
  std::vector<std::vector<std::size_t>> flat;
  for (const auto& b : blocks) {
    auto& out = flat.emplace_back();
    for (const auto& idx : b) out.push_back(shape.flat(idx));
  }
  return Partition(std::move(flat), shape.count());
}

Partition Partition::singletons(std::size_t count) {
  std::vector<std::vector<std::size_t>> blocks;
  for (std::size_t k = 0; k < count; ++k) blocks.push_back({k});
  return Partition(std::move(blocks), count);
}

Partition Partition::single_block(std::size_t count) {
  std::vector<std::size_t> all(count);
  for (std::size_t k = 0; k < count; ++k) all[k] = k;
  return Partition({all}, count);
}

std::size_t Partition::largest_block() const {
  std::size_t m = 0;
  for (const auto& b : blocks_) m = std::max(m, b.size());
  return m;
}

Partition compose(const Partition& inner, const Partition& outer) {
  if (outer.count() != inner.size())
    throw Error(Errc::InvalidPartition, "outer partition must group the inner blocks");
  std::vector<std::vector<std::size_t>> blocks;
  for (const auto& ob : outer.blocks()) {
    auto& out = blocks.emplace_back();
    for (std::size_t ib : ob) out.insert(out.end(), inner.blocks()[ib].begin(), inner.blocks()[ib].end());
    std::sort(out.begin(), out.end());
  }
  return Partition(std::move(blocks), inner.count());
}

CoarseHistorySet coarse_grain(const Histories& set, const Partition& partition) {
  if (partition.count() != set.count())
    throw Error(Errc::InvalidPartition, "partition covers " + std::to_string(partition.count()) +
                                            " histories, set has " + std::to_string(set.count()));
  const auto n = static_cast<Eigen::Index>(set.dim());
  std::vector<Matrix> chains;
  std::vector<std::string> labels;
  for (const auto& block : partition.blocks()) {
    Matrix c = Matrix::Zero(n, n);
    std::string label = "{";
    for (std::size_t i = 0; i < block.size(); ++i) {
      c += set.chain(block[i]);
      if (i) label += ',';
      label += set.label(block[i]);
    }
    chains.push_back(std::move(c));
    labels.push_back(label + "}");
  }
  return CoarseHistorySet(set.hamiltonian(), set.last_time(), std::move(chains), std::move(labels), partition);
}

// ---- tensor composition ------------------------------------------------------

CompositeSystem tensor_compose(const HistorySet& a, const StateVector& state_a, const HistorySet& b,
                               const StateVector& state_b, const ToleranceConfig& tol) {
  if (a.schedule().size() != b.schedule().size())
    throw Error(Errc::ScheduleMismatch, "subsystem schedules have different lengths");
  if (state_a.dim() != a.dim() || state_b.dim() != b.dim())
    throw Error(Errc::DimensionMismatch, "subsystem state dimensions");
  const auto da = static_cast<Eigen::Index>(a.dim());
  const auto db = static_cast<Eigen::Index>(b.dim());
  Matrix h = kron(a.hamiltonian().entries(), Matrix::Identity(db, db)) +
             kron(Matrix::Identity(da, da), b.hamiltonian().entries());

  std::vector<ScheduledFamily> schedule;
  for (std::size_t k = 0; k < a.schedule().size(); ++k) {
    double t = a.schedule()[k].time;
    if (b.schedule()[k].time != t)
      throw Error(Errc::ScheduleMismatch, "slot " + std::to_string(k) + " times differ between subsystems");
    const auto& fa = a.heisenberg_family(k);
    const auto& fb = b.heisenberg_family(k);
    std::vector<Projector> members;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < fa.size(); ++i) {
      for (std::size_t j = 0; j < fb.size(); ++j) {
        members.push_back(validate_projector(kron(fa[i].entries(), fb[j].entries()), tol));
        labels.push_back(fa.labels()[i] + "*" + fb.labels()[j]);
      }
    }
    schedule.emplace_back(validate_family(std::move(members), std::move(labels), tol), t);
  }
  return {build_history_set(HermitianOperator(std::move(h), tol), std::move(schedule), tol),
          StateVector(kron(state_a.amplitudes(), state_b.amplitudes()), tol)};
}

}  // namespace rh
