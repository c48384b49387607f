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

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rh/hilbert.hpp"

namespace rh {

/// A projector family declared at `reference_time`, used as the alternatives at `time`.
struct ScheduledFamily {
  ScheduledFamily(ProjectorFamily f, double t) : family(std::move(f)), time(t), reference_time(t) {}
  ScheduledFamily(ProjectorFamily f, double t, double t_ref)
      : family(std::move(f)), time(t), reference_time(t_ref) {}

  ProjectorFamily family;
  double time;
  double reference_time;
};

/// (α_1, …, α_n), one component per scheduled family.
using HistoryIndex = std::vector<std::size_t>;

/// Mixed-radix map between multi-indices and flat positions; the first slot is
/// the slowest index, so flat order is lexicographic.
class IndexShape {
 public:
  IndexShape() = default;
  explicit IndexShape(std::vector<std::size_t> radices);

  std::size_t slots() const { return radices_.size(); }
  std::size_t count() const { return count_; }
  const std::vector<std::size_t>& radices() const { return radices_; }

  std::size_t flat(const HistoryIndex& index) const;  // throws IndexOutOfRange
  HistoryIndex multi(std::size_t flat) const;

 private:
  std::vector<std::size_t> radices_;
  std::size_t count_ = 1;
};

/// Common read-only view used by the measures: a finite exhaustive list of
/// chain operators, addressed by flat position.
class Histories {
 public:
  virtual ~Histories() = default;

  virtual std::size_t dim() const = 0;
  virtual std::size_t count() const = 0;
  virtual Matrix chain(std::size_t k) const = 0;
  /// C_k v without forming C_k when possible.
  virtual Vector apply_chain(std::size_t k, const Vector& v) const = 0;
  virtual double last_time() const = 0;
  virtual const HermitianOperator& hamiltonian() const = 0;
  virtual std::string label(std::size_t k) const = 0;
};

class HistorySet final : public Histories {
 public:
  std::size_t dim() const override { return hamiltonian_.dim(); }
  std::size_t count() const override { return shape_.count(); }
  Matrix chain(std::size_t k) const override;
  Vector apply_chain(std::size_t k, const Vector& v) const override;
  double last_time() const override { return schedule_.back().time; }
  const HermitianOperator& hamiltonian() const override { return hamiltonian_; }
  std::string label(std::size_t k) const override;

  const std::vector<ScheduledFamily>& schedule() const { return schedule_; }
  /// Family k as a Heisenberg-picture family at its slot time.
  const ProjectorFamily& heisenberg_family(std::size_t k) const { return heisenberg_[k]; }
  const IndexShape& shape() const { return shape_; }

  Matrix chain(const HistoryIndex& index) const { return chain(shape_.flat(index)); }

 private:
  friend HistorySet build_history_set(HermitianOperator, std::vector<ScheduledFamily>,
                                      const ToleranceConfig&);
  HistorySet(HermitianOperator h, std::vector<ScheduledFamily> schedule,
             std::vector<ProjectorFamily> heisenberg);

  struct ChainCache {
    std::mutex mutex;
    std::vector<std::optional<Matrix>> chains;
  };

  HermitianOperator hamiltonian_;
  std::vector<ScheduledFamily> schedule_;
  std::vector<ProjectorFamily> heisenberg_;
  IndexShape shape_;
  std::shared_ptr<ChainCache> cache_;
};

/// Validates dims and strictly increasing times, evolves each family from its
/// reference time to its slot time, and checks Σ_α C_α = I within tol.proj.
/// Errors: TimesNotIncreasing, DimensionMismatch, CompletenessViolation.
HistorySet build_history_set(HermitianOperator h, std::vector<ScheduledFamily> schedule,
                             const ToleranceConfig& tol = {});

Matrix chain_operator(const HistorySet& set, const HistoryIndex& index);

/// |Ψ_α⟩ = C_α|Ψ⟩, not normalized.
struct BranchVector {
  HistoryIndex index;
  Vector vector;
};

BranchVector branch_vector(const HistorySet& set, const StateVector& state, const HistoryIndex& index);

/// Disjoint nonempty blocks of flat history positions covering 0..count-1.
class Partition {
 public:
  /// Throws InvalidPartition on empty, overlapping, out-of-range or missing members.
  Partition(std::vector<std::vector<std::size_t>> blocks, std::size_t count);
  /// Same, with blocks given as multi-indices of `shape`.
  static Partition of_indices(const std::vector<std::vector<HistoryIndex>>& blocks,
                              const IndexShape& shape);
  static Partition singletons(std::size_t count);
  static Partition single_block(std::size_t count);

  const std::vector<std::vector<std::size_t>>& blocks() const { return blocks_; }
  std::size_t size() const { return blocks_.size(); }
  std::size_t count() const { return count_; }
  std::size_t largest_block() const;
  /// block containing flat history k
  std::size_t block_of(std::size_t k) const { return owner_[k]; }

 private:
  std::vector<std::vector<std::size_t>> blocks_;
  std::vector<std::size_t> owner_;
  std::size_t count_ = 0;
};

/// Coarse-grained set with explicit chain operators C_ᾱ = Σ_{α∈ᾱ} C_α.
class CoarseHistorySet final : public Histories {
 public:
  std::size_t dim() const override { return hamiltonian_.dim(); }
  std::size_t count() const override { return chains_.size(); }
  Matrix chain(std::size_t k) const override { return chains_.at(k); }
  Vector apply_chain(std::size_t k, const Vector& v) const override { return chains_.at(k) * v; }
  double last_time() const override { return last_time_; }
  const HermitianOperator& hamiltonian() const override { return hamiltonian_; }
  std::string label(std::size_t k) const override { return labels_.at(k); }

  const Partition& partition() const { return partition_; }

 private:
  friend CoarseHistorySet coarse_grain(const Histories&, const Partition&);
  CoarseHistorySet(HermitianOperator h, double last_time, std::vector<Matrix> chains,
                   std::vector<std::string> labels, Partition partition)
      : hamiltonian_(std::move(h)), last_time_(last_time), chains_(std::move(chains)),
        labels_(std::move(labels)), partition_(std::move(partition)) {}

  HermitianOperator hamiltonian_;
  double last_time_;
  std::vector<Matrix> chains_;
  std::vector<std::string> labels_;
  Partition partition_;
};

CoarseHistorySet coarse_grain(const Histories& set, const Partition& partition);

/// Composition of two partitions: `outer` groups the blocks of `inner`.
Partition compose(const Partition& inner, const Partition& outer);

struct CompositeSystem {
  HistorySet set;
  StateVector state;
};

/// Independent subsystems: H = H_a⊗I + I⊗H_b, |Ψ⟩ = |Ψ_a⟩⊗|Ψ_b⟩, slot families
/// P_i⊗Q_j ordered i-major. Slots are paired positionally and must share times.
/// Errors: ScheduleMismatch.
CompositeSystem tensor_compose(const HistorySet& a, const StateVector& state_a, const HistorySet& b,
                               const StateVector& state_b, const ToleranceConfig& tol = {});

}  // namespace rh
