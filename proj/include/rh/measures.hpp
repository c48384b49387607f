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
#include <optional>
#include <string>
#include <vector>

#include "rh/histories.hpp"

namespace rh {

/// Records {R_α} at t_r, stored as Heisenberg-picture projectors at t_r.
/// Every history has exactly one aligned member; at most one extra member
/// (the residual) is unaligned.
class RecordFamily {
 public:
  /// `alignment[m]` is the flat history recorded by member m, or nullopt for the residual.
  /// Throws AlignmentIncomplete unless the alignment is a bijection onto
  /// 0..history_count-1 plus at most one residual.
  static RecordFamily heisenberg(ProjectorFamily family, double record_time,
                                 std::vector<std::optional<std::size_t>> alignment,
                                 std::size_t history_count);

  const ProjectorFamily& family() const { return family_; }
  double record_time() const { return record_time_; }
  std::size_t history_count() const { return record_of_.size(); }
  const std::vector<std::optional<std::size_t>>& alignment() const { return alignment_; }
  std::size_t record_of(std::size_t history) const { return record_of_.at(history); }
  std::optional<std::size_t> residual() const { return residual_; }

 private:
  RecordFamily(ProjectorFamily family, double record_time,
               std::vector<std::optional<std::size_t>> alignment, std::vector<std::size_t> record_of,
               std::optional<std::size_t> residual)
      : family_(std::move(family)), record_time_(record_time), alignment_(std::move(alignment)),
        record_of_(std::move(record_of)), residual_(residual) {}

  ProjectorFamily family_;
  double record_time_;
  std::vector<std::optional<std::size_t>> alignment_;
  std::vector<std::size_t> record_of_;
  std::optional<std::size_t> residual_;
};

/// Records declared at `reference_time` and evolved with the set's Hamiltonian to `record_time`.
/// Errors: DimensionMismatch, RecordTimeNotAfterHistories, AlignmentIncomplete.
RecordFamily make_record_family(const Histories& set, ProjectorFamily declared, double record_time,
                                double reference_time, std::vector<std::optional<std::size_t>> alignment,
                                const ToleranceConfig& tol = {});

/// Records R_ᾱ = Σ_{α∈ᾱ} R_α for a coarse graining; the residual stays a residual.
RecordFamily coarse_records(const RecordFamily& records, const Partition& partition,
                            const ToleranceConfig& tol = {});

/// Records of independent subsystems, R = R_a ⊗ R_b, aligned with the histories
/// of tensor_compose(a, ·, b, ·). Record times must agree.
RecordFamily tensor_records(const RecordFamily& a, const HistorySet& set_a, const RecordFamily& b,
                            const HistorySet& set_b, const ToleranceConfig& tol = {});

enum class MeasureKind { Correlation, Decoherence };

/// Square (or K+1 by K with a residual record row) matrix over history indices.
/// For correlations row k is the record aligned with history k and the residual
/// row, if any, comes last; `raw` keeps the complex ⟨Ψ|R_α C_β|Ψ⟩.
struct MeasureMatrix {
  MeasureKind kind;
  Matrix entries;
  Matrix raw;
  double normalization = 0.0;
};

/// Largest off-diagonal entry (residual rows count as entirely off-diagonal).
struct OffDiagonalWitness {
  bool holds = true;
  std::size_t row = 0;
  std::size_t col = 0;
  double magnitude = 0.0;
};

/// ℛ(α,β) = Re⟨Ψ|R_α C_β|Ψ⟩.
MeasureMatrix correlation_matrix(const StateVector& state, const Histories& set, const RecordFamily& records);

/// D(α,β) = ⟨Ψ_α|Ψ_β⟩.
MeasureMatrix decoherence_matrix(const StateVector& state, const Histories& set);

OffDiagonalWitness max_off_diagonal(const MeasureMatrix& m);

/// Errors: WrongKind.
OffDiagonalWitness is_recorded(const MeasureMatrix& m, const ToleranceConfig& tol = {});
OffDiagonalWitness is_medium_decoherent(const MeasureMatrix& m, const ToleranceConfig& tol = {});

struct ProbabilityTable {
  std::vector<double> values;
  std::vector<std::string> labels;
  bool extended = false;

  double sum() const;
};

/// ℘(α) = Re⟨Ψ|C_α|Ψ⟩; `extended` is set when a value leaves [−ε_dec, 1+ε_dec].
ProbabilityTable extended_probabilities(const StateVector& state, const Histories& set,
                                        const ToleranceConfig& tol = {});

/// Born probabilities ⟨Ψ|R|Ψ⟩, one per record member in member order.
ProbabilityTable record_probabilities(const StateVector& state, const RecordFamily& records);

/// Born probability of a single (possibly merged) record projector.
double record_probability(const StateVector& state, const Projector& record);

/// p(α) = p_rec(record of α) for a recorded set. Errors: NotRecorded,
/// ProbabilityMismatch when |p_rec − ℘| exceeds 2·K·ε_rec.
ProbabilityTable history_probabilities(const StateVector& state, const Histories& set,
                                       const RecordFamily& records, const ToleranceConfig& tol = {});

struct StrongRecordResult {
  bool holds = false;
  double worst_residual = 0.0;  // max_α ‖(R_α − C_α)|Ψ⟩‖
  std::size_t worst_history = 0;
  double diagonal_deviation = 0.0;  // max |ℛ − diag(p)|
};

/// Errors: AlignmentIncomplete.
StrongRecordResult strong_record_check(const StateVector& state, const Histories& set,
                                       const RecordFamily& records, const ToleranceConfig& tol = {});

/// R_α = |Ψ̂_α⟩⟨Ψ̂_α| for non-null branches (orthonormalized symmetrically when
/// only approximately orthogonal), zero for null branches (p ≤ ε_rec²), with
/// I − Σ R merged into the first non-null record. Record time is last_time + 1.
/// Errors: NotDecoherent, AllBranchesNull.
RecordFamily canonical_records(const StateVector& state, const Histories& set, const ToleranceConfig& tol = {});

struct EpWitness {
  std::size_t history = 0;
  double value = 0.0;
};

struct Classification {
  std::optional<bool> strongly_recorded;
  std::optional<bool> recorded;
  bool medium_decoherent = false;
  bool ep_in_range = false;
  bool canonical_records_used = false;

  std::optional<OffDiagonalWitness> record_witness;
  OffDiagonalWitness decoherence_witness;
  std::optional<StrongRecordResult> strong;
  EpWitness worst_ep;                        // value furthest outside [0,1] (or the minimum)
  std::optional<double> probability_gap;     // max |p_rec − ℘| when recorded
  double correlation_normalization = 0.0;    // Σ ℛ when records were evaluated
  double ep_sum = 0.0;
};

/// Evaluates every formulation's condition. Without supplied records and with a
/// decoherent set, canonical records are used. Errors: HierarchyViolation if
/// strong records are found without recording at 2·ε_rec.
Classification classify(const StateVector& state, const Histories& set, const RecordFamily* records,
                        const ToleranceConfig& tol = {});

/// p(α_past | pd) over the first n−1 slots, conditioned on member `pd_value`
/// of the final slot. Uses `records` when given, otherwise canonical records.
/// Errors: IndexOutOfRange, NotRecorded, ZeroEvidence.
ProbabilityTable retrodict(const StateVector& state, const HistorySet& set, const RecordFamily* records,
                           std::size_t present_slot, std::size_t pd_value, const ToleranceConfig& tol = {});

/// Common fine graining of two sets on the same space: schedules are merged by
/// time; equal slots are shared and distinct commuting families at one time are
/// intersected. Errors: ScheduleMismatch.
HistorySet product_fine_graining(const HistorySet& a, const HistorySet& b, const ToleranceConfig& tol = {});

/// True iff the product fine graining neither decoheres nor is recorded by canonical records.
bool incompatible(const HistorySet& a, const HistorySet& b, const StateVector& state,
                  const ToleranceConfig& tol = {});

}  // namespace rh
