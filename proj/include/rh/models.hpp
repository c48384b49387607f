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
#include "rh/measures.hpp"

namespace rh {

/// One projector in declarative form.
struct ProjectorSpec {
  enum class Kind { Basis, Vector, Matrix };
  Kind kind = Kind::Basis;
  std::vector<std::size_t> basis;  // Kind::Basis; empty is the zero projector
  Vector vector;                   // Kind::Vector; normalized on instantiation
  Matrix matrix;                   // Kind::Matrix
};

struct FamilySpec {
  std::string name;
  std::vector<std::string> labels;
  std::vector<ProjectorSpec> projectors;
};

struct ScheduleEntry {
  std::string family;
  double time = 0.0;
  std::optional<double> reference_time;
};

struct RecordSpec {
  std::string family;
  double time = 0.0;
  std::optional<double> reference_time;
  std::vector<std::optional<HistoryIndex>> alignment;  // one entry per family member
};

/// A checkable claim about a model. `relation` is one of eq, le, ge, lt, gt.
/// Quantities: max_offdiag_D, max_offdiag_R, min_ep, ep_sum, corr_sum,
/// ep[<history label>], retrodict[<present label>][<past label>],
/// fringe_visibility, fringe_ratio.
struct Expectation {
  std::string quantity;
  std::string relation = "eq";
  double value = 0.0;
  double tolerance = 1e-10;
  std::string provenance;
};

/// Everything needed to rebuild a model; the model-file format mirrors it.
struct ModelDescription {
  std::string name;
  std::size_t dim = 0;
  Vector state;
  std::optional<Matrix> hamiltonian;
  std::vector<FamilySpec> families;
  std::vector<ScheduleEntry> schedule;
  std::optional<RecordSpec> records;
  std::vector<Expectation> expectations;
};

struct ModelBundle {
  std::string name;
  StateVector state;
  HistorySet set;
  std::optional<RecordFamily> records;
  std::vector<Expectation> expectations;
};

Projector instantiate(const ProjectorSpec& spec, std::size_t dim, const ToleranceConfig& tol = {});
ProjectorFamily instantiate(const FamilySpec& spec, std::size_t dim, const ToleranceConfig& tol = {});

/// Validates and builds every component. Errors from hilbert, histories and
/// measures propagate; unknown family names raise IndexOutOfRange.
ModelBundle instantiate(const ModelDescription& desc, const ToleranceConfig& tol = {});

// ---- built-in models ---------------------------------------------------------

enum class ThreeBoxVariant { A_set, B_set, fine_AB };

ModelDescription three_box_description(ThreeBoxVariant variant);
ModelBundle three_box(ThreeBoxVariant variant);

struct TwoSlitParams {
  std::size_t bins = 64;
  std::optional<std::size_t> slit_u;  // default bins/2 − bins/8
  std::optional<std::size_t> slit_l;  // default bins/2 + bins/8
  double packet_width = 1.0;
  std::optional<double> propagation_time;  // default bins/4
  bool with_record = false;
};

/// Errors: ParamOutOfRange (bins < 8, σ ≤ 0, T ≤ 0), PacketOverflow.
ModelDescription two_slit_description(const TwoSlitParams& params);
ModelBundle two_slit(const TwoSlitParams& params);

ModelDescription qubit_trine_description();
ModelBundle qubit_trine();

/// Errors: ParamOutOfRange (N < 1), DimensionGuard (N > 12).
ModelDescription spin_environment_description(std::size_t n_env, double theta);
ModelBundle spin_environment(std::size_t n_env, double theta);

/// Errors: ParamOutOfRange unless 0 < c < 1/4.
ModelDescription imaginary_overlap_description(double c);
ModelBundle imaginary_overlap(double c);

// ---- two-slit screen pattern ---------------------------------------------------

struct PatternRow {
  std::size_t bin = 0;
  double intensity = 0.0;
  double ep_upper = 0.0;
  double ep_lower = 0.0;
  double envelope = 0.0;  // Σ_s D((s,j),(s,j)), the pattern without interference
};

struct FringeMetrics {
  double visibility = 0.0;  // max_j |I − envelope| / max_j I
  double ratio = 0.0;       // max/min of I where envelope ≥ half its maximum
  double total = 0.0;       // Σ_j I
};

/// For a two-slot set whose first family is {U, L, else}. Errors: WrongKind.
std::vector<PatternRow> screen_pattern(const StateVector& state, const HistorySet& set);
FringeMetrics fringe_metrics(const std::vector<PatternRow>& pattern);

// ---- expectation checks ------------------------------------------------------------

struct ExpectationResult {
  Expectation expectation;
  double actual = 0.0;
  bool pass = false;
  std::string error;  // set when the quantity could not be computed
};

/// Recomputes every expectation through the measures module.
std::vector<ExpectationResult> verify(const ModelBundle& bundle, const ToleranceConfig& tol = {});

}  // namespace rh
