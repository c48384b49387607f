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

#include <stdexcept>
#include <string>
#include <string_view>

namespace rh {

enum class Errc {
  NotHermitian,
  NotIdempotent,
  NotExclusive,
  NotExhaustive,
  NotNormalized,
  EigendecompositionFailure,
  DimensionMismatch,
  TimesNotIncreasing,
  CompletenessViolation,
  IndexOutOfRange,
  InvalidPartition,
  ScheduleMismatch,
  RecordTimeNotAfterHistories,
  WrongKind,
  NotRecorded,
  AlignmentIncomplete,
  NotDecoherent,
  AllBranchesNull,
  ZeroEvidence,
  ParamOutOfRange,
  PacketOverflow,
  DimensionGuard,
  ProbabilityMismatch,
  HierarchyViolation,
};

std::string_view to_string(Errc code);

/// Domain error raised by every validating operation. `magnitude()` carries the
/// size of the violation (max offending entry, residual norm, ...) when one exists.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string detail, double magnitude = 0.0);

  Errc code() const noexcept { return code_; }
  double magnitude() const noexcept { return magnitude_; }

 private:
  Errc code_;
  double magnitude_;
};

}  // namespace rh
