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

#include <string_view>

namespace rh {

/// Every approximate equality used by the library maps to one of these.
/// Matrix comparisons use the max-absolute-entry norm.
struct ToleranceConfig {
  double norm = 1e-12;  // state normalization
  double herm = 1e-12;  // Hermiticity
  double proj = 1e-10;  // idempotency, exclusivity, exhaustiveness, completeness
  double rec = 1e-8;    // record off-diagonal threshold
  double dec = 1e-8;    // decoherence off-diagonal threshold

  /// Throws Error(ParamOutOfRange) if any field is negative or NaN.
  void validate() const;

  /// Named profiles: "default", "strict", "loose". Throws on unknown names.
  static ToleranceConfig profile(std::string_view name);
};

}  // namespace rh
