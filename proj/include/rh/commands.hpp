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

#include <iosfwd>
#include <optional>
#include <string>

#include "rh/models.hpp"
#include "rh/tolerance.hpp"

namespace rh {

/// Exit codes shared by every command.
enum ExitCode : int { kExitOk = 0, kExitDomain = 1, kExitParse = 2 };

enum class OutputFormat { Text, Json };

struct CommandContext {
  std::ostream& out;
  std::ostream& err;
  ToleranceConfig tol{};
  OutputFormat format = OutputFormat::Text;
};

enum class MatrixKind { Decoherence, Correlation, Extended };

struct BuiltinRequest {
  std::string name;  // three-box, two-slit, qubit-trine, spin-env, imaginary-overlap
  std::string variant = "A";
  TwoSlitParams two_slit{};
  std::size_t n_env = 4;
  double theta = 1.5707963267948966;
  double c = 0.1;
};

int cmd_validate(const std::string& path, CommandContext& ctx);
int cmd_classify(const std::string& path, CommandContext& ctx);
/// `conditional_on` is "family:value" where value is a label or member index.
int cmd_probs(const std::string& path, const std::optional<std::string>& conditional_on, CommandContext& ctx);
int cmd_matrix(const std::string& path, MatrixKind kind, CommandContext& ctx);
/// Writes the model file to `emit` when given, otherwise to ctx.out.
int cmd_builtin(const BuiltinRequest& request, const std::optional<std::string>& emit, CommandContext& ctx);
int cmd_pattern(const std::string& path, CommandContext& ctx);

/// Description of a built-in model. Errors: ParamOutOfRange for unknown names or variants.
ModelDescription builtin_description(const BuiltinRequest& request);

}  // namespace rh
