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

#include "rh/models.hpp"

namespace rh {

/// Malformed or unreadable model file; `where` is a JSON pointer into the document.
class ModelFileError : public std::runtime_error {
 public:
  ModelFileError(std::string where, const std::string& what)
      : std::runtime_error(where.empty() ? what : where + ": " + what), where_(std::move(where)) {}
  const std::string& where() const { return where_; }

 private:
  std::string where_;
};

inline constexpr std::string_view kModelFormat = "rhist-model/1";

/// Structural parse only; physics checks happen in instantiate().
ModelDescription parse_model(std::string_view text);
ModelDescription load_model(const std::string& path);

/// Canonical serialization: parse_model(export_model(d)) exports to the same bytes.
std::string export_model(const ModelDescription& desc);
void save_model(const ModelDescription& desc, const std::string& path);

}  // namespace rh
