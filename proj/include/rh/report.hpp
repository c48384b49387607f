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

#include <string>
#include <variant>
#include <vector>

#include "rh/measures.hpp"
#include "rh/models.hpp"

namespace rh {

/// Shortest decimal text that parses back to the same double.
std::string format_number(double v);

struct ReportEntry {
  std::string key;
  std::variant<bool, double, std::string> value;
  std::string detail;  // witness or location, may be empty
};

struct ReportTable {
  std::string name;
  std::vector<std::string> labels;
  std::vector<double> values;
};

struct ReportDocument {
  std::string title;
  std::vector<ReportEntry> entries;
  std::vector<ReportTable> tables;
};

std::string render_text(const ReportDocument& doc);
std::string render_json(const ReportDocument& doc);

/// Row label of a correlation or decoherence entry (the residual row is "residual").
std::string history_label(const Histories& set, std::size_t row);

ReportDocument classification_report(const ModelBundle& bundle, const Classification& c);
ReportDocument probability_report(const std::string& title, const ProbabilityTable& table, double evidence_sum);
ReportDocument verification_report(const ModelBundle& bundle, const std::vector<ExpectationResult>& results);

}  // namespace rh
