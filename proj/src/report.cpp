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

#include "rh/report.hpp"

#include <charconv>
#include <cmath>
#include <cstdint>
#include <sstream>

#include "json.hpp"

namespace rh {

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

namespace {

std::string value_text(const ReportEntry& e) {
  if (auto* b = std::get_if<bool>(&e.value)) return *b ? "true" : "false";
  if (auto* d = std::get_if<double>(&e.value)) return format_number(*d);
  return std::get<std::string>(e.value);
}

std::string witness(const Histories& set, const OffDiagonalWitness& w) {
  return "max off-diagonal " + format_number(w.magnitude) + " at (" + history_label(set, w.row) + ", " +
         history_label(set, w.col) + ")";
}

}  // namespace

std::string history_label(const Histories& set, std::size_t row) {
  return row < set.count() ? set.label(row) : "residual";
}

std::string render_text(const ReportDocument& doc) {
  std::ostringstream os;
  if (!doc.title.empty()) os << "model: " << doc.title << "\n";
  for (const auto& e : doc.entries) {
    os << e.key << ": " << value_text(e);
    if (!e.detail.empty()) os << "  (" << e.detail << ")";
    os << "\n";
  }
  for (const auto& t : doc.tables) {
    os << t.name << ":\n";
    for (std::size_t i = 0; i < t.values.size(); ++i) os << "  " << t.labels[i] << "  " << format_number(t.values[i]) << "\n";
  }
  return os.str();
}

std::string render_json(const ReportDocument& doc) {
  using Json = nlohmann::ordered_json;
  Json j = Json::object();
  j["model"] = doc.title;
  for (const auto& e : doc.entries) {
    Json v;
    if (auto* b = std::get_if<bool>(&e.value))
      v = *b;
    else if (auto* d = std::get_if<double>(&e.value))
      v = !std::isfinite(*d)                               ? Json(format_number(*d))
          : (*d == std::trunc(*d) && std::abs(*d) < 9.0e15) ? Json(static_cast<std::int64_t>(*d))
                                                           : Json(*d);
    else
      v = std::get<std::string>(e.value);
    if (e.detail.empty()) {
      j[e.key] = v;
    } else {
      j[e.key] = Json{{"value", v}, {"detail", e.detail}};
    }
  }
  for (const auto& t : doc.tables) {
    Json rows = Json::array();
    for (std::size_t i = 0; i < t.values.size(); ++i) rows.push_back(Json{{"history", t.labels[i]}, {"value", t.values[i]}});
    j[t.name] = rows;
  }
  return j.dump(2) + "\n";
}

ReportDocument classification_report(const ModelBundle& b, const Classification& c) {
  ReportDocument doc;
  doc.title = b.name;
  const auto& set = b.set;
  doc.entries.push_back({"dim", static_cast<double>(set.dim()), ""});
  doc.entries.push_back({"histories", static_cast<double>(set.count()), ""});
  std::string source = b.records ? "supplied" : (c.canonical_records_used ? "canonical" : "none");
  doc.entries.push_back({"records", source, ""});
  doc.entries.push_back({"medium_decoherent", c.medium_decoherent, witness(set, c.decoherence_witness)});
  if (c.recorded)
    doc.entries.push_back({"recorded", *c.recorded, witness(set, *c.record_witness)});
  else
    doc.entries.push_back({"recorded", std::string("unknown"), "no records available"});
  if (c.strongly_recorded)
    doc.entries.push_back({"strongly_recorded", *c.strongly_recorded,
                           "worst |(R-C)Psi| " + format_number(c.strong->worst_residual) + " at " +
                               set.label(c.strong->worst_history)});
  else
    doc.entries.push_back({"strongly_recorded", std::string("unknown"), "no records available"});
  doc.entries.push_back({"ep_in_range", c.ep_in_range,
                         "worst ep[" + set.label(c.worst_ep.history) + "] = " + format_number(c.worst_ep.value)});
  doc.entries.push_back({"ep_sum", c.ep_sum, ""});
  if (c.record_witness) doc.entries.push_back({"correlation_sum", c.correlation_normalization, ""});
  if (c.probability_gap) doc.entries.push_back({"probability_gap", *c.probability_gap, "max |p_rec - ep|"});
  return doc;
}

ReportDocument probability_report(const std::string& title, const ProbabilityTable& table, double evidence_sum) {
  ReportDocument doc;
  doc.title = title;
  doc.entries.push_back({"sum", evidence_sum, ""});
  doc.tables.push_back({"probabilities", table.labels, table.values});
  return doc;
}

ReportDocument verification_report(const ModelBundle& b, const std::vector<ExpectationResult>& results) {
  ReportDocument doc;
  doc.title = b.name;
  doc.entries.push_back({"dim", static_cast<double>(b.set.dim()), ""});
  doc.entries.push_back({"histories", static_cast<double>(b.set.count()), ""});
  doc.entries.push_back({"records", std::string(b.records ? "supplied" : "none"), ""});
  for (const auto& r : results) {
    std::string detail = r.error.empty() ? r.expectation.relation + " " + format_number(r.expectation.value) +
                                               " (tolerance " + format_number(r.expectation.tolerance) + "), got " +
                                               format_number(r.actual)
                                         : r.error;
    doc.entries.push_back({"expect " + r.expectation.quantity, r.pass, detail});
  }
  return doc;
}

}  // namespace rh
