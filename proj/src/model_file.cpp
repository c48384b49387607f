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

#include "rh/model_file.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rh {

namespace {

using Json = nlohmann::ordered_json;

// ---- reading -------------------------------------------------------------------

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

[[noreturn]] void fail(const std::string& where, const std::string& what) { throw ModelFileError(where, what); }

const Json& field(const Json& obj, const std::string& key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(where, "missing field '" + key + "'");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key) {
  auto it = obj.find(key);
  return it == obj.end() || it->is_null() ? nullptr : &*it;
}

void expect_object(const Json& j, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
}

const Json& expect_array(const Json& j, const std::string& where) {
  if (!j.is_array()) fail(where, "expected an array");
  return j;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  double v = j.get<double>();
  if (!std::isfinite(v)) fail(where, "number is not finite");
  return v;
}

std::size_t index(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

std::string text(const Json& j, const std::string& where) {
  if (!j.is_string()) fail(where, "expected a string");
  return j.get<std::string>();
}

Complex complex_pair(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) fail(where, "expected a [re, im] pair");
  return {number(j[0], at(where, 0)), number(j[1], at(where, 1))};
}

Vector complex_vector(const Json& j, const std::string& where) {
  expect_array(j, where);
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_pair(j[i], at(where, i));
  return v;
}

Matrix complex_matrix(const Json& j, const std::string& where) {
  expect_array(j, where);
  const auto n = static_cast<Eigen::Index>(j.size());
  Matrix m(n, n);
  for (std::size_t r = 0; r < j.size(); ++r) {
    Vector row = complex_vector(j[r], at(where, r));
    if (row.size() != n) fail(at(where, r), "row length differs from the row count");
    m.row(static_cast<Eigen::Index>(r)) = row.transpose();
  }
  return m;
}

ProjectorSpec projector(const Json& j, const std::string& where) {
  expect_object(j, where);
  if (j.size() != 1) fail(where, "projector needs exactly one of basis, vector, matrix");
  ProjectorSpec p;
  if (auto* b = optional_field(j, "basis")) {
    p.kind = ProjectorSpec::Kind::Basis;
    expect_array(*b, at(where, "basis"));
    for (std::size_t i = 0; i < b->size(); ++i) p.basis.push_back(index((*b)[i], at(at(where, "basis"), i)));
  } else if (auto* v = optional_field(j, "vector")) {
    p.kind = ProjectorSpec::Kind::Vector;
    p.vector = complex_vector(*v, at(where, "vector"));
  } else if (auto* m = optional_field(j, "matrix")) {
    p.kind = ProjectorSpec::Kind::Matrix;
    p.matrix = complex_matrix(*m, at(where, "matrix"));
  } else {
    fail(where, "projector needs exactly one of basis, vector, matrix");
  }
  return p;
}

std::optional<double> optional_number(const Json& obj, const std::string& key, const std::string& where) {
  if (auto* v = optional_field(obj, key)) return number(*v, at(where, key));
  return std::nullopt;
}

// ---- writing -------------------------------------------------------------------

Json pair(Complex z) { return Json::array({z.real(), z.imag()}); }

Json vector_json(const Vector& v) {
  Json out = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(pair(v(i)));
  return out;
}

Json matrix_json(const Matrix& m) {
  Json out = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) out.push_back(vector_json(m.row(r).transpose()));
  return out;
}

}  // namespace

ModelDescription parse_model(std::string_view source) {
  Json doc;
  try {
    doc = Json::parse(source.begin(), source.end());
  } catch (const Json::parse_error& e) {
    fail("", std::string("invalid JSON: ") + e.what());
  }
  const std::string root;
  expect_object(doc, root);
  if (auto* f = optional_field(doc, "format"); f && text(*f, "/format") != kModelFormat)
    fail("/format", "unsupported format '" + f->get<std::string>() + "'");

  ModelDescription d;
  if (auto* n = optional_field(doc, "name")) d.name = text(*n, "/name");
  d.dim = index(field(doc, "dim", root), "/dim");
  d.state = complex_vector(field(doc, "state", root), "/state");
  if (auto* h = optional_field(doc, "hamiltonian")) d.hamiltonian = complex_matrix(*h, "/hamiltonian");

  const Json& families = expect_array(field(doc, "families", root), "/families");
  for (std::size_t i = 0; i < families.size(); ++i) {
    const std::string w = at("/families", i);
    expect_object(families[i], w);
    FamilySpec f;
    f.name = text(field(families[i], "name", w), at(w, "name"));
    for (const auto& other : d.families)
      if (other.name == f.name) fail(at(w, "name"), "duplicate family name '" + f.name + "'");
    if (auto* labels = optional_field(families[i], "labels")) {
      expect_array(*labels, at(w, "labels"));
      for (std::size_t k = 0; k < labels->size(); ++k) f.labels.push_back(text((*labels)[k], at(at(w, "labels"), k)));
    }
    const Json& ps = expect_array(field(families[i], "projectors", w), at(w, "projectors"));
    for (std::size_t k = 0; k < ps.size(); ++k) f.projectors.push_back(projector(ps[k], at(at(w, "projectors"), k)));
    d.families.push_back(std::move(f));
  }

  const Json& schedule = expect_array(field(doc, "schedule", root), "/schedule");
  for (std::size_t i = 0; i < schedule.size(); ++i) {
    const std::string w = at("/schedule", i);
    expect_object(schedule[i], w);
    ScheduleEntry e;
    e.family = text(field(schedule[i], "family", w), at(w, "family"));
    e.time = number(field(schedule[i], "time", w), at(w, "time"));
    e.reference_time = optional_number(schedule[i], "reference_time", w);
    d.schedule.push_back(std::move(e));
  }

  if (auto* r = optional_field(doc, "records")) {
    const std::string w = "/records";
    expect_object(*r, w);
    RecordSpec spec;
    spec.family = text(field(*r, "family", w), at(w, "family"));
    spec.time = number(field(*r, "time", w), at(w, "time"));
    spec.reference_time = optional_number(*r, "reference_time", w);
    const Json& al = expect_array(field(*r, "alignment", w), at(w, "alignment"));
    for (std::size_t i = 0; i < al.size(); ++i) {
      const std::string wi = at(at(w, "alignment"), i);
      if (al[i].is_null()) {
        spec.alignment.emplace_back(std::nullopt);
        continue;
      }
      expect_array(al[i], wi);
      HistoryIndex idx;
      for (std::size_t k = 0; k < al[i].size(); ++k) idx.push_back(index(al[i][k], at(wi, k)));
      spec.alignment.emplace_back(std::move(idx));
    }
    d.records = std::move(spec);
  }

  if (auto* ex = optional_field(doc, "expectations")) {
    expect_array(*ex, "/expectations");
    for (std::size_t i = 0; i < ex->size(); ++i) {
      const std::string w = at("/expectations", i);
      const Json& j = (*ex)[i];
      expect_object(j, w);
      Expectation e;
      e.quantity = text(field(j, "quantity", w), at(w, "quantity"));
      if (auto* rel = optional_field(j, "relation")) e.relation = text(*rel, at(w, "relation"));
      e.value = number(field(j, "value", w), at(w, "value"));
      if (auto* tol = optional_field(j, "tolerance")) e.tolerance = number(*tol, at(w, "tolerance"));
      if (auto* prov = optional_field(j, "provenance")) e.provenance = text(*prov, at(w, "provenance"));
      d.expectations.push_back(std::move(e));
    }
  }
  return d;
}

ModelDescription load_model(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ModelFileError("", "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw ModelFileError("", "cannot read '" + path + "'");
  return parse_model(buf.str());
}

std::string export_model(const ModelDescription& d) {
  Json doc = Json::object();
  doc["format"] = std::string(kModelFormat);
  doc["name"] = d.name;
  doc["dim"] = d.dim;
  doc["state"] = vector_json(d.state);
  if (d.hamiltonian) doc["hamiltonian"] = matrix_json(*d.hamiltonian);

  Json families = Json::array();
  for (const auto& f : d.families) {
    Json fj = Json::object();
    fj["name"] = f.name;
    fj["labels"] = f.labels;
    Json ps = Json::array();
    for (const auto& p : f.projectors) {
      Json pj = Json::object();
      switch (p.kind) {
        case ProjectorSpec::Kind::Basis:
          pj["basis"] = p.basis;
          break;
        case ProjectorSpec::Kind::Vector:
          pj["vector"] = vector_json(p.vector);
          break;
        case ProjectorSpec::Kind::Matrix:
          pj["matrix"] = matrix_json(p.matrix);
          break;
      }
      ps.push_back(std::move(pj));
    }
    fj["projectors"] = std::move(ps);
    families.push_back(std::move(fj));
  }
  doc["families"] = std::move(families);

  Json schedule = Json::array();
  for (const auto& e : d.schedule) {
    Json ej = Json::object();
    ej["family"] = e.family;
    ej["time"] = e.time;
    if (e.reference_time) ej["reference_time"] = *e.reference_time;
    schedule.push_back(std::move(ej));
  }
  doc["schedule"] = std::move(schedule);

  if (d.records) {
    Json rj = Json::object();
    rj["family"] = d.records->family;
    rj["time"] = d.records->time;
    if (d.records->reference_time) rj["reference_time"] = *d.records->reference_time;
    Json al = Json::array();
    for (const auto& a : d.records->alignment) al.push_back(a ? Json(*a) : Json(nullptr));
    rj["alignment"] = std::move(al);
    doc["records"] = std::move(rj);
  }

  Json ex = Json::array();
  for (const auto& e : d.expectations) {
    Json ej = Json::object();
    ej["quantity"] = e.quantity;
    ej["relation"] = e.relation;
    ej["value"] = e.value;
    ej["tolerance"] = e.tolerance;
    ej["provenance"] = e.provenance;
    ex.push_back(std::move(ej));
  }
  doc["expectations"] = std::move(ex);
  return doc.dump() + "\n";
}

void save_model(const ModelDescription& desc, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ModelFileError("", "cannot write '" + path + "'");
  out << export_model(desc);
  if (!out) throw ModelFileError("", "write to '" + path + "' failed");
}

}  // namespace rh
