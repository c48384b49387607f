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

#include "rh/models.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace rh {

namespace {

ProjectorSpec basis_spec(std::vector<std::size_t> indices) {
  ProjectorSpec p;
  p.kind = ProjectorSpec::Kind::Basis;
  p.basis = std::move(indices);
  return p;
}

ProjectorSpec vector_spec(Vector v) {
  ProjectorSpec p;
  p.kind = ProjectorSpec::Kind::Vector;
  p.vector = std::move(v);
  return p;
}

ProjectorSpec matrix_spec(Matrix m) {
  ProjectorSpec p;
  p.kind = ProjectorSpec::Kind::Matrix;
  p.matrix = std::move(m);
  return p;
}

Expectation expect(std::string quantity, std::string relation, double value, double tolerance,
                   std::string provenance) {
  return {std::move(quantity), std::move(relation), value, tolerance, std::move(provenance)};
}

std::vector<std::size_t> range(std::size_t from, std::size_t to) {
  std::vector<std::size_t> out;
  for (std::size_t i = from; i < to; ++i) out.push_back(i);
  return out;
}

Vector real_vector(std::initializer_list<double> xs) {
  Vector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

const FamilySpec& find_family(const ModelDescription& desc, const std::string& name) {
  for (const auto& f : desc.families)
    if (f.name == name) return f;
  throw Error(Errc::IndexOutOfRange, "no family named '" + name + "'");
}

}  // namespace

// ---- instantiation -------------------------------------------------------------

Projector instantiate(const ProjectorSpec& spec, std::size_t dim, const ToleranceConfig& tol) {
  switch (spec.kind) {
    case ProjectorSpec::Kind::Basis:
      return Projector::basis(dim, spec.basis);
    case ProjectorSpec::Kind::Vector:
      if (static_cast<std::size_t>(spec.vector.size()) != dim)
        throw Error(Errc::DimensionMismatch, "projector vector has length " + std::to_string(spec.vector.size()));
      return Projector::onto(spec.vector);
    case ProjectorSpec::Kind::Matrix:
      if (static_cast<std::size_t>(spec.matrix.rows()) != dim || spec.matrix.cols() != spec.matrix.rows())
        throw Error(Errc::DimensionMismatch, "projector matrix is not " + std::to_string(dim) + "x" +
                                                 std::to_string(dim));
      return validate_projector(spec.matrix, tol);
  }
  throw Error(Errc::WrongKind, "unknown projector kind");
}

ProjectorFamily instantiate(const FamilySpec& spec, std::size_t dim, const ToleranceConfig& tol) {
  std::vector<Projector> members;
  for (std::size_t i = 0; i < spec.projectors.size(); ++i) {
    try {
      members.push_back(instantiate(spec.projectors[i], dim, tol));
    } catch (const Error& e) {
      throw Error(e.code(), "family '" + spec.name + "' member " + std::to_string(i) + ": " + e.what(),
                  e.magnitude());
    }
  }
  if (!spec.labels.empty() && spec.labels.size() != members.size())
    throw Error(Errc::DimensionMismatch, "family '" + spec.name + "' has " + std::to_string(spec.labels.size()) +
                                             " labels for " + std::to_string(members.size()) + " projectors");
  try {
    return validate_family(std::move(members), spec.labels, tol);
  } catch (const Error& e) {
    throw Error(e.code(), "family '" + spec.name + "': " + e.what(), e.magnitude());
  }
}

ModelBundle instantiate(const ModelDescription& desc, const ToleranceConfig& tol) {
  if (static_cast<std::size_t>(desc.state.size()) != desc.dim)
    throw Error(Errc::DimensionMismatch, "state has length " + std::to_string(desc.state.size()) + ", dim is " +
                                             std::to_string(desc.dim));
  StateVector state(desc.state, tol);
  HermitianOperator h = HermitianOperator::zero(desc.dim);
  if (desc.hamiltonian) {
    if (static_cast<std::size_t>(desc.hamiltonian->rows()) != desc.dim)
      throw Error(Errc::DimensionMismatch, "hamiltonian is not " + std::to_string(desc.dim) + "-dimensional");
    h = HermitianOperator(*desc.hamiltonian, tol);
  }
  std::vector<ScheduledFamily> schedule;
  for (const auto& entry : desc.schedule) {
    auto family = instantiate(find_family(desc, entry.family), desc.dim, tol);
    schedule.emplace_back(std::move(family), entry.time, entry.reference_time.value_or(entry.time));
  }
  HistorySet set = build_history_set(std::move(h), std::move(schedule), tol);

  std::optional<RecordFamily> records;
  if (desc.records) {
    const auto& r = *desc.records;
    auto family = instantiate(find_family(desc, r.family), desc.dim, tol);
    std::vector<std::optional<std::size_t>> alignment;
    for (const auto& a : r.alignment) {
      if (a)
        alignment.emplace_back(set.shape().flat(*a));
      else
        alignment.emplace_back(std::nullopt);
    }
    records = make_record_family(set, std::move(family), r.time, r.reference_time.value_or(r.time),
                                 std::move(alignment), tol);
  }
  return ModelBundle{desc.name, std::move(state), std::move(set), std::move(records), desc.expectations};
}

// ---- three boxes -----------------------------------------------------------------

ModelDescription three_box_description(ThreeBoxVariant variant) {
  ModelDescription d;
  d.dim = 3;
  d.state = real_vector({1, 1, 1}) / std::sqrt(3.0);

  Vector phi = real_vector({1, 1, -1}) / std::sqrt(3.0);
  Matrix not_phi = Matrix::Identity(3, 3) - phi * phi.adjoint();
  d.families = {
      {"box_A", {"A", "~A"}, {basis_spec({0}), basis_spec({1, 2})}},
      {"box_B", {"B", "~B"}, {basis_spec({1}), basis_spec({0, 2})}},
      {"present", {"Phi", "~Phi"}, {vector_spec(phi), matrix_spec(not_phi)}},
  };
  const std::string exact = "closed-form";
  switch (variant) {
    case ThreeBoxVariant::A_set:
      d.name = "three-box-A";
      d.schedule = {{"box_A", 1.0, {}}, {"present", 2.0, {}}};
      d.expectations = {expect("retrodict[Phi][A]", "eq", 1.0, 1e-12, exact),
                        expect("retrodict[Phi][~A]", "eq", 0.0, 1e-12, exact),
                        expect("max_offdiag_D", "le", 0.0, 1e-12, exact)};
      break;
    case ThreeBoxVariant::B_set:
      d.name = "three-box-B";
      d.schedule = {{"box_B", 0.0, {}}, {"present", 2.0, {}}};
      d.expectations = {expect("retrodict[Phi][B]", "eq", 1.0, 1e-12, exact),
                        expect("retrodict[Phi][~B]", "eq", 0.0, 1e-12, exact),
                        expect("max_offdiag_D", "le", 0.0, 1e-12, exact)};
      break;
    case ThreeBoxVariant::fine_AB:
      d.name = "three-box-fine";
      d.schedule = {{"box_B", 0.0, {}}, {"box_A", 1.0, {}}, {"present", 2.0, {}}};
      d.expectations = {expect("max_offdiag_D", "eq", 1.0 / 9.0, 1e-12, exact)};
      break;
  }
  d.expectations.push_back(expect("ep_sum", "eq", 1.0, 1e-10, exact));
  return d;
}

ModelBundle three_box(ThreeBoxVariant variant) { return instantiate(three_box_description(variant)); }

// ---- two slits -------------------------------------------------------------------

ModelDescription two_slit_description(const TwoSlitParams& p) {
  const std::size_t m = p.bins;
  if (m < 8) throw Error(Errc::ParamOutOfRange, "bins = " + std::to_string(m) + " < 8");
  if (!(p.packet_width > 0.0)) throw Error(Errc::ParamOutOfRange, "packet width must be positive");
  const double t = p.propagation_time.value_or(static_cast<double>(m) / 4.0);
  if (!(t > 0.0)) throw Error(Errc::ParamOutOfRange, "propagation time must be positive");
  const auto u = static_cast<long>(p.slit_u.value_or(m / 2 - m / 8));
  const auto l = static_cast<long>(p.slit_l.value_or(m / 2 + m / 8));
  const auto w = static_cast<long>(std::ceil(3.0 * p.packet_width));
  const auto lm = static_cast<long>(m);
  auto inside = [&](long c) { return c - w >= 0 && c + w < lm; };
  if (!inside(u) || !inside(l))
    throw Error(Errc::PacketOverflow, "slit packets of half-width " + std::to_string(w) + " do not fit in " +
                                          std::to_string(m) + " bins");
  if (std::abs(u - l) <= 2 * w) throw Error(Errc::PacketOverflow, "slit packets overlap");

  auto packet = [&](long c) {
    Vector g = Vector::Zero(lm);
    for (long x = c - w; x <= c + w; ++x) {
      double dx = static_cast<double>(x - c);
      g(x) = std::exp(-dx * dx / (4.0 * p.packet_width * p.packet_width));
    }
    return Vector(g / g.norm());
  };
  const Vector gu = packet(u);
  const Vector gl = packet(l);

  Matrix h = Matrix::Zero(lm, lm);
  for (long x = 0; x < lm; ++x) {
    h(x, x) = 1.0;
    h(x, (x + 1) % lm) += -0.5;
    h((x + 1) % lm, x) += -0.5;
  }

  const std::size_t copies = p.with_record ? 2 : 1;
  ModelDescription d;
  d.name = p.with_record ? "two-slit-recorded" : "two-slit";
  d.dim = copies * m;
  if (p.with_record) {
    d.state = Vector::Zero(2 * lm);
    d.state.head(lm) = gu / std::sqrt(2.0);
    d.state.tail(lm) = gl / std::sqrt(2.0);
    Matrix big = Matrix::Zero(2 * lm, 2 * lm);
    big.topLeftCorner(lm, lm) = h;
    big.bottomRightCorner(lm, lm) = h;
    d.hamiltonian = big;
  } else {
    d.state = (gu + gl) / std::sqrt(2.0);
    d.hamiltonian = h;
  }

  auto lift = [&](const std::vector<std::size_t>& xs) {
    std::vector<std::size_t> out;
    for (std::size_t q = 0; q < copies; ++q)
      for (std::size_t x : xs) out.push_back(q * m + x);
    std::sort(out.begin(), out.end());
    return out;
  };
  std::vector<std::size_t> win_u = range(static_cast<std::size_t>(u - w), static_cast<std::size_t>(u + w + 1));
  std::vector<std::size_t> win_l = range(static_cast<std::size_t>(l - w), static_cast<std::size_t>(l + w + 1));
  std::vector<std::size_t> rest;
  for (std::size_t x = 0; x < m; ++x)
    if (!std::binary_search(win_u.begin(), win_u.end(), x) && !std::binary_search(win_l.begin(), win_l.end(), x))
      rest.push_back(x);

  FamilySpec slit{"slit", {"U", "L", "else"}, {basis_spec(lift(win_u)), basis_spec(lift(win_l)), basis_spec(lift(rest))}};
  FamilySpec screen{"screen", {}, {}};
  for (std::size_t j = 0; j < m; ++j) {
    screen.labels.push_back(std::to_string(j));
    screen.projectors.push_back(basis_spec(lift({j})));
  }
  d.families = {slit, screen};
  d.schedule = {{"slit", 0.0, {}}, {"screen", t, 0.0}};

  if (p.with_record) {
    // The path qubit is the slow index: bins [0, m) read U, bins [m, 2m) read L.
    FamilySpec rec{"record", {}, {}};
    RecordSpec spec{"record", t + 1.0, 1.0, {}};
    for (std::size_t s = 0; s < 3; ++s) {
      for (std::size_t j = 0; j < m; ++j) {
        rec.labels.push_back(slit.labels[s] + "@" + std::to_string(j));
        rec.projectors.push_back(s < 2 ? basis_spec({s * m + j}) : basis_spec({}));
        spec.alignment.emplace_back(HistoryIndex{s, j});
      }
    }
    d.families.push_back(rec);
    d.records = spec;
    d.expectations = {expect("max_offdiag_D", "le", 0.0, 1e-10, "construction"),
                      expect("max_offdiag_R", "le", 0.0, 1e-10, "construction"),
                      expect("fringe_visibility", "le", 0.0, 1e-10, "construction"),
                      expect("min_ep", "ge", 0.0, 1e-10, "construction")};
  } else {
    d.expectations = {expect("max_offdiag_D", "gt", 1e-8, 0.0, "construction")};
    const bool defaults = m == 64 && !p.slit_u && !p.slit_l && p.packet_width == 1.0 && !p.propagation_time;
    if (defaults) {
      d.expectations.push_back(expect("min_ep", "lt", 0.0, 0.0, "scan"));
      d.expectations.push_back(expect("fringe_ratio", "gt", 10.0, 0.0, "scan"));
    }
  }
  d.expectations.push_back(expect("ep_sum", "eq", 1.0, 1e-10, "closed-form"));
  return d;
}

ModelBundle two_slit(const TwoSlitParams& params) { return instantiate(two_slit_description(params)); }

// ---- qubit trine -------------------------------------------------------------------

ModelDescription qubit_trine_description() {
  const double pi = std::numbers::pi;
  auto dir = [](double half) { return real_vector({std::cos(half), std::sin(half)}); };
  ModelDescription d;
  d.name = "qubit-trine";
  d.dim = 2;
  d.state = real_vector({1, 0});
  d.families = {
      {"a", {"a+", "a-"}, {vector_spec(dir(pi / 3)), vector_spec(dir(pi / 3 + pi / 2))}},
      {"b", {"b+", "b-"}, {vector_spec(dir(2 * pi / 3)), vector_spec(dir(2 * pi / 3 + pi / 2))}},
  };
  d.schedule = {{"a", 1.0, {}}, {"b", 2.0, {}}};
  d.expectations = {expect("ep[a+/b+]", "eq", -0.125, 1e-12, "closed-form"),
                    expect("min_ep", "eq", -0.125, 1e-12, "closed-form"),
                    expect("ep_sum", "eq", 1.0, 1e-10, "closed-form")};
  return d;
}

ModelBundle qubit_trine() { return instantiate(qubit_trine_description()); }

// ---- spin environment ------------------------------------------------------------

ModelDescription spin_environment_description(std::size_t n_env, double theta) {
  if (n_env < 1) throw Error(Errc::ParamOutOfRange, "at least one environment spin is needed");
  if (n_env > 12) throw Error(Errc::DimensionGuard, "N = " + std::to_string(n_env) + " exceeds 12");
  if (!std::isfinite(theta)) throw Error(Errc::ParamOutOfRange, "coupling must be finite");

  // Environment in its symmetric sector: |k⟩ has k flipped spins, k = 0..N.
  const auto n = static_cast<Eigen::Index>(n_env);
  const Eigen::Index e = n + 1;
  Matrix jy = Matrix::Zero(e, e);
  for (Eigen::Index k = 0; k < n; ++k) {
    double amp = std::sqrt(static_cast<double>((k + 1) * (n - k)));
    jy(k + 1, k) = Complex(0.0, -0.5 * amp);
    jy(k, k + 1) = Complex(0.0, 0.5 * amp);
  }
  Matrix coupling = theta * jy;

  ModelDescription d;
  d.name = "spin-env";
  d.dim = static_cast<std::size_t>(2 * e);
  d.state = Vector::Zero(2 * e);
  d.state(0) = d.state(e) = 1.0 / std::sqrt(2.0);
  Matrix h = Matrix::Zero(2 * e, 2 * e);
  h.bottomRightCorner(e, e) = coupling;
  d.hamiltonian = h;

  const Matrix id_env = Matrix::Identity(e, e);
  Matrix plus(2, 2), minus(2, 2);
  plus << 0.5, 0.5, 0.5, 0.5;
  minus << 0.5, -0.5, -0.5, 0.5;

  // Conditional environment states after unit time.
  Vector e0 = Vector::Zero(e);
  e0(0) = 1.0;
  Vector e1 = unitary_of(HermitianOperator(coupling), -1.0) * e0;
  Complex c = e0.dot(e1);
  if (std::abs(c) > 0.0) e1 *= std::conj(c) / std::abs(c);
  const double overlap = std::abs(c);
  Matrix pi0;
  if (1.0 - overlap < 1e-12) {
    pi0 = e0 * e0.adjoint();
  } else {
    Vector g = (e0 + e1) / std::sqrt(2.0 * (1.0 + overlap));
    Vector hh = (e0 - e1) / std::sqrt(2.0 * (1.0 - overlap));
    Vector f0 = (g + hh) / std::sqrt(2.0);
    pi0 = f0 * f0.adjoint();
  }
  Matrix pi1 = id_env - pi0;

  d.families = {
      {"system_z", {"z0", "z1"}, {basis_spec(range(0, e)), basis_spec(range(e, 2 * e))}},
      {"system_x", {"x+", "x-"}, {matrix_spec(kron(plus, id_env)), matrix_spec(kron(minus, id_env))}},
      {"record",
       {"E0,x+", "E0,x-", "E1,x+", "E1,x-"},
       {matrix_spec(kron(plus, pi0)), matrix_spec(kron(minus, pi0)), matrix_spec(kron(plus, pi1)),
        matrix_spec(kron(minus, pi1))}},
  };
  d.schedule = {{"system_z", 0.0, {}}, {"system_x", 1.0, 0.0}};
  d.records = RecordSpec{"record", 2.0, 1.0, {HistoryIndex{0, 0}, HistoryIndex{0, 1}, HistoryIndex{1, 0}, HistoryIndex{1, 1}}};
  d.expectations = {
      expect("max_offdiag_D", "eq", 0.25 * std::pow(std::abs(std::cos(theta / 2.0)), static_cast<double>(n_env)),
             1e-10, "closed-form"),
      expect("ep_sum", "eq", 1.0, 1e-10, "closed-form"),
      expect("corr_sum", "eq", 1.0, 1e-10, "closed-form")};
  return d;
}

ModelBundle spin_environment(std::size_t n_env, double theta) {
  return instantiate(spin_environment_description(n_env, theta));
}

// ---- imaginary overlap -------------------------------------------------------------

ModelDescription imaginary_overlap_description(double c) {
  if (!(c > 0.0 && c < 0.25)) throw Error(Errc::ParamOutOfRange, "c must lie in (0, 0.25)");
  const Complex i(0.0, 1.0);
  const double k = 4.0 * c;
  const double s = std::sqrt(1.0 - k * k);
  Matrix refl = Matrix::Zero(4, 4);
  refl(0, 1) = i * k;
  refl(1, 0) = -i * k;
  refl(2, 3) = -i * k;
  refl(3, 2) = i * k;
  for (Eigen::Index j = 0; j < 2; ++j) refl(j, j + 2) = refl(j + 2, j) = s;
  Matrix q = 0.5 * (Matrix::Identity(4, 4) + refl);
  Matrix not_q = Matrix::Identity(4, 4) - q;

  ModelDescription d;
  d.name = "imaginary-overlap";
  d.dim = 4;
  d.state = real_vector({1, 1, 0, 0}) / std::sqrt(2.0);

  // Records: symmetric orthonormalization of the two branches inside each second-time block.
  const Matrix p0 = Projector::basis(4, {0}).entries();
  const Matrix p1 = Matrix::Identity(4, 4) - p0;
  const Matrix* second[2] = {&q, &not_q};
  std::vector<Vector> record_vectors(4);
  for (std::size_t b = 0; b < 2; ++b) {
    auto basis = lowdin_orthonormalize({*second[b] * p0 * d.state, *second[b] * p1 * d.state});
    record_vectors[0 * 2 + b] = basis[0];
    record_vectors[1 * 2 + b] = basis[1];
  }
  FamilySpec rec{"record", {"0/Q", "0/~Q", "rest/Q", "rest/~Q"}, {}};
  for (auto& v : record_vectors) rec.projectors.push_back(vector_spec(v));

  d.families = {
      {"first", {"0", "rest"}, {basis_spec({0}), basis_spec({1, 2, 3})}},
      {"second", {"Q", "~Q"}, {matrix_spec(q), matrix_spec(not_q)}},
      rec,
  };
  d.schedule = {{"first", 0.0, {}}, {"second", 1.0, {}}};
  d.records = RecordSpec{"record", 2.0, {}, {HistoryIndex{0, 0}, HistoryIndex{0, 1}, HistoryIndex{1, 0}, HistoryIndex{1, 1}}};
  d.expectations = {expect("max_offdiag_D", "eq", c, 1e-10, "construction"),
                    expect("max_offdiag_R", "eq", (1.0 - s) / 8.0, 1e-10, "construction"),
                    expect("ep_sum", "eq", 1.0, 1e-10, "closed-form"),
                    expect("corr_sum", "eq", 1.0, 1e-10, "closed-form")};
  return d;
}

ModelBundle imaginary_overlap(double c) { return instantiate(imaginary_overlap_description(c)); }

// ---- screen pattern --------------------------------------------------------------

std::vector<PatternRow> screen_pattern(const StateVector& state, const HistorySet& set) {
  if (set.schedule().size() != 2 || set.heisenberg_family(0).size() != 3)
    throw Error(Errc::WrongKind, "screen pattern needs a slit family {U, L, else} followed by a screen family");
  if (state.dim() != set.dim()) throw Error(Errc::DimensionMismatch, "state and set dimensions differ");
  const std::size_t bins = set.heisenberg_family(1).size();
  std::vector<PatternRow> rows(bins);
  for (std::size_t k = 0; k < set.count(); ++k) {
    HistoryIndex idx = set.shape().multi(k);
    Vector branch = set.apply_chain(k, state.amplitudes());
    double ep = state.amplitudes().dot(branch).real();
    auto& row = rows[idx[1]];
    row.bin = idx[1];
    row.intensity += ep;
    row.envelope += branch.squaredNorm();
    if (idx[0] == 0) row.ep_upper = ep;
    if (idx[0] == 1) row.ep_lower = ep;
  }
  return rows;
}

FringeMetrics fringe_metrics(const std::vector<PatternRow>& pattern) {
  FringeMetrics f;
  double peak = 0.0, env_peak = 0.0, gap = 0.0;
  for (const auto& r : pattern) {
    peak = std::max(peak, r.intensity);
    env_peak = std::max(env_peak, r.envelope);
    gap = std::max(gap, std::abs(r.intensity - r.envelope));
    f.total += r.intensity;
  }
  f.visibility = peak > 0.0 ? gap / peak : 0.0;
  double hi = 0.0, lo = std::numeric_limits<double>::infinity();
  for (const auto& r : pattern) {
    if (r.envelope < 0.5 * env_peak) continue;
    hi = std::max(hi, r.intensity);
    lo = std::min(lo, r.intensity);
  }
  f.ratio = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  return f;
}

// ---- expectation checks ------------------------------------------------------------

namespace {

std::size_t find_label(const std::vector<std::string>& labels, const std::string& label) {
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) throw Error(Errc::IndexOutOfRange, "no label '" + label + "'");
  return static_cast<std::size_t>(it - labels.begin());
}

// Splits "name[a][b]" into name and bracketed arguments.
std::vector<std::string> parse_quantity(const std::string& q) {
  std::vector<std::string> parts;
  std::size_t open = q.find('[');
  parts.push_back(q.substr(0, open));
  while (open != std::string::npos) {
    std::size_t close = q.find(']', open);
    if (close == std::string::npos) throw Error(Errc::IndexOutOfRange, "unbalanced quantity '" + q + "'");
    parts.push_back(q.substr(open + 1, close - open - 1));
    open = q.find('[', close);
  }
  return parts;
}

double compute(const ModelBundle& b, const std::string& quantity, const ToleranceConfig& tol) {
  auto parts = parse_quantity(quantity);
  const std::string& name = parts[0];
  auto records = [&]() -> RecordFamily {
    if (b.records) return *b.records;
    return canonical_records(b.state, b.set, tol);
  };
  if (name == "max_offdiag_D" && parts.size() == 1)
    return max_off_diagonal(decoherence_matrix(b.state, b.set)).magnitude;
  if (name == "max_offdiag_R" && parts.size() == 1)
    return max_off_diagonal(correlation_matrix(b.state, b.set, records())).magnitude;
  if (name == "corr_sum" && parts.size() == 1) return correlation_matrix(b.state, b.set, records()).normalization;
  if (name == "ep_sum" && parts.size() == 1) return extended_probabilities(b.state, b.set, tol).sum();
  if (name == "min_ep" && parts.size() == 1) {
    auto ep = extended_probabilities(b.state, b.set, tol);
    return *std::min_element(ep.values.begin(), ep.values.end());
  }
  if (name == "ep" && parts.size() == 2) {
    auto ep = extended_probabilities(b.state, b.set, tol);
    return ep.values[find_label(ep.labels, parts[1])];
  }
  if (name == "retrodict" && parts.size() == 3) {
    const std::size_t last = b.set.schedule().size() - 1;
    std::size_t pd = find_label(b.set.heisenberg_family(last).labels(), parts[1]);
    auto table = retrodict(b.state, b.set, b.records ? &*b.records : nullptr, last, pd, tol);
    return table.values[find_label(table.labels, parts[2])];
  }
  if ((name == "fringe_visibility" || name == "fringe_ratio") && parts.size() == 1) {
    auto f = fringe_metrics(screen_pattern(b.state, b.set));
    return name == "fringe_visibility" ? f.visibility : f.ratio;
  }
  throw Error(Errc::WrongKind, "unknown quantity '" + quantity + "'");
}

bool holds(const Expectation& e, double actual) {
  if (e.relation == "eq") return std::abs(actual - e.value) <= e.tolerance;
  if (e.relation == "le") return actual <= e.value + e.tolerance;
  if (e.relation == "ge") return actual >= e.value - e.tolerance;
  if (e.relation == "lt") return actual < e.value;
  if (e.relation == "gt") return actual > e.value;
  throw Error(Errc::WrongKind, "unknown relation '" + e.relation + "'");
}

}  // namespace

std::vector<ExpectationResult> verify(const ModelBundle& bundle, const ToleranceConfig& tol) {
  std::vector<ExpectationResult> out;
  for (const auto& e : bundle.expectations) {
    ExpectationResult r{e, std::numeric_limits<double>::quiet_NaN(), false, {}};
    try {
      r.actual = compute(bundle, e.quantity, tol);
      r.pass = holds(e, r.actual);
    } catch (const Error& err) {
      r.error = err.what();
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace rh
