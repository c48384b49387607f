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

#include "rh/measures.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace rh {

namespace {

void require_dim(const StateVector& state, const Histories& set) {
  if (state.dim() != set.dim())
    throw Error(Errc::DimensionMismatch, "state dim " + std::to_string(state.dim()) + " vs set dim " +
                                             std::to_string(set.dim()));
}

std::vector<Vector> branches(const StateVector& state, const Histories& set) {
  std::vector<Vector> out;
  out.reserve(set.count());
  for (std::size_t k = 0; k < set.count(); ++k) out.push_back(set.apply_chain(k, state.amplitudes()));
  return out;
}

Vector apply(const Projector& p, const Vector& v) {
  if (is_diagonal(p.entries())) return p.entries().diagonal().cwiseProduct(v);
  return p.entries() * v;
}

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

}  // namespace

// ---- records ---------------------------------------------------------------

RecordFamily RecordFamily::heisenberg(ProjectorFamily family, double record_time,
                                      std::vector<std::optional<std::size_t>> alignment,
                                      std::size_t history_count) {
  if (alignment.size() != family.size())
    throw Error(Errc::AlignmentIncomplete, "alignment has " + std::to_string(alignment.size()) +
                                               " entries for " + std::to_string(family.size()) + " records");
  std::vector<std::size_t> record_of(history_count, family.size());
  std::optional<std::size_t> residual;
  for (std::size_t m = 0; m < alignment.size(); ++m) {
    if (!alignment[m]) {
      if (residual) throw Error(Errc::AlignmentIncomplete, "more than one unaligned record");
      residual = m;
      continue;
    }
    std::size_t h = *alignment[m];
    if (h >= history_count) throw Error(Errc::AlignmentIncomplete, "record aligned to missing history " + std::to_string(h));
    if (record_of[h] != family.size())
      throw Error(Errc::AlignmentIncomplete, "history " + std::to_string(h) + " has two records");
    record_of[h] = m;
  }
  for (std::size_t h = 0; h < history_count; ++h)
    if (record_of[h] == family.size())
      throw Error(Errc::AlignmentIncomplete, "history " + std::to_string(h) + " has no record");
  return RecordFamily(std::move(family), record_time, std::move(alignment), std::move(record_of), residual);
}

RecordFamily make_record_family(const Histories& set, ProjectorFamily declared, double record_time,
                                double reference_time, std::vector<std::optional<std::size_t>> alignment,
                                const ToleranceConfig& tol) {
  if (declared.dim() != set.dim()) throw Error(Errc::DimensionMismatch, "record family dimension");
  if (!(record_time > set.last_time()))
    throw Error(Errc::RecordTimeNotAfterHistories,
                "record time " + fmt(record_time) + " is not after " + fmt(set.last_time()));
  auto evolved = evolve_family(declared, set.hamiltonian(), reference_time, record_time, tol);
  return RecordFamily::heisenberg(std::move(evolved), record_time, std::move(alignment), set.count());
}

RecordFamily coarse_records(const RecordFamily& records, const Partition& partition, const ToleranceConfig& tol) {
  if (partition.count() != records.history_count())
    throw Error(Errc::InvalidPartition, "partition does not match the recorded histories");
  std::vector<std::vector<std::size_t>> groups;
  std::vector<std::string> labels;
  std::vector<std::optional<std::size_t>> alignment;
  for (std::size_t b = 0; b < partition.size(); ++b) {
    std::vector<std::size_t> group;
    std::string label = "{";
    for (std::size_t i = 0; i < partition.blocks()[b].size(); ++i) {
      std::size_t m = records.record_of(partition.blocks()[b][i]);
      if (std::find(group.begin(), group.end(), m) != group.end()) continue;
      group.push_back(m);
      if (label.size() > 1) label += ',';
      label += records.family().labels()[m];
    }
    groups.push_back(std::move(group));
    labels.push_back(label + "}");
    alignment.emplace_back(b);
  }
  if (auto r = records.residual()) {
    groups.push_back({*r});
    labels.push_back(records.family().labels()[*r]);
    alignment.emplace_back(std::nullopt);
  }
  return RecordFamily::heisenberg(merge_members(records.family(), groups, std::move(labels), tol),
                                  records.record_time(), std::move(alignment), partition.size());
}

RecordFamily tensor_records(const RecordFamily& a, const HistorySet& set_a, const RecordFamily& b,
                            const HistorySet& set_b, const ToleranceConfig& tol) {
  if (a.record_time() != b.record_time())
    throw Error(Errc::ScheduleMismatch, "subsystem record times differ");
  if (set_a.schedule().size() != set_b.schedule().size())
    throw Error(Errc::ScheduleMismatch, "subsystem schedules have different lengths");
  const auto& ra = set_a.shape().radices();
  const auto& rb = set_b.shape().radices();
  std::vector<std::size_t> radices(ra.size());
  for (std::size_t k = 0; k < ra.size(); ++k) radices[k] = ra[k] * rb[k];
  IndexShape shape(radices);

  const auto n = static_cast<Eigen::Index>(a.family().dim() * b.family().dim());
  std::vector<Projector> members;
  std::vector<std::string> labels;
  std::vector<std::optional<std::size_t>> alignment;
  Matrix aligned_sum = Matrix::Zero(n, n);
  bool residual = false;
  for (std::size_t i = 0; i < a.family().size(); ++i) {
    for (std::size_t j = 0; j < b.family().size(); ++j) {
      if (!a.alignment()[i] || !b.alignment()[j]) {
        residual = true;
        continue;
      }
      HistoryIndex ia = set_a.shape().multi(*a.alignment()[i]);
      HistoryIndex ib = set_b.shape().multi(*b.alignment()[j]);
      HistoryIndex c(ia.size());
      for (std::size_t k = 0; k < ia.size(); ++k) c[k] = ia[k] * rb[k] + ib[k];
      Matrix m = kron(a.family()[i].entries(), b.family()[j].entries());
      aligned_sum += m;
      members.push_back(validate_projector(std::move(m), tol));
      labels.push_back(a.family().labels()[i] + "*" + b.family().labels()[j]);
      alignment.emplace_back(shape.flat(c));
    }
  }
  if (residual) {
    members.push_back(validate_projector(Matrix::Identity(n, n) - aligned_sum, tol));
    labels.emplace_back("residual");
    alignment.emplace_back(std::nullopt);
  }
  return RecordFamily::heisenberg(validate_family(std::move(members), std::move(labels), tol),
                                  a.record_time(), std::move(alignment), shape.count());
}

// ---- measure matrices --------------------------------------------------------

MeasureMatrix correlation_matrix(const StateVector& state, const Histories& set, const RecordFamily& records) {
  require_dim(state, set);
  if (records.family().dim() != set.dim()) throw Error(Errc::DimensionMismatch, "record family dimension");
  if (records.history_count() != set.count())
    throw Error(Errc::AlignmentIncomplete, "records are aligned with a different history count");
  if (!(records.record_time() > set.last_time()))
    throw Error(Errc::RecordTimeNotAfterHistories, "record time " + fmt(records.record_time()) +
                                                       " is not after " + fmt(set.last_time()));
  const std::size_t k = set.count();
  const std::size_t rows = k + (records.residual() ? 1 : 0);
  auto br = branches(state, set);

  MeasureMatrix m{MeasureKind::Correlation, Matrix::Zero(rows, k), Matrix::Zero(rows, k), 0.0};
  for (std::size_t r = 0; r < rows; ++r) {
    std::size_t member = r < k ? records.record_of(r) : *records.residual();
    // ⟨Ψ|R C_β|Ψ⟩ = ⟨RΨ|Ψ_β⟩ since R is Hermitian
    Vector rpsi = apply(records.family()[member], state.amplitudes());
    for (std::size_t b = 0; b < k; ++b) {
      Complex z = rpsi.dot(br[b]);
      m.raw(r, b) = z;
      m.entries(r, b) = z.real();
      m.normalization += z.real();
    }
  }
  return m;
}

MeasureMatrix decoherence_matrix(const StateVector& state, const Histories& set) {
  require_dim(state, set);
  const std::size_t k = set.count();
  auto br = branches(state, set);
  Matrix d(k, k);
  for (std::size_t a = 0; a < k; ++a) {
    d(a, a) = br[a].squaredNorm();
    for (std::size_t b = a + 1; b < k; ++b) {
      d(a, b) = br[a].dot(br[b]);
      d(b, a) = std::conj(d(a, b));
    }
  }
  return {MeasureKind::Decoherence, d, d, d.sum().real()};
}

OffDiagonalWitness max_off_diagonal(const MeasureMatrix& m) {
  OffDiagonalWitness w;
  if (m.entries.cols() > 1) w.col = 1;
  for (Eigen::Index r = 0; r < m.entries.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.entries.cols(); ++c) {
      if (r == c) continue;
      double v = std::abs(m.entries(r, c));
      if (v > w.magnitude) {
        w.magnitude = v;
        w.row = static_cast<std::size_t>(r);
        w.col = static_cast<std::size_t>(c);
      }
    }
  }
  return w;
}

OffDiagonalWitness is_recorded(const MeasureMatrix& m, const ToleranceConfig& tol) {
  if (m.kind != MeasureKind::Correlation) throw Error(Errc::WrongKind, "is_recorded needs a correlation matrix");
  auto w = max_off_diagonal(m);
  w.holds = w.magnitude <= tol.rec;
  return w;
}

OffDiagonalWitness is_medium_decoherent(const MeasureMatrix& m, const ToleranceConfig& tol) {
  if (m.kind != MeasureKind::Decoherence)
    throw Error(Errc::WrongKind, "is_medium_decoherent needs a decoherence matrix");
  auto w = max_off_diagonal(m);
  w.holds = w.magnitude <= tol.dec;
  return w;
}

// ---- probabilities -----------------------------------------------------------

double ProbabilityTable::sum() const { return std::accumulate(values.begin(), values.end(), 0.0); }

ProbabilityTable extended_probabilities(const StateVector& state, const Histories& set, const ToleranceConfig& tol) {
  require_dim(state, set);
  ProbabilityTable t;
  for (std::size_t k = 0; k < set.count(); ++k) {
    double v = state.amplitudes().dot(set.apply_chain(k, state.amplitudes())).real();
    t.values.push_back(v);
    t.labels.push_back(set.label(k));
    if (v < -tol.dec || v > 1.0 + tol.dec) t.extended = true;
  }
  return t;
}

double record_probability(const StateVector& state, const Projector& record) {
  if (state.dim() != record.dim()) throw Error(Errc::DimensionMismatch, "record dimension");
  return apply(record, state.amplitudes()).squaredNorm();
}

ProbabilityTable record_probabilities(const StateVector& state, const RecordFamily& records) {
  ProbabilityTable t;
  for (std::size_t m = 0; m < records.family().size(); ++m) {
    t.values.push_back(record_probability(state, records.family()[m]));
    t.labels.push_back(records.family().labels()[m]);
  }
  return t;
}

ProbabilityTable history_probabilities(const StateVector& state, const Histories& set,
                                       const RecordFamily& records, const ToleranceConfig& tol) {
  auto corr = correlation_matrix(state, set, records);
  auto w = is_recorded(corr, tol);
  if (!w.holds)
    throw Error(Errc::NotRecorded,
                "off-diagonal correlation " + fmt(w.magnitude) + " at (" + std::to_string(w.row) + "," +
                    std::to_string(w.col) + ") exceeds " + fmt(tol.rec),
                w.magnitude);
  auto ep = extended_probabilities(state, set, tol);
  const double bound = 2.0 * static_cast<double>(set.count()) * tol.rec;
  ProbabilityTable t;
  for (std::size_t k = 0; k < set.count(); ++k) {
    double p = record_probability(state, records.family()[records.record_of(k)]);
    double gap = std::abs(p - ep.values[k]);
    if (gap > bound + 1e-12)
      throw Error(Errc::ProbabilityMismatch,
                  "history " + set.label(k) + ": record probability differs from Re<Psi|C|Psi> by " + fmt(gap), gap);
    t.values.push_back(p);
    t.labels.push_back(set.label(k));
  }
  return t;
}

// ---- strong and canonical records -------------------------------------------

StrongRecordResult strong_record_check(const StateVector& state, const Histories& set,
                                       const RecordFamily& records, const ToleranceConfig& tol) {
  require_dim(state, set);
  if (records.history_count() != set.count())
    throw Error(Errc::AlignmentIncomplete, "records do not cover every history");
  StrongRecordResult r;
  auto br = branches(state, set);
  for (std::size_t k = 0; k < set.count(); ++k) {
    Vector rpsi = apply(records.family()[records.record_of(k)], state.amplitudes());
    double res = (rpsi - br[k]).norm();
    if (res > r.worst_residual) {
      r.worst_residual = res;
      r.worst_history = k;
    }
  }
  r.holds = r.worst_residual <= tol.rec;
  if (records.record_time() > set.last_time()) {
    auto corr = correlation_matrix(state, set, records);
    for (Eigen::Index a = 0; a < corr.entries.rows(); ++a)
      for (Eigen::Index b = 0; b < corr.entries.cols(); ++b) {
        double target = (a == b) ? br[static_cast<std::size_t>(a)].squaredNorm() : 0.0;
        r.diagonal_deviation = std::max(r.diagonal_deviation, std::abs(corr.entries(a, b).real() - target));
      }
  }
  return r;
}

RecordFamily canonical_records(const StateVector& state, const Histories& set, const ToleranceConfig& tol) {
  auto d = decoherence_matrix(state, set);
  auto w = is_medium_decoherent(d, tol);
  if (!w.holds)
    throw Error(Errc::NotDecoherent, "off-diagonal |D| = " + fmt(w.magnitude) + " at (" + set.label(w.row) + ", " +
                                         set.label(w.col) + ")",
                w.magnitude);
  auto br = branches(state, set);
  const double p_floor = tol.rec * tol.rec;
  std::vector<std::size_t> live;
  std::vector<Vector> live_vectors;
  for (std::size_t k = 0; k < br.size(); ++k) {
    if (br[k].squaredNorm() > p_floor) {
      live.push_back(k);
      live_vectors.push_back(br[k]);
    }
  }
  if (live.empty()) throw Error(Errc::AllBranchesNull, "every branch vector is null");
  auto basis = lowdin_orthonormalize(live_vectors);

  const auto n = static_cast<Eigen::Index>(set.dim());
  std::vector<Matrix> r(set.count(), Matrix::Zero(n, n));
  Matrix sum = Matrix::Zero(n, n);
  for (std::size_t i = 0; i < live.size(); ++i) {
    r[live[i]] = basis[i] * basis[i].adjoint();
    sum += r[live[i]];
  }
  r[live.front()] += Matrix::Identity(n, n) - sum;

  std::vector<Projector> members;
  std::vector<std::string> labels;
  std::vector<std::optional<std::size_t>> alignment;
  for (std::size_t k = 0; k < set.count(); ++k) {
    Matrix m = 0.5 * (r[k] + r[k].adjoint());
    members.push_back(validate_projector(std::move(m), tol));
    labels.push_back("R[" + set.label(k) + "]");
    alignment.emplace_back(k);
  }
  return RecordFamily::heisenberg(validate_family(std::move(members), std::move(labels), tol),
                                  set.last_time() + 1.0, std::move(alignment), set.count());
}

// ---- classification ------------------------------------------------------------

Classification classify(const StateVector& state, const Histories& set, const RecordFamily* records,
                        const ToleranceConfig& tol) {
  require_dim(state, set);
  Classification c;

  auto ep = extended_probabilities(state, set, tol);
  c.ep_in_range = !ep.extended;
  c.ep_sum = ep.sum();
  double worst = -1.0;
  for (std::size_t k = 0; k < ep.values.size(); ++k) {
    double v = ep.values[k];
    double excess = v < 0.0 ? -v : (v > 1.0 ? v - 1.0 : 0.0);
    // with nothing out of range the witness is the smallest value
    double score = excess > 0.0 ? 1.0 + excess : -v;
    if (k == 0 || score > worst) {
      worst = score;
      c.worst_ep = {k, v};
    }
  }

  auto d = decoherence_matrix(state, set);
  c.decoherence_witness = is_medium_decoherent(d, tol);
  c.medium_decoherent = c.decoherence_witness.holds;

  std::optional<RecordFamily> canonical;
  if (!records && c.medium_decoherent) {
    canonical = canonical_records(state, set, tol);
    records = &*canonical;
    c.canonical_records_used = true;
  }
  if (records) {
    auto corr = correlation_matrix(state, set, *records);
    c.correlation_normalization = corr.normalization;
    c.record_witness = is_recorded(corr, tol);
    c.strong = strong_record_check(state, set, *records, tol);
    c.strongly_recorded = c.strong->holds;
    bool recorded = c.record_witness->holds;
    if (c.strong->holds && !recorded) {
      ToleranceConfig doubled = tol;
      doubled.rec = 2.0 * tol.rec;
      if (!is_recorded(corr, doubled).holds)
        throw Error(Errc::HierarchyViolation, "strong records without recording at 2*eps_rec",
                    c.record_witness->magnitude);
      recorded = true;
    }
    c.recorded = recorded;
    if (recorded) {
      double gap = 0.0;
      for (std::size_t k = 0; k < set.count(); ++k) {
        double p = record_probability(state, records->family()[records->record_of(k)]);
        gap = std::max(gap, std::abs(p - ep.values[k]));
      }
      c.probability_gap = gap;
    }
  }
  return c;
}

// ---- retrodiction ----------------------------------------------------------------

ProbabilityTable retrodict(const StateVector& state, const HistorySet& set, const RecordFamily* records,
                           std::size_t present_slot, std::size_t pd_value, const ToleranceConfig& tol) {
  const std::size_t n = set.schedule().size();
  if (present_slot + 1 != n)
    throw Error(Errc::IndexOutOfRange, "present data must come from the final slot " + std::to_string(n - 1));
  if (pd_value >= set.heisenberg_family(present_slot).size())
    throw Error(Errc::IndexOutOfRange, "present value " + std::to_string(pd_value));

  std::optional<RecordFamily> canonical;
  if (!records) {
    try {
      canonical = canonical_records(state, set, tol);
    } catch (const Error& e) {
      if (e.code() == Errc::NotDecoherent) throw Error(Errc::NotRecorded, e.what(), e.magnitude());
      throw;
    }
    records = &*canonical;
  }
  auto joint = history_probabilities(state, set, *records, tol);

  std::vector<std::size_t> past_radices(set.shape().radices().begin(), set.shape().radices().end() - 1);
  IndexShape past(past_radices);
  ProbabilityTable t;
  t.values.assign(past.count(), 0.0);
  double evidence = 0.0;
  for (std::size_t k = 0; k < set.count(); ++k) {
    HistoryIndex idx = set.shape().multi(k);
    if (idx.back() != pd_value) continue;
    idx.pop_back();
    t.values[past.flat(idx)] += joint.values[k];
    evidence += joint.values[k];
  }
  if (evidence <= tol.rec)
    throw Error(Errc::ZeroEvidence, "p(present data) = " + fmt(evidence), evidence);
  for (std::size_t p = 0; p < past.count(); ++p) {
    t.values[p] /= evidence;
    HistoryIndex idx = past.multi(p);
    std::string label;
    for (std::size_t s = 0; s < idx.size(); ++s) {
      if (s) label += '/';
      label += set.heisenberg_family(s).labels()[idx[s]];
    }
    t.labels.push_back(label);
  }
  return t;
}

// ---- incompatibility ---------------------------------------------------------------

namespace {

bool same_family(const ProjectorFamily& a, const ProjectorFamily& b, double eps) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (max_abs(a[i].entries() - b[i].entries()) > eps) return false;
  return true;
}

}  // namespace

HistorySet product_fine_graining(const HistorySet& a, const HistorySet& b, const ToleranceConfig& tol) {
  if (a.dim() != b.dim()) throw Error(Errc::DimensionMismatch, "sets act on different spaces");
  if (max_abs(a.hamiltonian().entries() - b.hamiltonian().entries()) > tol.herm)
    throw Error(Errc::ScheduleMismatch, "sets use different Hamiltonians");

  struct Slot {
    double time;
    const ProjectorFamily* family;
  };
  std::vector<Slot> slots;
  for (std::size_t k = 0; k < a.schedule().size(); ++k) slots.push_back({a.schedule()[k].time, &a.heisenberg_family(k)});
  for (std::size_t k = 0; k < b.schedule().size(); ++k) slots.push_back({b.schedule()[k].time, &b.heisenberg_family(k)});
  std::stable_sort(slots.begin(), slots.end(), [](const Slot& x, const Slot& y) { return x.time < y.time; });

  std::vector<ScheduledFamily> schedule;
  for (std::size_t i = 0; i < slots.size();) {
    std::size_t j = i + 1;
    while (j < slots.size() && slots[j].time == slots[i].time) ++j;
    std::vector<const ProjectorFamily*> distinct;
    for (std::size_t s = i; s < j; ++s) {
      bool seen = false;
      for (auto* f : distinct) seen = seen || same_family(*f, *slots[s].family, tol.proj);
      if (!seen) distinct.push_back(slots[s].family);
    }
    if (distinct.size() == 1) {
      schedule.emplace_back(*distinct.front(), slots[i].time);
    } else {
      const auto& f = *distinct[0];
      const auto& g = *distinct[1];
      std::vector<Projector> members;
      std::vector<std::string> labels;
      for (std::size_t x = 0; x < f.size(); ++x) {
        for (std::size_t y = 0; y < g.size(); ++y) {
          Matrix fg = multiply(f[x].entries(), g[y].entries());
          Matrix gf = multiply(g[y].entries(), f[x].entries());
          if (max_abs(fg - gf) > tol.proj)
            throw Error(Errc::ScheduleMismatch, "non-commuting families share time " + fmt(slots[i].time));
          members.push_back(validate_projector(0.5 * (fg + fg.adjoint()), tol));
          labels.push_back(f.labels()[x] + "&" + g.labels()[y]);
        }
      }
      schedule.emplace_back(validate_family(std::move(members), std::move(labels), tol), slots[i].time);
    }
    i = j;
  }
  return build_history_set(a.hamiltonian(), std::move(schedule), tol);
}

bool incompatible(const HistorySet& a, const HistorySet& b, const StateVector& state, const ToleranceConfig& tol) {
  auto fine = product_fine_graining(a, b, tol);
  // Canonical records exist exactly when the fine graining is decoherent.
  return !is_medium_decoherent(decoherence_matrix(state, fine), tol).holds;
}

}  // namespace rh
