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

#include "rh/commands.hpp"

#include <functional>
#include <ostream>

#include "rh/model_file.hpp"
#include "rh/report.hpp"

namespace rh {

namespace {

int guarded(CommandContext& ctx, const std::function<int()>& body) {
  try {
    return body();
  } catch (const ModelFileError& e) {
    ctx.err << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const Error& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    ctx.err << "error: " << e.what() << "\n";
    return kExitParse;
  }
}

struct Loaded {
  ModelDescription desc;
  ModelBundle bundle;
};

Loaded load(const std::string& path, const ToleranceConfig& tol) {
  ModelDescription desc = load_model(path);
  ModelBundle bundle = instantiate(desc, tol);
  return {std::move(desc), std::move(bundle)};
}

void emit(CommandContext& ctx, const ReportDocument& doc) {
  ctx.out << (ctx.format == OutputFormat::Json ? render_json(doc) : render_text(doc));
}

std::string multi_label(const HistorySet& set, std::size_t k) {
  auto idx = set.shape().multi(k);
  std::string s;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) s += ':';
    s += std::to_string(idx[i]);
  }
  return s;
}

RecordFamily records_or_canonical(const ModelBundle& b, const ToleranceConfig& tol) {
  if (b.records) return *b.records;
  try {
    return canonical_records(b.state, b.set, tol);
  } catch (const Error& e) {
    if (e.code() == Errc::NotDecoherent)
      throw Error(Errc::NotRecorded, std::string("no records supplied and canonical records need decoherence; ") + e.what(),
                  e.magnitude());
    throw;
  }
}

}  // namespace

int cmd_validate(const std::string& path, CommandContext& ctx) {
  return guarded(ctx, [&] {
    auto [desc, bundle] = load(path, ctx.tol);
    auto results = verify(bundle, ctx.tol);
    emit(ctx, verification_report(bundle, results));
    for (const auto& r : results) {
      if (!r.pass) {
        ctx.err << "expectation failed: " << r.expectation.quantity << "\n";
        return static_cast<int>(kExitDomain);
      }
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_classify(const std::string& path, CommandContext& ctx) {
  return guarded(ctx, [&] {
    auto [desc, bundle] = load(path, ctx.tol);
    auto c = classify(bundle.state, bundle.set, bundle.records ? &*bundle.records : nullptr, ctx.tol);
    emit(ctx, classification_report(bundle, c));
    return static_cast<int>(kExitOk);
  });
}

int cmd_probs(const std::string& path, const std::optional<std::string>& conditional_on, CommandContext& ctx) {
  return guarded(ctx, [&] {
    auto [desc, bundle] = load(path, ctx.tol);
    if (!conditional_on) {
      auto records = records_or_canonical(bundle, ctx.tol);
      auto table = history_probabilities(bundle.state, bundle.set, records, ctx.tol);
      emit(ctx, probability_report(bundle.name, table, table.sum()));
      return static_cast<int>(kExitOk);
    }
    const std::string& spec = *conditional_on;
    auto colon = spec.rfind(':');
    if (colon == std::string::npos) throw Error(Errc::IndexOutOfRange, "expected family:value, got '" + spec + "'");
    const std::string family = spec.substr(0, colon);
    const std::string value = spec.substr(colon + 1);

    std::optional<std::size_t> slot;
    for (std::size_t s = 0; s < desc.schedule.size(); ++s)
      if (desc.schedule[s].family == family) slot = s;
    if (!slot) throw Error(Errc::IndexOutOfRange, "family '" + family + "' is not scheduled");
    const auto& labels = bundle.set.heisenberg_family(*slot).labels();
    std::optional<std::size_t> member;
    for (std::size_t i = 0; i < labels.size(); ++i)
      if (labels[i] == value) member = i;
    if (!member) {
      try {
        std::size_t used = 0;
        unsigned long v = std::stoul(value, &used);
        if (used == value.size()) member = v;
      } catch (const std::exception&) {
      }
    }
    if (!member) throw Error(Errc::IndexOutOfRange, "family '" + family + "' has no member '" + value + "'");

    const RecordFamily* records = bundle.records ? &*bundle.records : nullptr;
    auto table = retrodict(bundle.state, bundle.set, records, *slot, *member, ctx.tol);
    emit(ctx, probability_report(bundle.name + " | " + family + "=" + labels.at(*member), table, table.sum()));
    return static_cast<int>(kExitOk);
  });
}

int cmd_matrix(const std::string& path, MatrixKind kind, CommandContext& ctx) {
  return guarded(ctx, [&] {
    auto [desc, bundle] = load(path, ctx.tol);
    const auto& set = bundle.set;
    if (kind == MatrixKind::Extended) {
      auto ep = extended_probabilities(bundle.state, set, ctx.tol);
      ctx.out << "alpha,value\n";
      for (std::size_t k = 0; k < set.count(); ++k) ctx.out << multi_label(set, k) << "," << format_number(ep.values[k]) << "\n";
      return static_cast<int>(kExitOk);
    }
    MeasureMatrix m = kind == MatrixKind::Decoherence
                          ? decoherence_matrix(bundle.state, set)
                          : [&] {
                              if (!bundle.records) throw Error(Errc::NotRecorded, "model has no records");
                              return correlation_matrix(bundle.state, set, *bundle.records);
                            }();
    ctx.out << "alpha,beta,re,im\n";
    for (Eigen::Index r = 0; r < m.raw.rows(); ++r) {
      auto row = static_cast<std::size_t>(r);
      std::string a = row < set.count() ? multi_label(set, row) : "residual";
      for (Eigen::Index c = 0; c < m.raw.cols(); ++c)
        ctx.out << a << "," << multi_label(set, static_cast<std::size_t>(c)) << "," << format_number(m.raw(r, c).real())
                << "," << format_number(m.raw(r, c).imag()) << "\n";
    }
    return static_cast<int>(kExitOk);
  });
}

ModelDescription builtin_description(const BuiltinRequest& r) {
  if (r.name == "three-box") {
    if (r.variant == "A") return three_box_description(ThreeBoxVariant::A_set);
    if (r.variant == "B") return three_box_description(ThreeBoxVariant::B_set);
    if (r.variant == "fine") return three_box_description(ThreeBoxVariant::fine_AB);
    throw Error(Errc::ParamOutOfRange, "three-box variant must be A, B or fine");
  }
  if (r.name == "two-slit") return two_slit_description(r.two_slit);
  if (r.name == "qubit-trine") return qubit_trine_description();
  if (r.name == "spin-env") return spin_environment_description(r.n_env, r.theta);
  if (r.name == "imaginary-overlap") return imaginary_overlap_description(r.c);
  throw Error(Errc::ParamOutOfRange, "unknown built-in model '" + r.name + "'");
}

int cmd_builtin(const BuiltinRequest& request, const std::optional<std::string>& emit_path, CommandContext& ctx) {
  return guarded(ctx, [&] {
    auto desc = builtin_description(request);
    instantiate(desc, ctx.tol);
    if (emit_path) {
      save_model(desc, *emit_path);
      ctx.err << "wrote " << desc.name << " to " << *emit_path << "\n";
    } else {
      ctx.out << export_model(desc);
    }
    return static_cast<int>(kExitOk);
  });
}

int cmd_pattern(const std::string& path, CommandContext& ctx) {
  return guarded(ctx, [&] {
    auto [desc, bundle] = load(path, ctx.tol);
    auto rows = screen_pattern(bundle.state, bundle.set);
    ctx.out << "bin,intensity,ep_upper,ep_lower\n";
    for (const auto& r : rows)
      ctx.out << r.bin << "," << format_number(r.intensity) << "," << format_number(r.ep_upper) << ","
              << format_number(r.ep_lower) << "\n";
    auto f = fringe_metrics(rows);
    ctx.err << "visibility=" << format_number(f.visibility) << " ratio=" << format_number(f.ratio)
            << " total=" << format_number(f.total) << "\n";
    return static_cast<int>(kExitOk);
  });
}

}  // namespace rh
