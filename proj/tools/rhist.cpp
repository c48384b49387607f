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

// rhist: command-line front end for the records-and-histories library.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "rh/commands.hpp"
#include "rh/error.hpp"

namespace {

struct Options {
  std::optional<std::string> profile;
  std::optional<double> epsilon;
  std::optional<double> norm, herm, proj, rec, dec;
  std::string format = "text";
  std::optional<std::string> out;
};

rh::ToleranceConfig resolve(const Options& o) {
  std::string name = "default";
  if (const char* env = std::getenv("RHIST_TOLERANCE_PROFILE")) name = env;
  if (o.profile) name = *o.profile;
  auto tol = rh::ToleranceConfig::profile(name);
  if (o.epsilon) tol.rec = tol.dec = *o.epsilon;
  if (o.norm) tol.norm = *o.norm;
  if (o.herm) tol.herm = *o.herm;
  if (o.proj) tol.proj = *o.proj;
  if (o.rec) tol.rec = *o.rec;
  if (o.dec) tol.dec = *o.dec;
  tol.validate();
  return tol;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Consistent-histories toolkit: decoherence, records and probabilities for finite models"};
  app.require_subcommand(1);
  Options opt;
  app.add_option("--profile", opt.profile, "Tolerance profile: default, strict, loose (env RHIST_TOLERANCE_PROFILE)");
  app.add_option("--epsilon", opt.epsilon, "Sets both the record and decoherence thresholds");
  app.add_option("--tolerance-norm", opt.norm, "State normalization tolerance");
  app.add_option("--tolerance-herm", opt.herm, "Hermiticity tolerance");
  app.add_option("--tolerance-proj", opt.proj, "Projector and family tolerance");
  app.add_option("--tolerance-rec", opt.rec, "Record off-diagonal threshold");
  app.add_option("--tolerance-dec", opt.dec, "Decoherence off-diagonal threshold");
  app.add_option("--format", opt.format, "Report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--out", opt.out, "Write standard output to this file");

  std::string path;
  auto* validate = app.add_subcommand("validate", "Check a model file and its expectations");
  validate->add_option("model", path, "Model file")->required();

  auto* classify = app.add_subcommand("classify", "Decoherence, record and range flags with witnesses");
  classify->add_option("model", path, "Model file")->required();

  std::optional<std::string> conditional;
  auto* probs = app.add_subcommand("probs", "History probabilities, or retrodiction from present data");
  probs->add_option("model", path, "Model file")->required();
  probs->add_option("--conditional-on", conditional, "family:value of the final slot");

  std::string kind = "dfunc";
  auto* matrix = app.add_subcommand("matrix", "Decoherence, correlation or extended-probability CSV");
  matrix->add_option("model", path, "Model file")->required();
  matrix->add_option("--kind", kind, "dfunc, corr or ep")->check(CLI::IsMember({"dfunc", "corr", "ep"}));

  auto* pattern = app.add_subcommand("pattern", "Screen intensity CSV of a two-slit model");
  pattern->add_option("model", path, "Model file")->required();

  rh::BuiltinRequest request;
  std::optional<std::string> emit_path;
  auto* builtin = app.add_subcommand("builtin", "Write a built-in model file");
  builtin->require_subcommand(1);
  auto add_emit = [&](CLI::App* sub) { sub->add_option("--emit", emit_path, "Output model file"); };

  auto* three_box = builtin->add_subcommand("three-box", "Three-box retrodiction model");
  three_box->add_option("--variant", request.variant, "A, B or fine")->check(CLI::IsMember({"A", "B", "fine"}));
  add_emit(three_box);

  auto* two_slit = builtin->add_subcommand("two-slit", "Lattice two-slit model");
  std::optional<std::size_t> slit_u, slit_l;
  std::optional<double> time;
  two_slit->add_option("--bins", request.two_slit.bins, "Number of position bins");
  two_slit->add_option("--slit-u", slit_u, "Upper slit bin");
  two_slit->add_option("--slit-l", slit_l, "Lower slit bin");
  two_slit->add_option("--width", request.two_slit.packet_width, "Packet width in bins");
  two_slit->add_option("--time", time, "Propagation time");
  two_slit->add_flag("--record", request.two_slit.with_record, "Add a which-path record");
  add_emit(two_slit);

  auto* trine = builtin->add_subcommand("qubit-trine", "Qubit with out-of-range extended probability");
  add_emit(trine);

  auto* spin = builtin->add_subcommand("spin-env", "System spin decohered by an environment of spins");
  spin->add_option("--n", request.n_env, "Environment spins (1..12)");
  spin->add_option("--theta", request.theta, "Coupling angle in radians");
  add_emit(spin);

  auto* imag = builtin->add_subcommand("imaginary-overlap", "Recorded but not decoherent histories");
  imag->add_option("--c", request.c, "Imaginary overlap magnitude in (0, 0.25)");
  add_emit(imag);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? rh::kExitOk : rh::kExitParse;
  }

  rh::ToleranceConfig tol;
  try {
    tol = resolve(opt);
  } catch (const rh::Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return rh::kExitParse;
  }

  std::ofstream file;
  if (opt.out) {
    file.open(*opt.out);
    if (!file) {
      std::cerr << "error: cannot write '" << *opt.out << "'\n";
      return rh::kExitParse;
    }
  }
  std::ostream& out = opt.out ? static_cast<std::ostream&>(file) : std::cout;
  rh::CommandContext ctx{out, std::cerr, tol, opt.format == "json" ? rh::OutputFormat::Json : rh::OutputFormat::Text};

  if (*validate) return rh::cmd_validate(path, ctx);
  if (*classify) return rh::cmd_classify(path, ctx);
  if (*probs) return rh::cmd_probs(path, conditional, ctx);
  if (*pattern) return rh::cmd_pattern(path, ctx);
  if (*matrix) {
    auto k = kind == "corr" ? rh::MatrixKind::Correlation
                            : (kind == "ep" ? rh::MatrixKind::Extended : rh::MatrixKind::Decoherence);
    return rh::cmd_matrix(path, k, ctx);
  }
  for (auto* sub : builtin->get_subcommands()) request.name = sub->get_name();
  request.two_slit.slit_u = slit_u;
  request.two_slit.slit_l = slit_l;
  request.two_slit.propagation_time = time;
  return rh::cmd_builtin(request, emit_path, ctx);
}
