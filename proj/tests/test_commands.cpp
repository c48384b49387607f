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

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rh/commands.hpp"
#include "rh/model_file.hpp"

namespace {

using namespace rh;
namespace fs = std::filesystem;

class Commands : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("rhist_cmd_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) const { return (dir_ / name).string(); }

  std::string builtin(BuiltinRequest r, const std::string& name) {
    std::string p = path(name);
    reset();
    EXPECT_EQ(cmd_builtin(r, p, ctx_), kExitOk) << err_.str();
    return p;
  }

  std::string write(const std::string& name, const std::string& text) {
    std::string p = path(name);
    std::ofstream(p) << text;
    return p;
  }

  void reset(ToleranceConfig tol = {}, OutputFormat f = OutputFormat::Text) {
    out_.str("");
    err_.str("");
    ctx_.tol = tol;
    ctx_.format = f;
  }

  std::vector<std::vector<std::string>> csv() const {
    std::vector<std::vector<std::string>> rows;
    std::istringstream in(out_.str());
    std::string line;
    while (std::getline(in, line)) {
      std::vector<std::string> cells;
      std::istringstream ls(line);
      std::string cell;
      while (std::getline(ls, cell, ',')) cells.push_back(cell);
      rows.push_back(cells);
    }
    return rows;
  }

  fs::path dir_;
  std::ostringstream out_, err_;
  CommandContext ctx_{out_, err_};
};

BuiltinRequest named(const std::string& n) {
  BuiltinRequest r;
  r.name = n;
  return r;
}

const char* kBadProjector = R"({"dim": 2, "state": [[1,0],[0,0]],
  "families": [{"name": "z", "projectors": [{"matrix": [[[0.5,0],[0,0]],[[0,0],[0.5,0]]]}]}],
  "schedule": [{"family": "z", "time": 0}]})";

const char* kZeroEvidence = R"({"dim": 2, "state": [[1,0],[0,0]],
  "families": [{"name": "z", "labels": ["up", "down"], "projectors": [{"basis": [0]}, {"basis": [1]}]}],
  "schedule": [{"family": "z", "time": 0}, {"family": "z", "time": 1}]})";

TEST_F(Commands, ValidateExitCodes) {
  auto tb = builtin(named("three-box"), "tb.json");
  reset();
  EXPECT_EQ(cmd_validate(tb, ctx_), kExitOk) << err_.str();
  EXPECT_NE(out_.str().find("expect retrodict[Phi][A]: true"), std::string::npos) << out_.str();

  reset();
  EXPECT_EQ(cmd_validate(write("bad.json", kBadProjector), ctx_), kExitDomain);
  EXPECT_NE(err_.str().find("NotIdempotent"), std::string::npos) << err_.str();

  reset();
  EXPECT_EQ(cmd_validate(write("broken.json", "{\"dim\": "), ctx_), kExitParse);
  reset();
  EXPECT_EQ(cmd_validate(path("missing.json"), ctx_), kExitParse);
}

TEST_F(Commands, ClassifyReports) {
  reset();
  EXPECT_EQ(cmd_classify(builtin(named("three-box"), "a.json"), ctx_), kExitOk);
  EXPECT_NE(out_.str().find("medium_decoherent: true"), std::string::npos) << out_.str();

  reset();
  EXPECT_EQ(cmd_classify(builtin(named("qubit-trine"), "t.json"), ctx_), kExitOk);
  EXPECT_NE(out_.str().find("ep_in_range: false"), std::string::npos);
  EXPECT_NE(out_.str().find("worst ep[a+/b+] = -0.12"), std::string::npos) << out_.str();

  std::string io = builtin(named("imaginary-overlap"), "i.json");
  ToleranceConfig eps;
  eps.rec = eps.dec = 0.02;
  reset(eps, OutputFormat::Json);
  EXPECT_EQ(cmd_classify(io, ctx_), kExitOk);
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_TRUE(j["recorded"]["value"].get<bool>());
  EXPECT_FALSE(j["medium_decoherent"]["value"].get<bool>());
}

TEST_F(Commands, ProbsConditional) {
  std::string tb = builtin(named("three-box"), "a.json");
  reset({}, OutputFormat::Json);
  EXPECT_EQ(cmd_probs(tb, std::string("present:Phi"), ctx_), kExitOk) << err_.str();
  auto j = nlohmann::json::parse(out_.str());
  EXPECT_EQ(j["probabilities"][0]["history"], "A");
  EXPECT_NEAR(j["probabilities"][0]["value"].get<double>(), 1.0, 1e-12);
  EXPECT_NEAR(j["probabilities"][1]["value"].get<double>(), 0.0, 1e-12);

  reset({}, OutputFormat::Json);
  EXPECT_EQ(cmd_probs(tb, std::string("present:0"), ctx_), kExitOk);

  reset({}, OutputFormat::Json);
  EXPECT_EQ(cmd_probs(tb, std::nullopt, ctx_), kExitOk);
  j = nlohmann::json::parse(out_.str());
  EXPECT_NEAR(j["sum"].get<double>(), 1.0, 1e-12);

  reset();
  EXPECT_EQ(cmd_probs(write("z.json", kZeroEvidence), std::string("z:down"), ctx_), kExitDomain);
  EXPECT_NE(err_.str().find("ZeroEvidence"), std::string::npos) << err_.str();

  reset();
  EXPECT_EQ(cmd_probs(tb, std::string("box_A:A"), ctx_), kExitDomain);

  BuiltinRequest fine = named("three-box");
  fine.variant = "fine";
  reset();
  EXPECT_EQ(cmd_probs(builtin(fine, "f.json"), std::nullopt, ctx_), kExitDomain);
  EXPECT_NE(err_.str().find("NotRecorded"), std::string::npos);
}

TEST_F(Commands, MatrixCsv) {
  BuiltinRequest fine = named("three-box");
  fine.variant = "fine";
  std::string f = builtin(fine, "f.json");
  reset();
  EXPECT_EQ(cmd_matrix(f, MatrixKind::Decoherence, ctx_), kExitOk);
  auto rows = csv();
  ASSERT_EQ(rows.size(), 65u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"alpha", "beta", "re", "im"}));
  EXPECT_EQ(rows[1][0], "0:0:0");
  EXPECT_EQ(rows[2][1], "0:0:1");
  bool found = false;
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][0] != rows[i][1] && std::abs(std::abs(std::stod(rows[i][2])) - 1.0 / 9.0) < 1e-12) found = true;
  EXPECT_TRUE(found);

  reset();
  EXPECT_EQ(cmd_matrix(builtin(named("qubit-trine"), "t.json"), MatrixKind::Extended, ctx_), kExitOk);
  rows = csv();
  EXPECT_EQ(rows[0], (std::vector<std::string>{"alpha", "value"}));
  EXPECT_NEAR(std::stod(rows[1][1]), -0.125, 1e-12);

  reset();
  EXPECT_EQ(cmd_matrix(f, MatrixKind::Correlation, ctx_), kExitDomain);

  reset();
  EXPECT_EQ(cmd_matrix(builtin(named("spin-env"), "s.json"), MatrixKind::Correlation, ctx_), kExitOk);
  EXPECT_EQ(csv().size(), 17u);
}

TEST_F(Commands, BuiltinParameters) {
  BuiltinRequest s = named("spin-env");
  s.n_env = 4;
  s.theta = 1.5708;
  std::string p = builtin(s, "s.json");
  reset();
  EXPECT_EQ(cmd_matrix(p, MatrixKind::Decoherence, ctx_), kExitOk);
  double worst = 0.0;
  auto rows = csv();
  for (std::size_t i = 1; i < rows.size(); ++i)
    if (rows[i][0] != rows[i][1]) worst = std::max(worst, std::hypot(std::stod(rows[i][2]), std::stod(rows[i][3])));
  EXPECT_NEAR(worst, 0.25 * std::pow(std::cos(0.7854), 4), 1e-10);

  BuiltinRequest slit = named("two-slit");
  slit.two_slit.with_record = true;
  reset();
  EXPECT_EQ(cmd_classify(builtin(slit, "r.json"), ctx_), kExitOk);
  EXPECT_NE(out_.str().find("medium_decoherent: true"), std::string::npos);

  reset();
  EXPECT_EQ(cmd_builtin(named("nope"), std::nullopt, ctx_), kExitDomain);
  BuiltinRequest io = named("imaginary-overlap");
  io.c = 0.3;
  reset();
  EXPECT_EQ(cmd_builtin(io, std::nullopt, ctx_), kExitDomain);

  reset();
  EXPECT_EQ(cmd_builtin(named("qubit-trine"), std::nullopt, ctx_), kExitOk);
  EXPECT_EQ(out_.str(), export_model(qubit_trine_description()));
}

TEST_F(Commands, Pattern) {
  std::string p = builtin(named("two-slit"), "p.json");
  reset();
  EXPECT_EQ(cmd_pattern(p, ctx_), kExitOk);
  auto rows = csv();
  ASSERT_EQ(rows.size(), 65u);
  EXPECT_EQ(rows[0], (std::vector<std::string>{"bin", "intensity", "ep_upper", "ep_lower"}));
  double total = 0.0;
  for (std::size_t i = 1; i < rows.size(); ++i) total += std::stod(rows[i][1]);
  EXPECT_NEAR(total, 1.0, 1e-10);
  std::string metrics = err_.str();
  double ratio = std::stod(metrics.substr(metrics.find("ratio=") + 6));
  EXPECT_GT(ratio, 10.0);

  BuiltinRequest rec = named("two-slit");
  rec.two_slit.with_record = true;
  std::string r = builtin(rec, "r.json");
  reset();
  EXPECT_EQ(cmd_pattern(r, ctx_), kExitOk);
  metrics = err_.str();
  EXPECT_LE(std::stod(metrics.substr(metrics.find("visibility=") + 11)), 1e-10);

  reset();
  EXPECT_EQ(cmd_pattern(builtin(named("qubit-trine"), "t.json"), ctx_), kExitDomain);
}

}  // namespace
