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

#include <cmath>
#include <numbers>

#include "rh/models.hpp"
#include "test_util.hpp"

namespace {

using namespace rh;

void expect_verified(const ModelBundle& b) {
  for (const auto& r : verify(b)) EXPECT_TRUE(r.pass) << b.name << " " << r.expectation.quantity << " = " << r.actual << " " << r.error;
}

TEST(Models, AllExpectationsHold) {
  expect_verified(three_box(ThreeBoxVariant::A_set));
  expect_verified(three_box(ThreeBoxVariant::B_set));
  expect_verified(three_box(ThreeBoxVariant::fine_AB));
  expect_verified(qubit_trine());
  expect_verified(spin_environment(4, std::numbers::pi / 2));
  expect_verified(imaginary_overlap(0.1));
  expect_verified(two_slit({}));
  TwoSlitParams p;
  p.with_record = true;
  expect_verified(two_slit(p));
}

TEST(Models, VerifyReportsFailures) {
  auto b = qubit_trine();
  b.expectations = {{"ep[a+/b+]", "eq", 0.5, 1e-12, ""}, {"nonsense", "eq", 0.0, 0.0, ""}};
  auto r = verify(b);
  EXPECT_FALSE(r[0].pass);
  EXPECT_FALSE(r[1].pass);
  EXPECT_FALSE(r[1].error.empty());
}

TEST(ThreeBox, FineSetDoesNotDecohere) {
  auto b = three_box(ThreeBoxVariant::fine_AB);
  EXPECT_FALSE(is_medium_decoherent(decoherence_matrix(b.state, b.set)).holds);
  EXPECT_EQ(b.set.count(), 8u);
}

TEST(TwoSlit, Errors) {
  TwoSlitParams p;
  p.bins = 6;
  EXPECT_ERRC(two_slit(p), Errc::ParamOutOfRange);
  p = {};
  p.slit_u = 1;
  EXPECT_ERRC(two_slit(p), Errc::PacketOverflow);
  p = {};
  p.slit_u = 30;
  p.slit_l = 33;
  EXPECT_ERRC(two_slit(p), Errc::PacketOverflow);
  p = {};
  p.packet_width = 0.0;
  EXPECT_ERRC(two_slit(p), Errc::ParamOutOfRange);
}

TEST(TwoSlit, ElseCarriesNoAmplitude) {
  auto b = two_slit({});
  auto ep = extended_probabilities(b.state, b.set);
  double sum_else = 0.0;
  for (std::size_t j = 0; j < 64; ++j) sum_else += std::abs(ep.values[2 * 64 + j]);
  EXPECT_LT(sum_else, 1e-15);
  EXPECT_NEAR(ep.sum(), 1.0, 1e-10);
}

TEST(TwoSlit, RecordRemovesFringes) {
  TwoSlitParams p;
  p.with_record = true;
  auto b = two_slit(p);
  EXPECT_EQ(b.set.dim(), 128u);
  auto f = fringe_metrics(screen_pattern(b.state, b.set));
  EXPECT_LE(f.visibility, 1e-10);
  EXPECT_NEAR(f.total, 1.0, 1e-10);
  auto s = strong_record_check(b.state, b.set, *b.records, ToleranceConfig{1e-12, 1e-12, 1e-10, 1e-10, 1e-10});
  EXPECT_TRUE(s.holds) << s.worst_residual;
}

TEST(TwoSlit, OtherSizesStillInterfere) {
  TwoSlitParams small;
  small.bins = 16;
  EXPECT_ERRC(two_slit(small), Errc::PacketOverflow);
  for (std::size_t m : {32u, 48u, 96u}) {
    TwoSlitParams p;
    p.bins = m;
    auto b = two_slit(p);
    auto f = fringe_metrics(screen_pattern(b.state, b.set));
    EXPECT_GT(f.visibility, 0.1) << m;
    EXPECT_NEAR(f.total, 1.0, 1e-10);
  }
}

TEST(QubitTrine, Table) {
  auto b = qubit_trine();
  auto ep = extended_probabilities(b.state, b.set);
  EXPECT_EQ(ep.labels[0], "a+/b+");
  EXPECT_NEAR(ep.values[0], -0.125, 1e-12);
  EXPECT_NEAR(ep.sum(), 1.0, 1e-12);
  EXPECT_TRUE(ep.extended);
}

TEST(SpinEnvironment, Guards) {
  EXPECT_ERRC(spin_environment(13, 1.0), Errc::DimensionGuard);
  EXPECT_ERRC(spin_environment(0, 1.0), Errc::ParamOutOfRange);
  EXPECT_NO_THROW(spin_environment(12, 1.0));
}

TEST(SpinEnvironment, LimitingCases) {
  auto none = spin_environment(3, 0.0);
  EXPECT_NEAR(max_off_diagonal(decoherence_matrix(none.state, none.set)).magnitude, 0.25, 1e-12);
  auto full = spin_environment(1, std::numbers::pi);
  EXPECT_NEAR(max_off_diagonal(decoherence_matrix(full.state, full.set)).magnitude, 0.0, 1e-12);
  auto strong = strong_record_check(full.state, full.set, *full.records, ToleranceConfig{1e-12, 1e-12, 1e-10, 1e-10, 1e-10});
  EXPECT_TRUE(strong.holds) << strong.worst_residual;
  auto corr = correlation_matrix(full.state, full.set, *full.records);
  EXPECT_NEAR(max_off_diagonal(corr).magnitude, 0.0, 1e-12);
}

TEST(SpinEnvironment, RecordQualityImprovesWithN) {
  double previous = 1.0;
  for (std::size_t n = 1; n <= 10; ++n) {
    auto b = spin_environment(n, std::numbers::pi / 4);
    double r = max_off_diagonal(correlation_matrix(b.state, b.set, *b.records)).magnitude;
    EXPECT_LE(r, previous + 1e-14) << n;
    previous = r;
  }
}

TEST(ImaginaryOverlap, Range) {
  EXPECT_ERRC(imaginary_overlap(0.0), Errc::ParamOutOfRange);
  EXPECT_ERRC(imaginary_overlap(0.25), Errc::ParamOutOfRange);
  EXPECT_ERRC(imaginary_overlap(-0.1), Errc::ParamOutOfRange);
}

TEST(ImaginaryOverlap, SmallCLimit) {
  auto b = imaginary_overlap(1e-6);
  EXPECT_NEAR(max_off_diagonal(decoherence_matrix(b.state, b.set)).magnitude, 1e-6, 1e-12);
  EXPECT_LT(max_off_diagonal(correlation_matrix(b.state, b.set, *b.records)).magnitude, 1e-11);
}

TEST(ImaginaryOverlap, RecordsAreComplete) {
  auto b = imaginary_overlap(0.2);
  Matrix sum = Matrix::Zero(4, 4);
  for (const auto& p : b.records->family().members()) sum += p.entries();
  EXPECT_NEAR(max_abs(sum - Matrix::Identity(4, 4)), 0.0, 1e-12);
  auto d = decoherence_matrix(b.state, b.set);
  EXPECT_NEAR(d.entries(0, 2).real(), 0.0, 1e-14);
  for (Eigen::Index k = 0; k < 4; ++k) EXPECT_NEAR(d.entries(k, k).real(), 0.25, 1e-14);
}

TEST(Instantiate, UnknownFamily) {
  auto d = qubit_trine_description();
  d.schedule[0].family = "missing";
  EXPECT_ERRC(instantiate(d), Errc::IndexOutOfRange);
}

TEST(Instantiate, NamesTheOffendingFamily) {
  auto d = qubit_trine_description();
  d.families[0].projectors[0].kind = ProjectorSpec::Kind::Matrix;
  d.families[0].projectors[0].matrix = 0.5 * Matrix::Identity(2, 2);
  try {
    instantiate(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NotIdempotent);
    EXPECT_NE(std::string(e.what()).find("family 'a' member 0"), std::string::npos);
  }
}

}  // namespace
