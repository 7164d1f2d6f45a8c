// Copyright 2026 The Authors.
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


#include "subfair/submodular.h"

#include <cmath>

#include <gtest/gtest.h>

#include "subfair/oracles.h"
#include "test_util.h"

namespace subfair {
namespace {

using testing::CodeOf;

constexpr double kEps = 1e-4;

// Rows (1,0), (0,1), (1,1): S01 = 0, S02 = S12 = 1/sqrt(2).
SimilarityKernel ThreePointKernel() {
  EmbeddingMatrix e(3, 2);
  e << 1, 0,
       0, 1,
       1, 1;
  return CosineKernel(e, 1.0);
}

std::vector<int> Iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

TEST(FacilityLocationTest, HandComputedValues) {
  const SimilarityKernel k = ThreePointKernel();
  const BaseFunction f = BaseFunction::FacilityLocation(k, Iota(3));
  EXPECT_EQ(f.Eval(std::vector<int>{}), 0.0);
  EXPECT_DOUBLE_EQ(f.Eval(std::vector<int>{2}), 1.0 + std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(f.Eval(std::vector<int>{0, 1}), 2.0 + 1.0 / std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(f.Eval(std::vector<int>{0, 1, 2}), 3.0);
}

TEST(LogDetTest, HandComputedValues) {
  const SimilarityKernel k = ThreePointKernel();
  const BaseFunction f = BaseFunction::LogDeterminant(k, kEps);
  EXPECT_EQ(f.Eval(std::vector<int>{}), 0.0);
  EXPECT_NEAR(f.Eval(std::vector<int>{0, 1}), 2.0 * std::log1p(kEps), 1e-15);
  EXPECT_NEAR(f.Eval(std::vector<int>{0, 2}),
              std::log((1 + kEps) * (1 + kEps) - 0.5), 1e-14);
}

TEST(BaseFunctionTest, AgreesWithOraclesAndMarginalGains) {
  Rng rng(21);
  for (int trial = 0; trial < 20; ++trial) {
    const SimilarityKernel k =
        CosineKernel(oracle::RandomEmbeddings(10, 6, rng), 0.7);
    const BaseFunction fl = BaseFunction::FacilityLocation(k, Iota(10));
    const BaseFunction ld = BaseFunction::LogDeterminant(k, kEps);
    std::uniform_int_distribution<uint32_t> mask(0, (1u << 10) - 1);
    const std::vector<int> a = oracle::MaskToIds(mask(rng));
    EXPECT_NEAR(fl.Eval(a), oracle::FacilityLocation(k.entries, Iota(10), a),
                1e-12);
    EXPECT_NEAR(ld.Eval(a), oracle::LogDet(k.entries, a, kEps), 1e-8);
    for (int v = 0; v < 10; ++v) {
      if (std::find(a.begin(), a.end(), v) != a.end()) continue;
      const std::vector<int> av = SetUnion(a, std::vector<int>{v});
      EXPECT_NEAR(fl.MarginalGain(a, v), fl.Eval(av) - fl.Eval(a), 1e-12);
      EXPECT_NEAR(ld.MarginalGain(a, v), ld.Eval(av) - ld.Eval(a), 1e-8);
    }
  }
}

TEST(BaseFunctionTest, SubmodularOnNonNegativeKernels) {
  Rng rng(22);
  for (int trial = 0; trial < 5; ++trial) {
    const SimilarityKernel nonneg =
        CosineKernel(oracle::RandomEmbeddings(6, 3, rng, true));
    const SimilarityKernel signed_k =
        CosineKernel(oracle::RandomEmbeddings(6, 3, rng));
    const BaseFunction fl = BaseFunction::FacilityLocation(nonneg, Iota(6));
    const BaseFunction ld = BaseFunction::LogDeterminant(signed_k, kEps);
    EXPECT_LE(oracle::MaxSubmodularityViolation(
                  [&](std::span<const int> a) { return fl.Eval(a); }, 6),
              1e-9);
    EXPECT_LE(oracle::MaxSubmodularityViolation(
                  [&](std::span<const int> a) { return ld.Eval(a); }, 6),
              1e-9);
  }
}

// With f({}) = 0 and negative similarities, facility location can violate
// submodularity on disjoint sets: two opposite points give
// f({0}) + f({1}) = 0 < f({0, 1}) + f({}) = 2.
TEST(BaseFunctionTest, FacilityLocationOnSignedKernelCanViolate) {
  EmbeddingMatrix e(2, 1);
  e << 1, -1;
  const SimilarityKernel k = CosineKernel(e);
  const BaseFunction fl = BaseFunction::FacilityLocation(k, Iota(2));
  EXPECT_DOUBLE_EQ(oracle::MaxSubmodularityViolation(
                       [&](std::span<const int> a) { return fl.Eval(a); }, 2),
                   2.0);
}

TEST(InformationMeasuresTest, Identities) {
  Rng rng(23);
  const SimilarityKernel k =
      CosineKernel(oracle::RandomEmbeddings(9, 4, rng, true));
  const BaseFunction f = BaseFunction::FacilityLocation(k, Iota(9));
  const std::vector<int> a = {0, 3}, b = {4, 5, 8}, c = {1, 7}, none = {};
  EXPECT_NEAR(Scmi(f, a, b, none), Smi(f, a, b), 1e-12);
  EXPECT_NEAR(Scg(f, a, none), f.Eval(a), 1e-12);
  EXPECT_NEAR(Smi(f, a, b), Smi(f, b, a), 1e-12);
  const oracle::SetFn fn = [&](std::span<const int> x) { return f.Eval(x); };
  EXPECT_NEAR(Scmi(f, a, b, c), oracle::Scmi(fn, a, b, c), 1e-12);
  // Facility-location mutual information is a sum of pointwise minima.
  double expected = 0.0;
  for (int i = 0; i < 9; ++i) {
    double ma = -INFINITY, mb = -INFINITY;
    for (int j : a) ma = std::max(ma, k(i, j));
    for (int j : b) mb = std::max(mb, k(i, j));
    expected += std::min(ma, mb);
  }
  EXPECT_NEAR(Smi(f, a, b), expected, 1e-12);
}

TEST(GainOracleTest, FacilityLocationConditionalGains) {
  Rng rng(24);
  const SimilarityKernel k = CosineKernel(oracle::RandomEmbeddings(12, 4, rng));
  const std::vector<int> universe = Iota(12);
  const std::vector<int> q = {2, 9};
  const BaseFunction f = BaseFunction::FacilityLocation(k, universe);
  FacilityLocationGain g(k, universe, q);
  std::vector<int> a;
  for (int pick : {5, 0, 11}) {
    for (int v : {1, 3, 5, 6, 11}) {
      if (std::find(a.begin(), a.end(), v) != a.end()) continue;
      const std::vector<int> av = SetUnion(a, std::vector<int>{v});
      EXPECT_NEAR(g.Gain(v), Scg(f, av, q) - Scg(f, a, q), 1e-12);
    }
    g.Add(pick);
    a = SetUnion(a, std::vector<int>{pick});
  }
  g.Reset();
  EXPECT_NEAR(g.Gain(4), Scg(f, std::vector<int>{4}, q), 1e-12);
}

TEST(GainOracleTest, FacilityLocationMutualInformationGains) {
  Rng rng(25);
  const SimilarityKernel k = CosineKernel(oracle::RandomEmbeddings(12, 4, rng));
  const std::vector<int> universe = Iota(12);
  const std::vector<int> q = {0, 7, 8};
  const BaseFunction f = BaseFunction::FacilityLocation(k, universe);
  FacilityLocationMutualInformation g(k, universe, q);
  std::vector<int> a;
  for (int pick : {3, 10, 1}) {
    for (int v : {1, 2, 3, 4, 10}) {
      if (std::find(a.begin(), a.end(), v) != a.end()) continue;
      const std::vector<int> av = SetUnion(a, std::vector<int>{v});
      EXPECT_NEAR(g.Gain(v), Smi(f, av, q) - Smi(f, a, q), 1e-12);
    }
    g.Add(pick);
    a = SetUnion(a, std::vector<int>{pick});
  }
}

TEST(GainOracleTest, LogDetGainsAndResiduals) {
  Rng rng(26);
  const SimilarityKernel k = CosineKernel(oracle::RandomEmbeddings(10, 5, rng));
  const std::vector<int> candidates = {0, 2, 3, 5, 6, 9};
  LogDetGain g(k, kEps, candidates);
  std::vector<int> a;
  for (int pick : {6, 0, 9, 3}) {
    for (int v : candidates) {
      if (std::find(a.begin(), a.end(), v) != a.end()) continue;
      const std::vector<int> av = SetUnion(a, std::vector<int>{v});
      const double expected = oracle::LogDet(k.entries, av, kEps) -
                              oracle::LogDet(k.entries, a, kEps);
      EXPECT_NEAR(g.Gain(v), expected, 1e-8);
      EXPECT_NEAR(std::log(g.Residual(v)), expected, 1e-8);
    }
    g.Add(pick);
    a = SetUnion(a, std::vector<int>{pick});
  }
}

TEST(RegularizedLogDetTest, EmptyAndIndefinite) {
  EXPECT_EQ(RegularizedLogDet(Eigen::MatrixXd(0, 0), kEps), 0.0);
  Eigen::MatrixXd m(2, 2);
  m << 1, 3,
       3, 1;
  EXPECT_EQ(CodeOf([&] { RegularizedLogDet(m, kEps); }),
            ErrorCode::kNumericalDomain);
  EXPECT_NEAR(RegularizedLogDet(Eigen::MatrixXd::Identity(3, 3), 0.5),
              3 * std::log(1.5), 1e-15);
}

TEST(SetUnionTest, SortedAndDeduplicated) {
  EXPECT_EQ(SetUnion(std::vector<int>{5, 1, 3}, std::vector<int>{3, 2}),
            (std::vector<int>{1, 2, 3, 5}));
}

}  // namespace
}  // namespace subfair
