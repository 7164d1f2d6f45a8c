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


#include "subfair/kernel.h"

#include <cmath>
#include <limits>

#include <gtest/gtest.h>

#include "subfair/oracles.h"
#include "test_util.h"

namespace subfair {
namespace {

using testing::CodeOf;

TEST(KernelTest, HandComputedCosines) {
  EmbeddingMatrix e(4, 2);
  e << 3, 4,
       4, 3,
       -4, 3,
       -3, -4;
  const SimilarityKernel k = CosineKernel(e, 1.0);
  EXPECT_DOUBLE_EQ(k(0, 1), 24.0 / 25.0);
  EXPECT_NEAR(k(0, 2), 0.0, 1e-16);
  EXPECT_DOUBLE_EQ(k(0, 3), -1.0);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(k(i, i), 1.0);
}

TEST(KernelTest, TemperatureScalesEveryEntry) {
  EmbeddingMatrix e(2, 2);
  e << 3, 4,
       4, 3;
  const SimilarityKernel k = CosineKernel(e, 0.5);
  EXPECT_EQ(k.temperature, 0.5);
  EXPECT_EQ(k(0, 0), 2.0);
  EXPECT_DOUBLE_EQ(k(0, 1), 1.92);
}

TEST(KernelTest, SymmetricBoundedAndScaleInvariant) {
  Rng rng(11);
  const EmbeddingMatrix e = oracle::RandomEmbeddings(30, 5, rng);
  EmbeddingMatrix scaled = e;
  std::uniform_real_distribution<double> factor(0.01, 100.0);
  for (int i = 0; i < scaled.rows(); ++i) scaled.row(i) *= factor(rng);
  const SimilarityKernel k = CosineKernel(e, 0.7);
  const SimilarityKernel ks = CosineKernel(scaled, 0.7);
  for (int i = 0; i < 30; ++i) {
    for (int j = 0; j < 30; ++j) {
      EXPECT_EQ(k(i, j), k(j, i));
      EXPECT_LE(std::abs(k(i, j)), 1.0 / 0.7);
      EXPECT_NEAR(k(i, j), ks(i, j), 1e-12);
    }
  }
}

TEST(KernelTest, RejectsBadInput) {
  EmbeddingMatrix zero = EmbeddingMatrix::Ones(3, 2);
  zero.row(1).setZero();
  EXPECT_EQ(CodeOf([&] { CosineKernel(zero); }), ErrorCode::kNumericalDomain);
  EmbeddingMatrix nan = EmbeddingMatrix::Ones(3, 2);
  nan(2, 0) = std::numeric_limits<double>::quiet_NaN();
  EXPECT_EQ(CodeOf([&] { CosineKernel(nan); }), ErrorCode::kNonFinite);
  EXPECT_EQ(CodeOf([] { CosineKernel(EmbeddingMatrix::Ones(2, 2), 0.0); }),
            ErrorCode::kInvalidArgument);
}

TEST(KernelTest, NormalizeRowsGivesUnitRows) {
  Rng rng(12);
  const EmbeddingMatrix u = NormalizeRows(oracle::RandomEmbeddings(10, 7, rng));
  for (int i = 0; i < u.rows(); ++i) EXPECT_NEAR(u.row(i).norm(), 1.0, 1e-15);
}

TEST(KernelTest, SubKernelPicksTheBlock) {
  Rng rng(13);
  const SimilarityKernel k = CosineKernel(oracle::RandomEmbeddings(6, 3, rng));
  const std::vector<int> rows = {4, 1};
  const std::vector<int> cols = {0, 5, 2};
  const Eigen::MatrixXd b = SubKernel(k, rows, cols);
  ASSERT_EQ(b.rows(), 2);
  ASSERT_EQ(b.cols(), 3);
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 3; ++c) EXPECT_EQ(b(r, c), k(rows[r], cols[c]));
  }
}

TEST(GaussianKernelEmbeddingTest, CosineKernelIsTheGaussianKernel) {
  Rng rng(14);
  const Eigen::MatrixXd x = oracle::RandomEmbeddings(40, 2, rng) * 3.0;
  const double bandwidth = 1.3;
  const SimilarityKernel k =
      CosineKernel(GaussianKernelEmbedding(x, bandwidth), 1.0);
  for (int i = 0; i < 40; ++i) {
    for (int j = 0; j < 40; ++j) {
      const double d2 = (x.row(i) - x.row(j)).squaredNorm();
      EXPECT_NEAR(k(i, j), std::exp(-d2 / (2 * bandwidth * bandwidth)), 1e-9);
    }
  }
}

TEST(GaussianKernelEmbeddingTest, RejectsBadBandwidth) {
  EXPECT_EQ(CodeOf([] { GaussianKernelEmbedding(Eigen::MatrixXd::Ones(3, 2), 0.0); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace subfair
