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


#include "subfair/loss.h"

#include <cmath>
#include <limits>
#include <numbers>

#include <gtest/gtest.h>

#include "subfair/oracles.h"
#include "subfair/submodular.h"
#include "test_util.h"

namespace subfair {
namespace {

using testing::CodeOf;

constexpr double kEps = 1e-4;

Eigen::RowVector2d Unit(double degrees) {
  const double r = degrees * std::numbers::pi / 180.0;
  return {std::cos(r), std::sin(r)};
}

Batch OnePerRole(double a, double p, double n) {
  Batch b;
  b.anchors = Unit(a);
  b.positives = Unit(p);
  b.negatives = Unit(n);
  return b;
}

std::vector<int> Iota(int n) {
  std::vector<int> v(n);
  for (int i = 0; i < n; ++i) v[i] = i;
  return v;
}

Eigen::MatrixXd StackedGrad(const LossOutput& out) {
  Eigen::MatrixXd g(out.grad_anchors.rows() + out.grad_positives.rows() +
                        out.grad_negatives.rows(),
                    out.grad_anchors.cols());
  g << out.grad_anchors, out.grad_positives, out.grad_negatives;
  return g;
}

TEST(FlcmiTest, HandComputedValue) {
  // Anchor 0 deg, positive 90 deg, negative 45 deg. Only the anchor row is
  // active: min(1, cos 45) - cos 90.
  const LossOutput out = FlcmiLoss(OnePerRole(0, 90, 45), 1.0);
  EXPECT_NEAR(out.value, 1.0 / (3.0 * std::sqrt(2.0)), 1e-15);
  ASSERT_EQ(out.terms.size(), 3u);
  EXPECT_TRUE(out.terms[0].active);
  EXPECT_FALSE(out.terms[1].active);
  EXPECT_EQ(out.terms[1].value, 0.0);
}

TEST(FlcmiTest, MatchesDefinitionalConditionalMutualInformation) {
  Rng rng(51);
  for (int trial = 0; trial < 30; ++trial) {
    const Batch b = oracle::RandomBatch(3, 2, 4, 5, rng);
    const double tau = 0.7;
    EmbeddingMatrix e(b.size(), 5);
    e << b.anchors, b.positives, b.negatives;
    const SimilarityKernel k = CosineKernel(e, tau);
    const std::vector<int> all = Iota(b.size());
    const oracle::SetFn f = [&](std::span<const int> x) {
      return oracle::FacilityLocation(k.entries, all, x);
    };
    const double def = oracle::Scmi(f, std::vector<int>{0, 1, 2},
                                    std::vector<int>{5, 6, 7, 8},
                                    std::vector<int>{3, 4});
    EXPECT_NEAR(FlcmiLoss(b, tau).value * 9.0, def, 1e-12);
  }
}

TEST(FlcmiTest, TemperatureDividesTheValue) {
  Rng rng(52);
  const Batch b = oracle::RandomBatch(4, 4, 4, 6, rng);
  EXPECT_NEAR(FlcmiLoss(b, 0.5).value, 2.0 * FlcmiLoss(b, 1.0).value, 1e-14);
}

TEST(LossTest, InvariantToRowScaling) {
  Rng rng(53);
  const Batch b = oracle::RandomBatch(3, 3, 3, 6, rng);
  Batch scaled = b;
  scaled.anchors *= 4.0;
  scaled.negatives.row(1) *= 0.1;
  for (LossKind kind : {LossKind::kFlcmi, LossKind::kLogDetCmi}) {
    EXPECT_NEAR(EvaluateLoss(kind, b, 0.7, kEps).value,
                EvaluateLoss(kind, scaled, 0.7, kEps).value, 1e-10);
  }
}

TEST(LogDetCmiTest, MatchesDefinitionalValue) {
  Rng rng(54);
  for (int trial = 0; trial < 30; ++trial) {
    const Batch b = oracle::RandomBatch(2, 3, 2, 8, rng);
    EmbeddingMatrix e(b.size(), 8);
    e << b.anchors, b.positives, b.negatives;
    const SimilarityKernel k = CosineKernel(e, 0.7);
    const oracle::SetFn f = [&](std::span<const int> x) {
      return oracle::LogDet(k.entries, x, kEps);
    };
    const double def = oracle::Scmi(f, std::vector<int>{0, 1},
                                    std::vector<int>{5, 6},
                                    std::vector<int>{2, 3, 4});
    EXPECT_NEAR(LogDetCmiLoss(b, 0.7, kEps).value * 6.0, def, 1e-7);
    const LogDetCmiForms forms = EvaluateLogDetCmiForms(b, 0.7, kEps);
    EXPECT_NEAR(forms.definitional, def, 1e-7);
    EXPECT_NEAR(forms.ratio_ap_n, def, 1e-6);
  }
}

TEST(LossGradientTest, MatchesOracleFiniteDifferences) {
  Rng rng(55);
  for (LossKind kind : {LossKind::kFlcmi, LossKind::kLogDetCmi}) {
    const LossFunction loss = [kind](const Batch& b) {
      return EvaluateLoss(kind, b, 0.7, kEps);
    };
    int checked = 0;
    for (int attempt = 0; attempt < 100 && checked < 5; ++attempt) {
      const Batch b = oracle::RandomBatch(3, 3, 3, 6, rng);
      const GradCheckReport rep = GradCheck(loss, b, 1e-5, 1e-4);
      if (rep.tie_detected) continue;
      ++checked;
      EXPECT_TRUE(rep.passed) << rep.max_rel_error;
      const Eigen::MatrixXd fd = oracle::FiniteDifferenceGradient(loss, b, 1e-5);
      const Eigen::MatrixXd g = StackedGrad(loss(b));
      EXPECT_LT((fd - g).cwiseAbs().maxCoeff(), 1e-6);
    }
    EXPECT_EQ(checked, 5);
  }
}

TEST(LossTest, RejectsNonFiniteEmbeddings) {
  Batch b = OnePerRole(0, 90, 45);
  b.positives(0, 0) = std::numeric_limits<double>::infinity();
  EXPECT_EQ(CodeOf([&] { FlcmiLoss(b, 1.0); }), ErrorCode::kNonFinite);
  EXPECT_EQ(CodeOf([&] { LogDetCmiLoss(b, 1.0, kEps); }), ErrorCode::kNonFinite);
}

TEST(LossTest, RejectsNegativeEpsilon) {
  EXPECT_EQ(CodeOf([] { LogDetCmiLoss(OnePerRole(0, 90, 45), 1.0, -1.0); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace subfair
