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


#include "subfair/model.h"

#include <cmath>

#include <gtest/gtest.h>

#include "subfair/oracles.h"
#include "test_util.h"

namespace subfair {
namespace {

using testing::CodeOf;

TEST(DenseLayerTest, HandComputedForward) {
  DenseLayer layer;
  layer.w.resize(2, 2);
  layer.w << 1, 2,
             -1, 0;
  layer.b.resize(2);
  layer.b << 0.5, -3;
  Eigen::MatrixXd x(1, 2);
  x << 1, 1;
  const Eigen::MatrixXd y = layer.Forward(x, false);
  EXPECT_EQ(y(0, 0), 3.5);
  EXPECT_EQ(y(0, 1), -4.0);
  EXPECT_EQ(layer.Forward(x, true)(0, 1), 0.0);
}

TEST(DenseLayerTest, XavierRangeAndZeroBias) {
  Rng rng(61);
  const DenseLayer layer = InitDense(10, 6, rng);
  const double r = std::sqrt(6.0 / 16.0);
  EXPECT_LE(layer.w.cwiseAbs().maxCoeff(), r);
  EXPECT_TRUE(layer.b.isZero());
}

// Sum of grad_out .* ForwardRaw(x) as a function of one parameter.
double Probe(const Encoder& e, const Eigen::MatrixXd& x,
             const Eigen::MatrixXd& g) {
  return (e.ForwardRaw(x).array() * g.array()).sum();
}

void CheckEncoderGradient(EncoderKind kind) {
  Rng rng(62);
  const Encoder encoder = Encoder::Create(kind, 4, 5, 3, rng);
  const Eigen::MatrixXd x = oracle::RandomEmbeddings(6, 4, rng);
  const Eigen::MatrixXd g = oracle::RandomEmbeddings(6, 3, rng);
  const std::vector<DenseLayer> grads = encoder.Backward(x, g);
  ASSERT_EQ(grads.size(), encoder.layers().size());
  const double h = 1e-6;
  for (size_t l = 0; l < grads.size(); ++l) {
    for (Eigen::Index i = 0; i < grads[l].w.size(); ++i) {
      Encoder plus = encoder, minus = encoder;
      plus.mutable_layers()[l].w.data()[i] += h;
      minus.mutable_layers()[l].w.data()[i] -= h;
      const double fd = (Probe(plus, x, g) - Probe(minus, x, g)) / (2 * h);
      EXPECT_NEAR(grads[l].w.data()[i], fd, 1e-6);
    }
    for (Eigen::Index i = 0; i < grads[l].b.size(); ++i) {
      Encoder plus = encoder, minus = encoder;
      plus.mutable_layers()[l].b(i) += h;
      minus.mutable_layers()[l].b(i) -= h;
      const double fd = (Probe(plus, x, g) - Probe(minus, x, g)) / (2 * h);
      EXPECT_NEAR(grads[l].b(i), fd, 1e-6);
    }
  }
}

TEST(EncoderTest, LinearBackwardMatchesFiniteDifferences) {
  CheckEncoderGradient(EncoderKind::kLinear);
}

TEST(EncoderTest, MlpBackwardMatchesFiniteDifferences) {
  CheckEncoderGradient(EncoderKind::kMlp1);
}

TEST(EncoderTest, IdentityPassesThroughAndEncodeNormalizes) {
  Rng rng(63);
  const Eigen::MatrixXd x = oracle::RandomEmbeddings(5, 3, rng);
  const Encoder id = Encoder::Create(EncoderKind::kIdentity, 3, 0, 0, rng);
  EXPECT_EQ(id.ForwardRaw(x), x);
  EXPECT_EQ(id.output_dim(), 3);
  const Encoder mlp = Encoder::Create(EncoderKind::kMlp1, 3, 8, 4, rng);
  const EmbeddingMatrix e = mlp.Encode(x);
  EXPECT_EQ(e.cols(), 4);
  for (int i = 0; i < 5; ++i) EXPECT_NEAR(e.row(i).norm(), 1.0, 1e-15);
}

TEST(EncoderTest, StepMovesAgainstTheGradientAndChangesFingerprint) {
  Rng rng(64);
  Encoder e = Encoder::Create(EncoderKind::kLinear, 2, 0, 2, rng);
  const uint64_t before = e.Fingerprint();
  const Eigen::MatrixXd w0 = e.layers()[0].w;
  DenseLayer g;
  g.w = Eigen::MatrixXd::Ones(2, 2);
  g.b = Eigen::VectorXd::Ones(2);
  e.Step({g}, 0.25);
  EXPECT_EQ(e.layers()[0].w, (w0.array() - 0.25).matrix());
  EXPECT_NE(e.Fingerprint(), before);
}

TEST(EncoderTest, RejectsWrongInputWidthAndKinds) {
  Rng rng(65);
  const Encoder e = Encoder::Create(EncoderKind::kLinear, 3, 0, 2, rng);
  EXPECT_EQ(CodeOf([&] { e.ForwardRaw(Eigen::MatrixXd::Ones(2, 4)); }),
            ErrorCode::kDimensionMismatch);
  EXPECT_EQ(CodeOf([] { ParseEncoderKind("resnet"); }),
            ErrorCode::kInvalidArgument);
  EXPECT_EQ(ParseEncoderKind(EncoderKindName(EncoderKind::kMlp1)),
            EncoderKind::kMlp1);
}

double MeanCrossEntropy(const Classifier& c, const Eigen::MatrixXd& x,
                        const std::vector<int>& cls) {
  const Eigen::MatrixXd logits = c.Logits(x);
  double total = 0.0;
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    double z = 0.0;
    for (Eigen::Index k = 0; k < logits.cols(); ++k) z += std::exp(logits(r, k));
    total += std::log(z) - logits(r, cls[r]);
  }
  return total / static_cast<double>(logits.rows());
}

TEST(ClassifierTest, TrainStepIsAGradientStep) {
  Rng rng(66);
  const Classifier start = Classifier::Create(3, 4, {0, 1, 2}, rng);
  const Eigen::MatrixXd x = oracle::RandomEmbeddings(5, 3, rng);
  const std::vector<int> cls = {0, 2, 1, 1, 0};
  Classifier stepped = start;
  const double lr = 0.1;
  EXPECT_NEAR(stepped.TrainStep(x, cls, lr), MeanCrossEntropy(start, x, cls),
              1e-14);
  // (before - after) / lr must equal the finite-difference gradient.
  const double h = 1e-6;
  for (Eigen::Index i = 0; i < start.output().w.size(); ++i) {
    DenseLayer plus = start.output(), minus = start.output();
    plus.w.data()[i] += h;
    minus.w.data()[i] -= h;
    const double fd =
        (MeanCrossEntropy(Classifier::FromLayers(start.hidden(), plus, {0, 1, 2}), x, cls) -
         MeanCrossEntropy(Classifier::FromLayers(start.hidden(), minus, {0, 1, 2}), x, cls)) /
        (2 * h);
    EXPECT_NEAR((start.output().w.data()[i] - stepped.output().w.data()[i]) / lr,
                fd, 1e-7);
  }
  for (Eigen::Index i = 0; i < start.hidden().w.size(); ++i) {
    DenseLayer plus = start.hidden(), minus = start.hidden();
    plus.w.data()[i] += h;
    minus.w.data()[i] -= h;
    const double fd =
        (MeanCrossEntropy(Classifier::FromLayers(plus, start.output(), {0, 1, 2}), x, cls) -
         MeanCrossEntropy(Classifier::FromLayers(minus, start.output(), {0, 1, 2}), x, cls)) /
        (2 * h);
    EXPECT_NEAR((start.hidden().w.data()[i] - stepped.hidden().w.data()[i]) / lr,
                fd, 1e-7);
  }
}

TEST(ClassifierTest, ZeroOutputGivesUniformLossAndSmallestLabelTies) {
  Rng rng(67);
  DenseLayer hidden = InitDense(2, 3, rng);
  DenseLayer output;
  output.w = Eigen::MatrixXd::Zero(2, 3);
  output.b = Eigen::VectorXd::Zero(2);
  Classifier c = Classifier::FromLayers(hidden, output, {4, 9});
  const Eigen::MatrixXd x = Eigen::MatrixXd::Ones(3, 2);
  EXPECT_EQ(c.Predict(x), (std::vector<int>{4, 4, 4}));
  EXPECT_NEAR(c.TrainStep(x, std::vector<int>{0, 1, 1}, 0.1), std::log(2.0), 1e-15);
  EXPECT_EQ(c.ClassIndex(9), 1);
}

TEST(ClassifierTest, LearnsASeparableProblem) {
  Rng rng(68);
  Classifier c = Classifier::Create(2, 8, {0, 1}, rng);
  Eigen::MatrixXd x(40, 2);
  std::vector<int> cls(40);
  std::normal_distribution<double> g(0.0, 0.3);
  for (int i = 0; i < 40; ++i) {
    cls[i] = i % 2;
    x(i, 0) = (cls[i] ? 2.0 : -2.0) + g(rng);
    x(i, 1) = g(rng);
  }
  double first = 0.0, last = 0.0;
  for (int step = 0; step < 200; ++step) {
    last = c.TrainStep(x, cls, 0.2);
    if (step == 0) first = last;
  }
  EXPECT_LT(last, 0.1 * first);
  EXPECT_EQ(c.Predict(x), cls);
}

TEST(ClassifierTest, NeedsTwoLabels) {
  Rng rng(69);
  EXPECT_EQ(CodeOf([&] { Classifier::Create(2, 3, {1, 1}, rng); }),
            ErrorCode::kInvalidArgument);
}

}  // namespace
}  // namespace subfair
