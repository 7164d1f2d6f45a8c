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

// Two-stage training. Stage 1 fits the encoder on mined batches with a
// conditional-mutual-information loss; stage 2 freezes it and fits the
// classification head with cross-entropy.

#ifndef SUBFAIR_TRAIN_H_
#define SUBFAIR_TRAIN_H_

#include <cstdint>
#include <string>
#include <vector>

#include "subfair/loss.h"
#include "subfair/mine.h"
#include "subfair/model.h"
#include "subfair/pool.h"

namespace subfair {

std::string LossKindName(LossKind kind);
LossKind ParseLossKind(const std::string& name);

struct TrainConfig {
  int k = 16;
  int epochs1 = 20;
  int epochs2 = 10;
  double lr1 = 0.4;
  double lr2 = 0.1;
  double temperature = 0.7;
  LossKind loss = LossKind::kFlcmi;
  MinerKind miner = MinerKind::kShasam;
  double fraction = 0.2;
  uint64_t seed = 0;
  double epsilon = kDefaultLogDetEpsilon;
  EncoderKind encoder = EncoderKind::kMlp1;
  int hidden_dim = 64;
  int embed_dim = 32;
  // > 0 turns every mined item into two Gaussian-noise views.
  double view_noise = 0.0;
  int classifier_hidden = 32;
  int batch_size = 32;

  // Throws kInvalidArgument on non-positive sizes/rates, a fraction outside
  // (0, 1] or a negative epsilon. Zero epochs are allowed.
  void Validate() const;
};

struct TraceRow {
  int epoch = 0;
  int iteration = 0;  // within the epoch
  double lr = 0.0;
  double loss = 0.0;
  Cell pair{-1, -1};
  bool short_batch = false;
};

struct Stage1Result {
  Encoder encoder;
  std::vector<TraceRow> trace;
};

// lr1 * (1 + cos(pi * step / total)) / 2.
double CosineLearningRate(double lr1, int step, int total);

// Stage 1: per epoch, subsample a ground set and run
// max(1, floor(|ground| / batch)) iterations of mine -> encode -> loss ->
// SGD step, with batch = 3k (6k with noise views). Throws kNonFinite when a
// loss or gradient is not finite.
Stage1Result Stage1Train(const LabeledPool& pool, const TrainConfig& config);

// Input to the classification head: the raw features for the identity
// encoder, unit-norm embeddings otherwise.
Eigen::MatrixXd Represent(const Encoder& encoder, const Eigen::MatrixXd& x);

struct Stage2Result {
  Classifier classifier;
  std::vector<double> epoch_loss;  // mean cross-entropy per epoch
};

// Stage 2: minibatch SGD with constant lr2 on the frozen encoder's output.
Stage2Result Stage2Train(const Encoder& encoder, const LabeledPool& pool,
                         const TrainConfig& config);

std::vector<int> Predict(const Encoder& encoder, const Classifier& classifier,
                         const Eigen::MatrixXd& x);

struct TrainedModel {
  Encoder encoder;
  Classifier classifier;
  std::vector<TraceRow> trace;
  std::vector<double> stage2_loss;
};

// Both stages.
TrainedModel TrainTwoStage(const LabeledPool& pool, const TrainConfig& config);
// Cross-entropy only: identity encoder, head on the raw features.
TrainedModel TrainCrossEntropyBaseline(const LabeledPool& pool,
                                       const TrainConfig& config);

std::string FormatTraceCsv(const std::vector<TraceRow>& trace);

}  // namespace subfair

#endif  // SUBFAIR_TRAIN_H_
