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

#include "subfair/train.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <numeric>
#include <set>

#include "subfair/error.h"

namespace subfair {
namespace {

// Stage 2 draws from its own stream so that changing stage 1 settings does
// not reshuffle the head's initialization.
constexpr uint64_t kStage2Stream = 0x9e3779b97f4a7c15ULL;

void Require(bool ok, const std::string& what) {
  if (!ok) throw Error(ErrorCode::kInvalidArgument, what);
}

Eigen::MatrixXd Stack(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b,
                      const Eigen::MatrixXd& c) {
  Eigen::MatrixXd out(a.rows() + b.rows() + c.rows(), a.cols());
  out << a, b, c;
  return out;
}

// Two noisy copies of every row, interleaved as (row0 view0, row0 view1, ...).
Eigen::MatrixXd TwoViews(const Eigen::MatrixXd& x, double sigma, Rng& rng) {
  std::normal_distribution<double> noise(0.0, sigma);
  Eigen::MatrixXd out(2 * x.rows(), x.cols());
  for (Eigen::Index r = 0; r < x.rows(); ++r) {
    for (int v = 0; v < 2; ++v) {
      for (Eigen::Index c = 0; c < x.cols(); ++c) {
        out(2 * r + v, c) = x(r, c) + noise(rng);
      }
    }
  }
  return out;
}

std::vector<int> SortedLabels(const std::vector<int>& targets) {
  std::set<int> s(targets.begin(), targets.end());
  return {s.begin(), s.end()};
}

}  // namespace

std::string LossKindName(LossKind kind) {
  return kind == LossKind::kFlcmi ? "flcmi" : "logdetcmi";
}

LossKind ParseLossKind(const std::string& name) {
  if (name == "flcmi") return LossKind::kFlcmi;
  if (name == "logdetcmi") return LossKind::kLogDetCmi;
  throw Error(ErrorCode::kInvalidArgument, "unknown loss '" + name + "'");
}

void TrainConfig::Validate() const {
  Require(k >= 1, "k must be >= 1");
  Require(epochs1 >= 0 && epochs2 >= 0, "epoch counts must be >= 0");
  Require(lr1 > 0.0 && lr2 > 0.0, "learning rates must be positive");
  Require(temperature > 0.0, "temperature must be positive");
  Require(fraction > 0.0 && fraction <= 1.0, "fraction must lie in (0, 1]");
  Require(epsilon >= 0.0, "epsilon must be >= 0");
  Require(hidden_dim >= 1 && embed_dim >= 1 && classifier_hidden >= 1,
          "layer widths must be >= 1");
  Require(view_noise >= 0.0, "view noise must be >= 0");
  Require(batch_size >= 1, "batch size must be >= 1");
}

double CosineLearningRate(double lr1, int step, int total) {
  if (total <= 0) return lr1;
  return lr1 * 0.5 *
         (1.0 + std::cos(std::numbers::pi * static_cast<double>(step) / total));
}

Stage1Result Stage1Train(const LabeledPool& pool, const TrainConfig& config) {
  config.Validate();
  pool.Validate();
  Rng rng(config.seed);
  Stage1Result result;
  result.encoder = Encoder::Create(config.encoder, pool.dim(),
                                   config.hidden_dim, config.embed_dim, rng);
  if (config.epochs1 == 0) return result;

  const int ground_size = EpochSampleSize(pool.size(), config.fraction);
  const int batch = (config.view_noise > 0.0 ? 6 : 3) * config.k;
  const int iterations = std::max(1, ground_size / batch);
  const int total = config.epochs1 * iterations;
  MineOptions options;
  options.k = config.k;
  options.miner = config.miner;
  options.epsilon = config.epsilon;

  Encoder& encoder = result.encoder;
  EpochGroundSet ground;
  bool have_prev = false;
  int step = 0;
  for (int epoch = 0; epoch < config.epochs1; ++epoch) {
    ground = SubsampleEpoch(pool.size(), config.fraction,
                            have_prev ? &ground : nullptr, rng);
    ground.epoch = epoch;
    have_prev = true;
    const AttributeIndex index(pool, ground.ids);
    const Eigen::MatrixXd ground_x = pool.Rows(ground.ids);
    for (int it = 0; it < iterations; ++it, ++step) {
      const double lr = CosineLearningRate(config.lr1, step, total);
      const EmbeddingMatrix ground_e = encoder.ForwardRaw(ground_x);
      const MinedBatch mined = Mine(index, ground.ids, ground_e, options, rng);

      Eigen::MatrixXd xa = pool.Rows(mined.anchors);
      Eigen::MatrixXd xp = pool.Rows(mined.positives);
      Eigen::MatrixXd xn = pool.Rows(mined.negatives);
      if (config.view_noise > 0.0) {
        xa = TwoViews(xa, config.view_noise, rng);
        xp = TwoViews(xp, config.view_noise, rng);
        xn = TwoViews(xn, config.view_noise, rng);
      }
      const Eigen::MatrixXd x = Stack(xa, xp, xn);
      const Eigen::MatrixXd raw = encoder.ForwardRaw(x);
      Batch b;
      b.anchors = raw.topRows(xa.rows());
      b.positives = raw.middleRows(xa.rows(), xp.rows());
      b.negatives = raw.bottomRows(xn.rows());
      const LossOutput out =
          EvaluateLoss(config.loss, b, config.temperature, config.epsilon);
      const Eigen::MatrixXd grad =
          Stack(out.grad_anchors, out.grad_positives, out.grad_negatives);
      if (!std::isfinite(out.value) || !grad.allFinite()) {
        throw Error(ErrorCode::kNonFinite,
                    "stage 1 loss is not finite at epoch " +
                        std::to_string(epoch) + ", iteration " +
                        std::to_string(it) + ", pair (" +
                        std::to_string(mined.pair.first) + ", " +
                        std::to_string(mined.pair.second) + "), lr " +
                        std::to_string(lr));
      }
      result.trace.push_back(
          {epoch, it, lr, out.value, mined.pair, mined.short_batch});
      encoder.Step(encoder.Backward(x, grad), lr);
    }
  }
  return result;
}

Eigen::MatrixXd Represent(const Encoder& encoder, const Eigen::MatrixXd& x) {
  if (encoder.kind() == EncoderKind::kIdentity) {
    if (x.cols() != encoder.input_dim()) {
      throw Error(ErrorCode::kDimensionMismatch, "feature width mismatch");
    }
    return x;
  }
  return encoder.Encode(x);
}

Stage2Result Stage2Train(const Encoder& encoder, const LabeledPool& pool,
                         const TrainConfig& config) {
  config.Validate();
  pool.Validate();
  Rng rng(config.seed ^ kStage2Stream);
  const Eigen::MatrixXd features = Represent(encoder, pool.features);
  Stage2Result result;
  result.classifier =
      Classifier::Create(static_cast<int>(features.cols()),
                         config.classifier_hidden, SortedLabels(pool.targets), rng);
  std::vector<int> class_index(pool.size());
  for (int i = 0; i < pool.size(); ++i) {
    class_index[i] = result.classifier.ClassIndex(pool.targets[i]);
  }
  std::vector<int> order(pool.size());
  std::iota(order.begin(), order.end(), 0);
  for (int epoch = 0; epoch < config.epochs2; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    double total = 0.0;
    int batches = 0;
    for (int begin = 0; begin < pool.size(); begin += config.batch_size) {
      const int end = std::min(pool.size(), begin + config.batch_size);
      const std::span<const int> rows(order.data() + begin, end - begin);
      std::vector<int> labels;
      labels.reserve(rows.size());
      for (int r : rows) labels.push_back(class_index[r]);
      Eigen::MatrixXd x(static_cast<Eigen::Index>(rows.size()), features.cols());
      for (size_t i = 0; i < rows.size(); ++i) {
        x.row(static_cast<Eigen::Index>(i)) = features.row(rows[i]);
      }
      const double loss = result.classifier.TrainStep(x, labels, config.lr2);
      if (!std::isfinite(loss)) {
        throw Error(ErrorCode::kNonFinite,
                    "stage 2 loss is not finite at epoch " +
                        std::to_string(epoch));
      }
      total += loss;
      ++batches;
    }
    result.epoch_loss.push_back(total / batches);
  }
  return result;
}

std::vector<int> Predict(const Encoder& encoder, const Classifier& classifier,
                         const Eigen::MatrixXd& x) {
  return classifier.Predict(Represent(encoder, x));
}

TrainedModel TrainTwoStage(const LabeledPool& pool, const TrainConfig& config) {
  Stage1Result s1 = Stage1Train(pool, config);
  Stage2Result s2 = Stage2Train(s1.encoder, pool, config);
  return {std::move(s1.encoder), std::move(s2.classifier), std::move(s1.trace),
          std::move(s2.epoch_loss)};
}

TrainedModel TrainCrossEntropyBaseline(const LabeledPool& pool,
                                       const TrainConfig& config) {
  TrainConfig c = config;
  c.encoder = EncoderKind::kIdentity;
  c.epochs1 = 0;
  return TrainTwoStage(pool, c);
}

std::string FormatTraceCsv(const std::vector<TraceRow>& trace) {
  std::string out = "epoch,iteration,lr,loss,t,s,short\n";
  char buf[160];
  for (const TraceRow& r : trace) {
    std::snprintf(buf, sizeof(buf), "%d,%d,%.17g,%.17g,%d,%d,%d\n", r.epoch,
                  r.iteration, r.lr, r.loss, r.pair.first, r.pair.second,
                  r.short_batch ? 1 : 0);
    out += buf;
  }
  return out;
}

}  // namespace subfair
