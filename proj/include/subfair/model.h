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

// Small dense networks: the feature encoder trained by the contrastive stage
// and the one-hidden-layer classification head. Both carry an analytic
// backward pass; there is no autodiff.

#ifndef SUBFAIR_MODEL_H_
#define SUBFAIR_MODEL_H_

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "subfair/kernel.h"
#include "subfair/pool.h"

namespace subfair {

struct DenseLayer {
  Eigen::MatrixXd w;  // out x in
  Eigen::VectorXd b;  // out

  // x W^T + b, optionally followed by ReLU. Parallel over rows.
  Eigen::MatrixXd Forward(const Eigen::MatrixXd& x, bool relu) const;
};

// Uniform(-r, r) weights with r = sqrt(6 / (in + out)); zero biases.
DenseLayer InitDense(int in, int out, Rng& rng);

enum class EncoderKind { kIdentity, kLinear, kMlp1 };

std::string EncoderKindName(EncoderKind kind);
EncoderKind ParseEncoderKind(const std::string& name);

class Encoder {
 public:
  Encoder() = default;

  // kIdentity: no parameters, output = input (used by the raw-feature
  // baseline). kLinear: d -> m. kMlp1: d -> h (ReLU) -> m.
  static Encoder Create(EncoderKind kind, int input_dim, int hidden_dim,
                        int output_dim, Rng& rng);
  static Encoder FromLayers(EncoderKind kind, int input_dim,
                            std::vector<DenseLayer> layers);

  EncoderKind kind() const { return kind_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const;
  const std::vector<DenseLayer>& layers() const { return layers_; }
  std::vector<DenseLayer>& mutable_layers() { return layers_; }

  // Output before L2 normalization.
  Eigen::MatrixXd ForwardRaw(const Eigen::MatrixXd& x) const;
  // Unit-norm embeddings; kNumericalDomain on a zero output row.
  EmbeddingMatrix Encode(const Eigen::MatrixXd& x) const;

  // Parameter gradients given dL/d(raw output), one entry per layer.
  std::vector<DenseLayer> Backward(const Eigen::MatrixXd& x,
                                   const Eigen::MatrixXd& grad_out) const;
  void Step(const std::vector<DenseLayer>& grads, double lr);

  // FNV-1a over the bit patterns of every parameter.
  uint64_t Fingerprint() const;

 private:
  void CheckInput(const Eigen::MatrixXd& x) const;

  EncoderKind kind_ = EncoderKind::kIdentity;
  int input_dim_ = 0;
  std::vector<DenseLayer> layers_;
};

class Classifier {
 public:
  Classifier() = default;

  // in -> hidden (ReLU) -> one logit per entry of `labels` (sorted).
  static Classifier Create(int input_dim, int hidden_dim,
                           std::vector<int> labels, Rng& rng);
  static Classifier FromLayers(DenseLayer hidden, DenseLayer output,
                               std::vector<int> labels);

  int input_dim() const { return static_cast<int>(hidden_.w.cols()); }
  const std::vector<int>& labels() const { return labels_; }
  const DenseLayer& hidden() const { return hidden_; }
  const DenseLayer& output() const { return output_; }

  Eigen::MatrixXd Logits(const Eigen::MatrixXd& x) const;
  // Argmax over logits; ties go to the smallest label.
  std::vector<int> Predict(const Eigen::MatrixXd& x) const;

  // Mean softmax cross-entropy over the rows; applies one SGD step and
  // returns the loss before the step.
  double TrainStep(const Eigen::MatrixXd& x, std::span<const int> class_index,
                   double lr);

  int ClassIndex(int label) const;

  uint64_t Fingerprint() const;

 private:
  DenseLayer hidden_;
  DenseLayer output_;
  std::vector<int> labels_;
};

}  // namespace subfair

#endif  // SUBFAIR_MODEL_H_
