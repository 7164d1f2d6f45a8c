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

#include <algorithm>
#include <cmath>
#include <cstring>

#include "subfair/error.h"
#include "subfair/parallel.h"

namespace subfair {
namespace {

void FnvBytes(const void* data, size_t size, uint64_t* h) {
  const auto* bytes = static_cast<const unsigned char*>(data);
  for (size_t i = 0; i < size; ++i) {
    *h ^= bytes[i];
    *h *= 1099511628211ULL;
  }
}

void FnvLayer(const DenseLayer& layer, uint64_t* h) {
  FnvBytes(layer.w.data(), sizeof(double) * layer.w.size(), h);
  FnvBytes(layer.b.data(), sizeof(double) * layer.b.size(), h);
}

constexpr uint64_t kFnvOffset = 14695981039346656037ULL;

// Gradients of a dense layer given its input and dL/d(output pre-activation).
DenseLayer DenseGrad(const Eigen::MatrixXd& in, const Eigen::MatrixXd& grad) {
  DenseLayer g;
  g.w = grad.transpose() * in;
  g.b = grad.colwise().sum().transpose();
  return g;
}

}  // namespace

Eigen::MatrixXd DenseLayer::Forward(const Eigen::MatrixXd& x, bool relu) const {
  const int n = static_cast<int>(x.rows());
  const Eigen::Index out_dim = w.rows();
  const Eigen::Index in_dim = w.cols();
  if (x.cols() != in_dim) {
    throw Error(ErrorCode::kDimensionMismatch,
                "layer expects " + std::to_string(in_dim) + " inputs, got " +
                    std::to_string(x.cols()));
  }
  Eigen::MatrixXd out(n, out_dim);
#pragma omp parallel for schedule(static) num_threads(ThreadCount())
  for (int r = 0; r < n; ++r) {
    for (Eigen::Index o = 0; o < out_dim; ++o) {
      double acc = b(o);
      for (Eigen::Index c = 0; c < in_dim; ++c) acc += w(o, c) * x(r, c);
      out(r, o) = relu ? std::max(acc, 0.0) : acc;
    }
  }
  return out;
}

DenseLayer InitDense(int in, int out, Rng& rng) {
  const double r = std::sqrt(6.0 / (in + out));
  std::uniform_real_distribution<double> dist(-r, r);
  DenseLayer layer;
  layer.w.resize(out, in);
  for (int o = 0; o < out; ++o) {
    for (int c = 0; c < in; ++c) layer.w(o, c) = dist(rng);
  }
  layer.b = Eigen::VectorXd::Zero(out);
  return layer;
}

std::string EncoderKindName(EncoderKind kind) {
  switch (kind) {
    case EncoderKind::kIdentity:
      return "identity";
    case EncoderKind::kLinear:
      return "linear";
    case EncoderKind::kMlp1:
      return "mlp1";
  }
  return "unknown";
}

EncoderKind ParseEncoderKind(const std::string& name) {
  if (name == "identity") return EncoderKind::kIdentity;
  if (name == "linear") return EncoderKind::kLinear;
  if (name == "mlp1") return EncoderKind::kMlp1;
  throw Error(ErrorCode::kInvalidArgument, "unknown encoder kind '" + name + "'");
}

Encoder Encoder::Create(EncoderKind kind, int input_dim, int hidden_dim,
                        int output_dim, Rng& rng) {
  if (input_dim < 1 || (kind != EncoderKind::kIdentity && output_dim < 1) ||
      (kind == EncoderKind::kMlp1 && hidden_dim < 1)) {
    throw Error(ErrorCode::kInvalidArgument, "encoder dimensions must be >= 1");
  }
  std::vector<DenseLayer> layers;
  if (kind == EncoderKind::kLinear) {
    layers.push_back(InitDense(input_dim, output_dim, rng));
  } else if (kind == EncoderKind::kMlp1) {
    layers.push_back(InitDense(input_dim, hidden_dim, rng));
    layers.push_back(InitDense(hidden_dim, output_dim, rng));
  }
  return FromLayers(kind, input_dim, std::move(layers));
}

Encoder Encoder::FromLayers(EncoderKind kind, int input_dim,
                            std::vector<DenseLayer> layers) {
  const size_t expected = kind == EncoderKind::kIdentity ? 0
                          : kind == EncoderKind::kLinear ? 1
                                                         : 2;
  if (layers.size() != expected) {
    throw Error(ErrorCode::kInvalidArgument,
                "wrong number of layers for encoder kind " +
                    EncoderKindName(kind));
  }
  int width = input_dim;
  for (const DenseLayer& layer : layers) {
    if (layer.w.cols() != width || layer.b.size() != layer.w.rows()) {
      throw Error(ErrorCode::kDimensionMismatch,
                  "encoder layer shapes do not chain");
    }
    if (!layer.w.allFinite() || !layer.b.allFinite()) {
      throw Error(ErrorCode::kNonFinite, "encoder weights are not finite");
    }
    width = static_cast<int>(layer.w.rows());
  }
  Encoder e;
  e.kind_ = kind;
  e.input_dim_ = input_dim;
  e.layers_ = std::move(layers);
  return e;
}

int Encoder::output_dim() const {
  return layers_.empty() ? input_dim_ : static_cast<int>(layers_.back().w.rows());
}

void Encoder::CheckInput(const Eigen::MatrixXd& x) const {
  if (x.cols() != input_dim_) {
    throw Error(ErrorCode::kDimensionMismatch,
                "encoder expects " + std::to_string(input_dim_) +
                    " features, got " + std::to_string(x.cols()));
  }
}

Eigen::MatrixXd Encoder::ForwardRaw(const Eigen::MatrixXd& x) const {
  CheckInput(x);
  switch (kind_) {
    case EncoderKind::kIdentity:
      return x;
    case EncoderKind::kLinear:
      return layers_[0].Forward(x, false);
    case EncoderKind::kMlp1:
      return layers_[1].Forward(layers_[0].Forward(x, true), false);
  }
  return x;
}

EmbeddingMatrix Encoder::Encode(const Eigen::MatrixXd& x) const {
  return NormalizeRows(ForwardRaw(x));
}

std::vector<DenseLayer> Encoder::Backward(const Eigen::MatrixXd& x,
                                          const Eigen::MatrixXd& grad_out) const {
  CheckInput(x);
  switch (kind_) {
    case EncoderKind::kIdentity:
      return {};
    case EncoderKind::kLinear:
      return {DenseGrad(x, grad_out)};
    case EncoderKind::kMlp1: {
      const Eigen::MatrixXd hidden = layers_[0].Forward(x, true);
      DenseLayer g2 = DenseGrad(hidden, grad_out);
      Eigen::MatrixXd grad_hidden = grad_out * layers_[1].w;
      // ReLU mask: hidden == 0 exactly where the pre-activation was <= 0.
      for (Eigen::Index i = 0; i < hidden.size(); ++i) {
        if (!(hidden.data()[i] > 0.0)) grad_hidden.data()[i] = 0.0;
      }
      return {DenseGrad(x, grad_hidden), std::move(g2)};
    }
  }
  return {};
}

void Encoder::Step(const std::vector<DenseLayer>& grads, double lr) {
  if (grads.size() != layers_.size()) {
    throw Error(ErrorCode::kInvalidArgument, "gradient/layer count mismatch");
  }
  for (size_t l = 0; l < layers_.size(); ++l) {
    layers_[l].w -= lr * grads[l].w;
    layers_[l].b -= lr * grads[l].b;
  }
}

uint64_t Encoder::Fingerprint() const {
  uint64_t h = kFnvOffset;
  const int kind = static_cast<int>(kind_);
  FnvBytes(&kind, sizeof(kind), &h);
  for (const DenseLayer& layer : layers_) FnvLayer(layer, &h);
  return h;
}

Classifier Classifier::Create(int input_dim, int hidden_dim,
                              std::vector<int> labels, Rng& rng) {
  if (input_dim < 1 || hidden_dim < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "classifier dimensions must be >= 1");
  }
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  if (labels.size() < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two target labels");
  }
  DenseLayer hidden = InitDense(input_dim, hidden_dim, rng);
  DenseLayer output = InitDense(hidden_dim, static_cast<int>(labels.size()), rng);
  return FromLayers(std::move(hidden), std::move(output), std::move(labels));
}

Classifier Classifier::FromLayers(DenseLayer hidden, DenseLayer output,
                                  std::vector<int> labels) {
  if (hidden.b.size() != hidden.w.rows() || output.w.cols() != hidden.w.rows() ||
      output.b.size() != output.w.rows() ||
      output.w.rows() != static_cast<Eigen::Index>(labels.size())) {
    throw Error(ErrorCode::kDimensionMismatch, "classifier shapes disagree");
  }
  if (!std::is_sorted(labels.begin(), labels.end())) {
    throw Error(ErrorCode::kInvalidArgument, "classifier labels must be sorted");
  }
  Classifier c;
  c.hidden_ = std::move(hidden);
  c.output_ = std::move(output);
  c.labels_ = std::move(labels);
  return c;
}

Eigen::MatrixXd Classifier::Logits(const Eigen::MatrixXd& x) const {
  return output_.Forward(hidden_.Forward(x, true), false);
}

std::vector<int> Classifier::Predict(const Eigen::MatrixXd& x) const {
  const Eigen::MatrixXd logits = Logits(x);
  std::vector<int> out(logits.rows());
  for (Eigen::Index r = 0; r < logits.rows(); ++r) {
    Eigen::Index best = 0;
    for (Eigen::Index c = 1; c < logits.cols(); ++c) {
      if (logits(r, c) > logits(r, best)) best = c;
    }
    out[r] = labels_[best];
  }
  return out;
}

int Classifier::ClassIndex(int label) const {
  const auto it = std::lower_bound(labels_.begin(), labels_.end(), label);
  if (it == labels_.end() || *it != label) {
    throw Error(ErrorCode::kInvalidArgument,
                "label " + std::to_string(label) + " unknown to the classifier");
  }
  return static_cast<int>(it - labels_.begin());
}

double Classifier::TrainStep(const Eigen::MatrixXd& x,
                             std::span<const int> class_index, double lr) {
  const Eigen::Index n = x.rows();
  if (static_cast<size_t>(n) != class_index.size() || n == 0) {
    throw Error(ErrorCode::kDimensionMismatch, "batch/label length mismatch");
  }
  const Eigen::MatrixXd hidden = hidden_.Forward(x, true);
  const Eigen::MatrixXd logits = output_.Forward(hidden, false);
  Eigen::MatrixXd grad = Eigen::MatrixXd::Zero(n, logits.cols());
  double loss = 0.0;
  for (Eigen::Index r = 0; r < n; ++r) {
    const double top = logits.row(r).maxCoeff();
    double z = 0.0;
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      z += std::exp(logits(r, c) - top);
    }
    const double log_z = top + std::log(z);
    loss += log_z - logits(r, class_index[r]);
    for (Eigen::Index c = 0; c < logits.cols(); ++c) {
      grad(r, c) = std::exp(logits(r, c) - log_z) / static_cast<double>(n);
    }
    grad(r, class_index[r]) -= 1.0 / static_cast<double>(n);
  }
  loss /= static_cast<double>(n);
  if (!std::isfinite(loss)) {
    throw Error(ErrorCode::kNonFinite, "classifier loss is not finite");
  }
  const DenseLayer g_out = DenseGrad(hidden, grad);
  Eigen::MatrixXd grad_hidden = grad * output_.w;
  for (Eigen::Index i = 0; i < hidden.size(); ++i) {
    if (!(hidden.data()[i] > 0.0)) grad_hidden.data()[i] = 0.0;
  }
  const DenseLayer g_hidden = DenseGrad(x, grad_hidden);
  output_.w -= lr * g_out.w;
  output_.b -= lr * g_out.b;
  hidden_.w -= lr * g_hidden.w;
  hidden_.b -= lr * g_hidden.b;
  return loss;
}

uint64_t Classifier::Fingerprint() const {
  uint64_t h = kFnvOffset;
  FnvLayer(hidden_, &h);
  FnvLayer(output_, &h);
  FnvBytes(labels_.data(), sizeof(int) * labels_.size(), &h);
  return h;
}

}  // namespace subfair
