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

// Single-threaded reference versions of the OpenMP kernels. The parallel
// versions must match these bit for bit; tests and the benchmark use them.

#ifndef SUBFAIR_SERIAL_H_
#define SUBFAIR_SERIAL_H_

#include <span>
#include <vector>

#include "subfair/kernel.h"
#include "subfair/loss.h"
#include "subfair/objective.h"

namespace subfair::serial {

SimilarityKernel CosineKernel(const EmbeddingMatrix& e, double temperature = 1.0);

std::vector<double> ScoreCandidates(const GreedyObjective& objective,
                                    std::span<const int> candidates);

std::vector<FlcmiTerm> ComputeFlcmiTerms(const SimilarityKernel& kernel,
                                         int n_anchors, int n_positives,
                                         int n_negatives);

// Row-wise affine map followed by ReLU when `relu` is set: out = x W^T + b.
Eigen::MatrixXd DenseForward(const Eigen::MatrixXd& x, const Eigen::MatrixXd& w,
                             const Eigen::VectorXd& b, bool relu);

}  // namespace subfair::serial

#endif  // SUBFAIR_SERIAL_H_
