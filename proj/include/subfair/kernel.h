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

#ifndef SUBFAIR_KERNEL_H_
#define SUBFAIR_KERNEL_H_

#include <span>

#include <Eigen/Dense>

namespace subfair {

// n x m embeddings, one row per item.
using EmbeddingMatrix = Eigen::MatrixXd;

// Throws kNonFinite on NaN/inf entries and kNumericalDomain on a zero-norm
// row.
void ValidateEmbeddings(const EmbeddingMatrix& e);

// Rows scaled to unit L2 norm. Norms are accumulated left to right.
EmbeddingMatrix NormalizeRows(const EmbeddingMatrix& e);

struct SimilarityKernel {
  Eigen::MatrixXd entries;  // n x n, symmetric
  double temperature = 1.0;

  int size() const { return static_cast<int>(entries.rows()); }
  double operator()(int i, int j) const { return entries(i, j); }
};

// entries(i, j) = <e_i, e_j> / (|e_i| |e_j| temperature). The diagonal is set
// to exactly 1 / temperature and off-diagonal values are clamped into
// [-1/temperature, 1/temperature]. Rows are computed in parallel; every entry
// has a fixed summation order, so the output does not depend on the thread
// count.
SimilarityKernel CosineKernel(const EmbeddingMatrix& e, double temperature = 1.0);

// The |rows| x |cols| block of the kernel.
Eigen::MatrixXd SubKernel(const SimilarityKernel& k, std::span<const int> rows,
                          std::span<const int> cols);

// Embeddings whose cosine kernel is the Gaussian kernel
// exp(-|x_i - x_j|^2 / (2 bandwidth^2)) of the rows of `x`: the eigenvectors
// of that kernel scaled by the square roots of its positive eigenvalues.
// Lets low-dimensional points be mined under a distance-based similarity.
EmbeddingMatrix GaussianKernelEmbedding(const Eigen::MatrixXd& x,
                                        double bandwidth);

}  // namespace subfair

#endif  // SUBFAIR_KERNEL_H_
