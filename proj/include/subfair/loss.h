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

// Conditional-mutual-information losses over a mined (anchors, positives,
// negatives) batch, I_f(A; N | P) / (3 |A|), for the facility-location and
// log-determinant base functions, with analytic gradients with respect to
// the raw (unnormalized) embeddings.
//
// Inside a loss the three sets are stacked as rows [A; P; N] and the kernel
// is the temperature-scaled cosine kernel of that stack. The FL universe is
// the stack itself.

#ifndef SUBFAIR_LOSS_H_
#define SUBFAIR_LOSS_H_

#include <array>
#include <functional>
#include <limits>
#include <vector>

#include <Eigen/Dense>

#include "subfair/kernel.h"

namespace subfair {

enum class LossKind { kFlcmi, kLogDetCmi };

struct Batch {
  EmbeddingMatrix anchors;
  EmbeddingMatrix positives;
  EmbeddingMatrix negatives;

  int size() const {
    return static_cast<int>(anchors.rows() + positives.rows() +
                            negatives.rows());
  }
};

// Which arguments realized the max/min branches for one FLCMI term. Indices
// are rows of the stacked [A; P; N] batch.
struct FlcmiTerm {
  double anchor_max = 0.0;
  double negative_max = 0.0;
  double positive_max = 0.0;
  int anchor_arg = -1;
  int negative_arg = -1;
  int positive_arg = -1;
  bool anchor_branch = true;  // min(.,.) taken by the anchor side
  bool active = false;        // outer clamp not engaged
  double value = 0.0;         // max(min(a, n) - p, 0), unnormalized
};

struct LossOutput {
  double value = 0.0;
  EmbeddingMatrix grad_anchors;
  EmbeddingMatrix grad_positives;
  EmbeddingMatrix grad_negatives;

  // FLCMI: per stacked row, the active branches.
  std::vector<FlcmiTerm> terms;
  // FLCMI: smallest distance (in similarity units) from a max/min/clamp kink.
  double kink_margin = std::numeric_limits<double>::infinity();
  // Upper bound on |dS_ij / dx| for a single coordinate of any row.
  double kink_sensitivity = 0.0;

  // LogDetCMI: 2-norm condition numbers of the regularized blocks
  // A u P, N u P, A u P u N, P (in that order), and the epsilon actually used.
  std::array<double, 4> condition_numbers{};
  double epsilon_used = 0.0;
};

// Per-row FLCMI terms of a stacked [A; P; N] kernel, computed in parallel
// with one output slot per row.
std::vector<FlcmiTerm> ComputeFlcmiTerms(const SimilarityKernel& kernel,
                                         int n_anchors, int n_positives,
                                         int n_negatives);

// (1 / (3|A|)) * sum over the stacked batch of
// max(min(max_a S_ia, max_n S_in) - max_p S_ip, 0).
// Subgradients route to the smallest-index arg of every max/min; clamped
// terms contribute nothing.
LossOutput FlcmiLoss(const Batch& batch, double temperature);

// (1 / (3|A|)) * I_f(A; N | P) with f(X) = logdet(S_X + eps I). The value is
// computed through the ratio-of-determinants form
//   log det(I - M_N^-1 S_NP M_P^-1 S_NP^T)
//     - log det(I - M_AP^-1 S_AP,N M_N^-1 S_AP,N^T),  M_X = S_X + eps I;
// the gradient through d logdet(M) = tr(M^-1 dM). On a non-positive-definite
// block the whole evaluation is retried once with 10 * eps.
LossOutput LogDetCmiLoss(const Batch& batch, double temperature,
                         double epsilon);

LossOutput EvaluateLoss(LossKind kind, const Batch& batch, double temperature,
                        double epsilon);

// The two printed closed forms of the LogDet conditional mutual information
// next to the definitional value, all unnormalized. `ratio_ap_n` conditions
// the second determinant on A u P against N; `ratio_an_p` conditions it on
// A u N against P.
struct LogDetCmiForms {
  double definitional = 0.0;
  double ratio_ap_n = 0.0;
  double ratio_an_p = 0.0;
};
LogDetCmiForms EvaluateLogDetCmiForms(const Batch& batch, double temperature,
                                      double epsilon);

// Central finite differences over every embedding coordinate.
struct GradCheckReport {
  double max_rel_error = 0.0;
  double max_abs_error = 0.0;
  int coordinates = 0;
  bool tie_detected = false;  // batch sits too close to a kink; resample
  bool passed = false;
};

using LossFunction = std::function<LossOutput(const Batch&)>;

// Relative error per coordinate is |g - g_fd| / max(|g|, |g_fd|, 1e-6); the
// floor keeps coordinates with a zero gradient from dividing round-off by
// zero. A batch whose kink margin is within 10 * step * kink_sensitivity is
// reported as a tie without differencing.
GradCheckReport GradCheck(const LossFunction& loss, const Batch& batch,
                          double step, double tolerance);

}  // namespace subfair

#endif  // SUBFAIR_LOSS_H_
