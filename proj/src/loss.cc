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

#include <algorithm>
#include <cmath>
#include <iostream>
#include <numeric>
#include <string>

#include "subfair/error.h"
#include "subfair/parallel.h"
#include "subfair/submodular.h"

namespace subfair {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Stacked {
  EmbeddingMatrix raw;    // [A; P; N]
  EmbeddingMatrix unit;   // rows normalized
  Eigen::VectorXd norms;  // row norms of raw
  SimilarityKernel kernel;
  int na = 0, np = 0, nn = 0;
};

Stacked Stack(const Batch& batch, double temperature) {
  if (batch.anchors.rows() == 0 || batch.positives.rows() == 0 ||
      batch.negatives.rows() == 0) {
    throw Error(ErrorCode::kInvalidArgument,
                "anchors, positives and negatives must all be non-empty");
  }
  const auto m = batch.anchors.cols();
  if (batch.positives.cols() != m || batch.negatives.cols() != m) {
    throw Error(ErrorCode::kDimensionMismatch,
                "batch sets disagree in embedding dimension");
  }
  Stacked s;
  s.na = static_cast<int>(batch.anchors.rows());
  s.np = static_cast<int>(batch.positives.rows());
  s.nn = static_cast<int>(batch.negatives.rows());
  s.raw.resize(s.na + s.np + s.nn, m);
  s.raw << batch.anchors, batch.positives, batch.negatives;
  s.unit = NormalizeRows(s.raw);
  s.norms.resize(s.raw.rows());
  for (Eigen::Index i = 0; i < s.raw.rows(); ++i) {
    double sq = 0.0;
    for (Eigen::Index c = 0; c < m; ++c) sq += s.raw(i, c) * s.raw(i, c);
    s.norms(i) = std::sqrt(sq);
  }
  s.kernel = CosineKernel(s.raw, temperature);
  return s;
}

// Chain rule from dL/dS (entry-wise, the diagonal is constant) through
// S_ij = <u_i, u_j> / t and u = x / |x| back to the raw rows.
EmbeddingMatrix BackpropKernelGrad(const Stacked& s,
                                   const Eigen::MatrixXd& grad_s) {
  const Eigen::Index n = s.raw.rows();
  const double inv_t = 1.0 / s.kernel.temperature;
  Eigen::MatrixXd sym = grad_s + grad_s.transpose();
  sym.diagonal().setZero();
  const EmbeddingMatrix grad_u = sym * s.unit * inv_t;
  EmbeddingMatrix grad_x(n, s.raw.cols());
  for (Eigen::Index i = 0; i < n; ++i) {
    const double radial = s.unit.row(i).dot(grad_u.row(i));
    grad_x.row(i) = (grad_u.row(i) - radial * s.unit.row(i)) / s.norms(i);
  }
  return grad_x;
}

void SplitGrad(const Stacked& s, const EmbeddingMatrix& grad, LossOutput& out) {
  out.grad_anchors = grad.topRows(s.na);
  out.grad_positives = grad.middleRows(s.na, s.np);
  out.grad_negatives = grad.bottomRows(s.nn);
}

double KinkSensitivity(const Stacked& s) {
  return 1.0 / (s.kernel.temperature * s.norms.minCoeff());
}

// Largest entry of row i over columns [begin, end); ties go to the smaller
// column. Also reports the gap to the runner-up (inf for a single column).
void RowMax(const Eigen::MatrixXd& k, int i, int begin, int end, double* best,
            int* arg, double* gap) {
  *best = -kInf;
  *arg = -1;
  double second = -kInf;
  for (int j = begin; j < end; ++j) {
    const double v = k(i, j);
    if (v > *best) {
      second = *best;
      *best = v;
      *arg = j;
    } else if (v > second) {
      second = v;
    }
  }
  *gap = *best - second;
}

struct Blocks {
  std::vector<int> a, p, n, ap, np, apn, an;
};

Blocks MakeBlocks(int na, int np, int nn) {
  Blocks b;
  for (int i = 0; i < na; ++i) b.a.push_back(i);
  for (int i = 0; i < np; ++i) b.p.push_back(na + i);
  for (int i = 0; i < nn; ++i) b.n.push_back(na + np + i);
  b.ap = SetUnion(b.a, b.p);
  b.np = SetUnion(b.n, b.p);
  b.apn = SetUnion(b.ap, b.n);
  b.an = SetUnion(b.a, b.n);
  return b;
}

Eigen::MatrixXd Regularized(const SimilarityKernel& k,
                            const std::vector<int>& ids, double eps) {
  Eigen::MatrixXd m = SubKernel(k, ids, ids);
  m.diagonal().array() += eps;
  return m;
}

bool IsPositiveDefinite(const Eigen::MatrixXd& m) {
  Eigen::LLT<Eigen::MatrixXd> llt(m);
  if (llt.info() != Eigen::Success) return false;
  const Eigen::MatrixXd l = llt.matrixL();
  return (l.diagonal().array() > 0.0).all() && l.allFinite();
}

double ConditionNumber(const Eigen::MatrixXd& m) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
  const auto& ev = eig.eigenvalues();
  return ev.maxCoeff() / ev.minCoeff();
}

// log det(I - M_x^-1 C M_y^-1 C^T), C = S_{x, y}.
double LogDetOneMinus(const SimilarityKernel& k, const std::vector<int>& x,
                      const std::vector<int>& y, double eps) {
  const Eigen::MatrixXd mx = Regularized(k, x, eps);
  const Eigen::MatrixXd my = Regularized(k, y, eps);
  const Eigen::MatrixXd cross = SubKernel(k, x, y);
  const Eigen::LLT<Eigen::MatrixXd> lx(mx), ly(my);
  const Eigen::MatrixXd inner =
      lx.solve(cross * ly.solve(cross.transpose()));
  const Eigen::MatrixXd reduced =
      Eigen::MatrixXd::Identity(inner.rows(), inner.cols()) - inner;
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(reduced);
  const Eigen::MatrixXd& packed = lu.matrixLU();
  double logabs = 0.0;
  int sign = lu.permutationP().determinant();
  for (Eigen::Index i = 0; i < packed.rows(); ++i) {
    const double d = packed(i, i);
    if (d < 0.0) sign = -sign;
    logabs += std::log(std::abs(d));
  }
  if (sign <= 0 || !std::isfinite(logabs)) {
    throw Error(ErrorCode::kNumericalDomain,
                "determinant ratio is not positive");
  }
  return logabs;
}

// The epsilon under which every block the LogDet losses touch is positive
// definite: `epsilon`, else 10 * epsilon, else kNumericalDomain.
double ResolveEpsilon(const SimilarityKernel& k, const Blocks& b,
                      double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument, "epsilon must be >= 0");
  }
  // A u P u N contains every other block, so its definiteness covers them.
  if (IsPositiveDefinite(Regularized(k, b.apn, epsilon))) return epsilon;
  const double retry = epsilon * 10.0;
  if (retry > epsilon && IsPositiveDefinite(Regularized(k, b.apn, retry))) {
    std::clog << "warning: LogDetCMI regularization escalated from " << epsilon
              << " to " << retry << "\n";
    return retry;
  }
  throw Error(ErrorCode::kNumericalDomain,
              "batch kernel is not positive definite after regularization");
}

}  // namespace

std::vector<FlcmiTerm> ComputeFlcmiTerms(const SimilarityKernel& kernel,
                                         int n_anchors, int n_positives,
                                         int n_negatives) {
  const int n = n_anchors + n_positives + n_negatives;
  if (kernel.size() != n) {
    throw Error(ErrorCode::kDimensionMismatch,
                "kernel size does not match the batch");
  }
  const Eigen::MatrixXd& k = kernel.entries;
  const int p_begin = n_anchors;
  const int n_begin = n_anchors + n_positives;
  std::vector<FlcmiTerm> terms(n);
#pragma omp parallel for schedule(static) num_threads(ThreadCount())
  for (int i = 0; i < n; ++i) {
    FlcmiTerm& t = terms[i];
    double gap = 0.0;
    RowMax(k, i, 0, p_begin, &t.anchor_max, &t.anchor_arg, &gap);
    RowMax(k, i, n_begin, n, &t.negative_max, &t.negative_arg, &gap);
    RowMax(k, i, p_begin, n_begin, &t.positive_max, &t.positive_arg, &gap);
    // Ties in the min go to the anchor side, whose rows come first.
    t.anchor_branch = t.anchor_max <= t.negative_max;
    const double m = t.anchor_branch ? t.anchor_max : t.negative_max;
    const double v = m - t.positive_max;
    t.active = v > 0.0;
    t.value = t.active ? v : 0.0;
  }
  return terms;
}

LossOutput FlcmiLoss(const Batch& batch, double temperature) {
  const Stacked s = Stack(batch, temperature);
  const int n = static_cast<int>(s.raw.rows());
  const double scale = 1.0 / (3.0 * s.na);

  LossOutput out;
  out.terms = ComputeFlcmiTerms(s.kernel, s.na, s.np, s.nn);
  Eigen::MatrixXd grad_s = Eigen::MatrixXd::Zero(n, n);
  double sum = 0.0;
  double margin = kInf;
  const Eigen::MatrixXd& k = s.kernel.entries;
  for (int i = 0; i < n; ++i) {
    const FlcmiTerm& t = out.terms[i];
    sum += t.value;
    const double m = t.anchor_branch ? t.anchor_max : t.negative_max;
    const double v = m - t.positive_max;
    margin = std::min(margin, std::abs(v));
    if (!t.active) continue;
    double best, gap_a, gap_p, gap_n;
    int arg;
    RowMax(k, i, 0, s.na, &best, &arg, &gap_a);
    RowMax(k, i, s.na, s.na + s.np, &best, &arg, &gap_p);
    RowMax(k, i, s.na + s.np, n, &best, &arg, &gap_n);
    margin = std::min({margin, std::abs(t.anchor_max - t.negative_max), gap_p,
                       t.anchor_branch ? gap_a : gap_n});
    const int routed = t.anchor_branch ? t.anchor_arg : t.negative_arg;
    grad_s(i, routed) += scale;
    grad_s(i, t.positive_arg) -= scale;
  }
  out.value = sum * scale;
  out.kink_margin = margin;
  out.kink_sensitivity = KinkSensitivity(s);
  SplitGrad(s, BackpropKernelGrad(s, grad_s), out);
  if (!std::isfinite(out.value) || !out.grad_anchors.allFinite() ||
      !out.grad_positives.allFinite() || !out.grad_negatives.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "FLCMI produced a non-finite value");
  }
  return out;
}

LossOutput LogDetCmiLoss(const Batch& batch, double temperature,
                         double epsilon) {
  const Stacked s = Stack(batch, temperature);
  const Blocks b = MakeBlocks(s.na, s.np, s.nn);
  const double eps = ResolveEpsilon(s.kernel, b, epsilon);
  const int n = static_cast<int>(s.raw.rows());
  const double scale = 1.0 / (3.0 * s.na);

  LossOutput out;
  out.epsilon_used = eps;
  out.value = scale * (LogDetOneMinus(s.kernel, b.n, b.p, eps) -
                       LogDetOneMinus(s.kernel, b.ap, b.n, eps));

  // dL/dS = scale * (inv(M_AP) + inv(M_NP) - inv(M_APN) - inv(M_P)), each
  // embedded at its block's rows and columns.
  Eigen::MatrixXd grad_s = Eigen::MatrixXd::Zero(n, n);
  const std::array<const std::vector<int>*, 4> blocks = {&b.ap, &b.np, &b.apn,
                                                         &b.p};
  const std::array<double, 4> signs = {1.0, 1.0, -1.0, -1.0};
  for (int q = 0; q < 4; ++q) {
    const std::vector<int>& ids = *blocks[q];
    const Eigen::MatrixXd m = Regularized(s.kernel, ids, eps);
    out.condition_numbers[q] = ConditionNumber(m);
    const Eigen::MatrixXd inv =
        Eigen::LLT<Eigen::MatrixXd>(m).solve(
            Eigen::MatrixXd::Identity(m.rows(), m.cols()));
    for (size_t r = 0; r < ids.size(); ++r) {
      for (size_t c = 0; c < ids.size(); ++c) {
        grad_s(ids[r], ids[c]) += signs[q] * scale * inv(r, c);
      }
    }
  }
  out.kink_sensitivity = KinkSensitivity(s);
  SplitGrad(s, BackpropKernelGrad(s, grad_s), out);
  if (!std::isfinite(out.value) || !out.grad_anchors.allFinite() ||
      !out.grad_positives.allFinite() || !out.grad_negatives.allFinite()) {
    throw Error(ErrorCode::kNonFinite, "LogDetCMI produced a non-finite value");
  }
  return out;
}

LossOutput EvaluateLoss(LossKind kind, const Batch& batch, double temperature,
                        double epsilon) {
  return kind == LossKind::kFlcmi ? FlcmiLoss(batch, temperature)
                                  : LogDetCmiLoss(batch, temperature, epsilon);
}

LogDetCmiForms EvaluateLogDetCmiForms(const Batch& batch, double temperature,
                                      double epsilon) {
  const Stacked s = Stack(batch, temperature);
  const Blocks b = MakeBlocks(s.na, s.np, s.nn);
  const double eps = ResolveEpsilon(s.kernel, b, epsilon);
  auto logdet = [&](const std::vector<int>& ids) {
    return RegularizedLogDet(SubKernel(s.kernel, ids, ids), eps);
  };
  LogDetCmiForms forms;
  forms.definitional = logdet(b.ap) + logdet(b.np) - logdet(b.apn) - logdet(b.p);
  const double shared = LogDetOneMinus(s.kernel, b.n, b.p, eps);
  forms.ratio_ap_n = shared - LogDetOneMinus(s.kernel, b.ap, b.n, eps);
  forms.ratio_an_p = shared - LogDetOneMinus(s.kernel, b.an, b.p, eps);
  return forms;
}

GradCheckReport GradCheck(const LossFunction& loss, const Batch& batch,
                          double step, double tolerance) {
  GradCheckReport report;
  const LossOutput base = loss(batch);
  if (base.kink_margin <= 10.0 * step * base.kink_sensitivity) {
    report.tie_detected = true;
    return report;
  }

  auto check_set = [&](EmbeddingMatrix Batch::*member,
                       const EmbeddingMatrix& analytic) {
    const EmbeddingMatrix& original = batch.*member;
    for (Eigen::Index r = 0; r < original.rows(); ++r) {
      for (Eigen::Index c = 0; c < original.cols(); ++c) {
        Batch plus = batch, minus = batch;
        (plus.*member)(r, c) += step;
        (minus.*member)(r, c) -= step;
        const double fd = (loss(plus).value - loss(minus).value) / (2.0 * step);
        const double g = analytic(r, c);
        const double abs_err = std::abs(g - fd);
        const double denom = std::max({std::abs(g), std::abs(fd), 1e-6});
        report.max_abs_error = std::max(report.max_abs_error, abs_err);
        report.max_rel_error = std::max(report.max_rel_error, abs_err / denom);
        ++report.coordinates;
      }
    }
  };
  check_set(&Batch::anchors, base.grad_anchors);
  check_set(&Batch::positives, base.grad_positives);
  check_set(&Batch::negatives, base.grad_negatives);
  report.passed = report.max_rel_error < tolerance;
  return report;
}

}  // namespace subfair
