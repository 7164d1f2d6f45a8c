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

#include "subfair/verify.h"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "subfair/error.h"
#include "subfair/greedy.h"
#include "subfair/kernel.h"
#include "subfair/loss.h"
#include "subfair/oracles.h"
#include "subfair/submodular.h"

namespace subfair {
namespace {

using Clock = std::chrono::steady_clock;

double Seconds(Clock::time_point since) {
  return std::chrono::duration<double>(Clock::now() - since).count();
}

std::vector<int> Iota(int n) {
  std::vector<int> v(n);
  std::iota(v.begin(), v.end(), 0);
  return v;
}

// Kernel of the stacked batch rows, as the losses build it.
SimilarityKernel StackedKernel(const Batch& b, double temperature) {
  EmbeddingMatrix e(b.size(), b.anchors.cols());
  e << b.anchors, b.positives, b.negatives;
  return CosineKernel(e, temperature);
}

}  // namespace

SuiteResult RunSubmodularitySuite(uint64_t seed, double epsilon) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "submodularity";
  Rng rng(seed);
  double worst = -INFINITY;
  auto check = [&](double violation) {
    ++r.cases;
    worst = std::max(worst, violation);
    if (violation > 1e-9) ++r.failures;
  };
  for (int trial = 0; trial < 10; ++trial) {
    for (BaseKind kind : {BaseKind::kFacilityLocation, BaseKind::kLogDet}) {
      for (int n : {6, 12}) {
        const bool fl = kind == BaseKind::kFacilityLocation;
        const SimilarityKernel k =
            CosineKernel(oracle::RandomEmbeddings(n, 4, rng, fl), 1.0);
        const BaseFunction f = fl ? BaseFunction::FacilityLocation(k, Iota(n))
                                  : BaseFunction::LogDeterminant(k, epsilon);
        const oracle::SetFn fn = [&f](std::span<const int> a) {
          return f.Eval(a);
        };
        // The sampled n = 12 check runs once per base function.
        if (n == 6) {
          check(oracle::MaxSubmodularityViolation(fn, n));
        } else if (trial == 0) {
          check(oracle::SampledSubmodularityViolation(fn, n, 1000, rng));
        }
      }
    }
  }
  r.worst = worst;
  r.passed = r.failures == 0;
  std::ostringstream d;
  d << "largest f(AuB)+f(AnB)-f(A)-f(B) = " << worst << " (tolerance 1e-9)";
  r.detail = d.str();
  r.seconds = Seconds(start);
  return r;
}

SuiteResult RunClosedFormSuite(uint64_t seed, std::string* matching_variant,
                               double epsilon) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "closed-form";
  Rng rng(seed);
  std::uniform_int_distribution<int> size(1, 4);
  std::uniform_int_distribution<int> width(3, 16);
  const double temperature = 0.7;
  const double eps = epsilon;
  double worst_fl = 0.0;
  double worst_ld = 0.0;
  bool ap_n = true;
  bool an_p = true;
  for (int trial = 0; trial < 50; ++trial) {
    const int na = size(rng), np = size(rng), nn = size(rng);
    const Batch b = oracle::RandomBatch(na, np, nn, width(rng), rng);
    const SimilarityKernel k = StackedKernel(b, temperature);
    const std::vector<int> all = Iota(b.size());
    const std::vector<int> a(all.begin(), all.begin() + na);
    const std::vector<int> p(all.begin() + na, all.begin() + na + np);
    const std::vector<int> n(all.begin() + na + np, all.end());

    const oracle::SetFn fl = [&](std::span<const int> x) {
      return oracle::FacilityLocation(k.entries, all, x);
    };
    const double fl_def = oracle::Scmi(fl, a, n, p);
    const double fl_fast = FlcmiLoss(b, temperature).value * 3.0 * na;
    worst_fl = std::max(worst_fl, std::abs(fl_fast - fl_def));

    const oracle::SetFn ld = [&](std::span<const int> x) {
      return oracle::LogDet(k.entries, x, eps);
    };
    const double ld_def = oracle::Scmi(ld, a, n, p);
    const double ld_fast = LogDetCmiLoss(b, temperature, eps).value * 3.0 * na;
    worst_ld = std::max(worst_ld, std::abs(ld_fast - ld_def));

    const LogDetCmiForms forms = EvaluateLogDetCmiForms(b, temperature, eps);
    ap_n = ap_n && std::abs(forms.ratio_ap_n - ld_def) <= 1e-6;
    an_p = an_p && std::abs(forms.ratio_an_p - ld_def) <= 1e-6;
    r.cases += 2;
  }
  r.failures = (worst_fl > 1e-8) + (worst_ld > 1e-6);
  r.worst = std::max(worst_fl, worst_ld);
  r.passed = r.failures == 0;
  const std::string variant = ap_n && an_p ? "both"
                              : ap_n       ? "ratio_ap_n"
                              : an_p       ? "ratio_an_p"
                                           : "none";
  if (matching_variant != nullptr) *matching_variant = variant;
  std::ostringstream d;
  d << "max |FLCMI*3|A| - SCMI_FL| = " << worst_fl
    << ", max |LogDetCMI*3|A| - SCMI_LogDet| = " << worst_ld
    << ", matching ratio form: " << variant;
  r.detail = d.str();
  r.seconds = Seconds(start);
  return r;
}

SuiteResult RunGreedySuite(uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "greedy";
  Rng rng(seed);
  const int n = 12;
  const int k = 3;
  const double bound = 1.0 - std::exp(-1.0);
  double worst_ratio = INFINITY;
  int mismatches = 0;
  for (int trial = 0; trial < 20; ++trial) {
    const SimilarityKernel kernel =
        CosineKernel(oracle::RandomEmbeddings(n, 5, rng, true), 1.0);
    const std::vector<int> all = Iota(n);
    const oracle::SetFn f = [&](std::span<const int> x) {
      return oracle::FacilityLocation(kernel.entries, all, x);
    };
    const oracle::Optimum opt = oracle::BestSubset(f, n, k);
    FacilityLocationGain naive_obj(kernel, all);
    const GreedyResult naive = GreedyMax(naive_obj, all, k);
    FacilityLocationGain lazy_obj(kernel, all);
    const GreedyResult lazy = LazyGreedyMax(lazy_obj, all, k);
    const double value = f(naive.selected);
    const double ratio = value / opt.value;
    worst_ratio = std::min(worst_ratio, ratio);
    const bool same = naive.selected == lazy.selected;
    mismatches += !same;
    ++r.cases;
    if (value < bound * opt.value - 1e-12 || !same) ++r.failures;
  }
  r.worst = worst_ratio;
  r.passed = r.failures == 0;
  std::ostringstream d;
  d << "min greedy/OPT = " << worst_ratio << " (bound " << bound
    << "), lazy/naive mismatches = " << mismatches;
  r.detail = d.str();
  r.seconds = Seconds(start);
  return r;
}

SuiteResult RunGradientSuite(uint64_t seed) {
  const auto start = Clock::now();
  SuiteResult r;
  r.name = "gradients";
  Rng rng(seed);
  const double temperature = 0.7;
  const double step = 1e-5;
  const double tolerance = 1e-4;
  double worst = 0.0;
  int resampled = 0;
  for (LossKind kind : {LossKind::kFlcmi, LossKind::kLogDetCmi}) {
    const LossFunction loss = [kind, temperature](const Batch& b) {
      return EvaluateLoss(kind, b, temperature, kDefaultLogDetEpsilon);
    };
    int done = 0;
    for (int attempt = 0; done < 10 && attempt < 200; ++attempt) {
      const Batch b = oracle::RandomBatch(4, 4, 4, 16, rng);
      const GradCheckReport rep = GradCheck(loss, b, step, tolerance);
      if (rep.tie_detected) {
        ++resampled;
        continue;
      }
      ++done;
      ++r.cases;
      worst = std::max(worst, rep.max_rel_error);
      if (!rep.passed) ++r.failures;
    }
    if (done < 10) ++r.failures;
  }
  r.worst = worst;
  r.passed = r.failures == 0;
  std::ostringstream d;
  d << "max relative error = " << worst << " (tolerance " << tolerance
    << "), batches resampled near kinks = " << resampled;
  r.detail = d.str();
  r.seconds = Seconds(start);
  return r;
}

VerifyReport RunVerify(uint64_t seed, double epsilon) {
  if (!(epsilon >= 0.0) || !std::isfinite(epsilon)) {
    throw Error(ErrorCode::kInvalidArgument,
                "epsilon must be a finite non-negative number");
  }
  VerifyReport report;
  report.suites.push_back(RunSubmodularitySuite(seed, epsilon));
  report.suites.push_back(
      RunClosedFormSuite(seed + 1, &report.logdet_variant, epsilon));
  report.suites.push_back(RunGreedySuite(seed + 2));
  report.suites.push_back(RunGradientSuite(seed + 3));
  report.passed = std::all_of(report.suites.begin(), report.suites.end(),
                              [](const SuiteResult& s) { return s.passed; });
  return report;
}

std::string VerifyReportJson(const VerifyReport& report) {
  nlohmann::json suites = nlohmann::json::array();
  for (const SuiteResult& s : report.suites) {
    suites.push_back({{"name", s.name},
                      {"passed", s.passed},
                      {"seconds", s.seconds},
                      {"cases", s.cases},
                      {"failures", s.failures},
                      {"worst", s.worst},
                      {"detail", s.detail}});
  }
  nlohmann::json j = {{"passed", report.passed},
                      {"logdet_cmi_matching_form", report.logdet_variant},
                      {"suites", suites}};
  return j.dump(2) + "\n";
}

}  // namespace subfair
