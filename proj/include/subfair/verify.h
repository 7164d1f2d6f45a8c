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

// Self-verification suites that pit the library against the brute-force
// oracles: submodularity, closed-form equivalence of the losses, the greedy
// approximation bound, and gradient checks.

#ifndef SUBFAIR_VERIFY_H_
#define SUBFAIR_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

namespace subfair {

struct SuiteResult {
  std::string name;
  bool passed = false;
  double seconds = 0.0;
  int cases = 0;
  int failures = 0;
  double worst = 0.0;  // suite-specific worst statistic, see `detail`
  std::string detail;
};

// Exhaustive subset pairs at n = 6 over 10 kernels and 1000 sampled pairs at
// n = 12, for facility location (non-negative cosine kernels) and
// log-determinant (signed cosine kernels). Tolerance 1e-9.
SuiteResult RunSubmodularitySuite(uint64_t seed, double epsilon = 1e-4);

// 50 random instances per loss with set sizes 1..4: FLCMI * 3|A| against the
// definitional facility-location value (1e-8) and the LogDet loss * 3|A|
// against the definitional log-determinant value (1e-6). Also decides which
// ratio-of-determinants form reproduces the definitional value on every
// instance: "ratio_ap_n", "ratio_an_p", "both" or "none".
SuiteResult RunClosedFormSuite(uint64_t seed, std::string* matching_variant,
                               double epsilon = 1e-4);

// 20 facility-location instances with n = 12, k = 3: greedy value at least
// (1 - 1/e) OPT and lazy selection identical to naive selection.
SuiteResult RunGreedySuite(uint64_t seed);

// 10 non-degenerate 4/4/4 batches per loss, central differences with step
// 1e-5, relative tolerance 1e-4.
SuiteResult RunGradientSuite(uint64_t seed);

struct VerifyReport {
  std::vector<SuiteResult> suites;
  std::string logdet_variant;
  bool passed = false;
};

// `epsilon` is the log-determinant regularizer used by the submodularity and
// closed-form suites; negative values are rejected with kInvalidArgument.
VerifyReport RunVerify(uint64_t seed, double epsilon = 1e-4);
std::string VerifyReportJson(const VerifyReport& report);

}  // namespace subfair

#endif  // SUBFAIR_VERIFY_H_
