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

// Synthetic pools: 2-D two-cluster sets for inspecting the miner, and a
// biased multi-dimensional set where the sensitive label leaks into the
// features and is correlated with the target in training data only.

#ifndef SUBFAIR_SYNTH_H_
#define SUBFAIR_SYNTH_H_

#include <cstdint>
#include <optional>
#include <string>

#include "subfair/pool.h"

namespace subfair {

enum class Scenario { kBalanced, kImbalanced, kOverlap, kFairbias };

std::string ScenarioName(Scenario scenario);
Scenario ParseScenario(const std::string& name);

struct SynthSpec {
  Scenario scenario = Scenario::kImbalanced;
  uint64_t seed = 0;

  // Two-cluster scenarios. Cluster A (t = 0) is the abundant one.
  int n_major = 500;
  int n_minor = 100;
  double sigma_major = 1.5;
  double sigma_minor = 0.6;
  // Distance between centroids, in units of sigma_minor.
  double separation = 6.0;
  // Both centroids sit on the line y = center_height, so cosine similarity
  // orders points by their position along the cluster axis.
  double center_height = 6.0;

  // Fairbias scenario.
  int n = 800;
  int alpha = 4;      // within s = 0, t = 1 is alpha times t = 0; mirrored in s = 1
  double rho = 0.8;   // agreement between s and the sign of the nuisance feature
  int dim = 8;
  double target_shift = 1.0;   // x0 mean is +-target_shift
  double nuisance_mean = 2.0;  // |x1| mean
  double nuisance_sigma = 0.5;
  int test_per_cell = 1000;
};

// Scenario defaults: balanced = 200 + 200 with a shared spread, overlap =
// imbalanced counts with separation 1.5.
SynthSpec DefaultSpec(Scenario scenario);

struct SynthData {
  LabeledPool train;
  std::optional<LabeledPool> test;  // fairbias only: equal (t, s) cell counts
};

// Dispatches on spec.scenario. Coordinates are rounded to 9 significant
// digits so the CSV form reproduces them exactly.
SynthData Generate(const SynthSpec& spec);

// Spec and seed as JSON.
std::string SynthSidecarJson(const SynthSpec& spec);

}  // namespace subfair

#endif  // SUBFAIR_SYNTH_H_
