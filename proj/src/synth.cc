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

#include "subfair/synth.h"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <numeric>

#include <json.hpp>

#include "subfair/error.h"

namespace subfair {
namespace {

double Round9(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.9g", v);
  return std::strtod(buf, nullptr);
}

struct Builder {
  std::vector<std::vector<double>> rows;
  std::vector<int> t;
  std::vector<int> s;

  void Add(std::vector<double> x, int target, int sensitive) {
    for (double& v : x) v = Round9(v);
    rows.push_back(std::move(x));
    t.push_back(target);
    s.push_back(sensitive);
  }

  LabeledPool Build(int dim) const {
    LabeledPool pool;
    pool.features.resize(static_cast<Eigen::Index>(rows.size()), dim);
    for (size_t i = 0; i < rows.size(); ++i) {
      for (int j = 0; j < dim; ++j) {
        pool.features(static_cast<Eigen::Index>(i), j) = rows[i][j];
      }
    }
    pool.targets = t;
    pool.sensitives = s;
    pool.Validate();
    return pool;
  }
};

// Exactly floor(n / 2) zeros and the rest ones, in random order.
std::vector<int> HalfSplit(int n, Rng& rng) {
  std::vector<int> s(n, 1);
  std::fill(s.begin(), s.begin() + n / 2, 0);
  std::shuffle(s.begin(), s.end(), rng);
  return s;
}

LabeledPool TwoCluster(const SynthSpec& spec, Rng& rng) {
  if (spec.n_major < 2 || spec.n_minor < 2) {
    throw Error(ErrorCode::kInvalidArgument,
                "each cluster needs at least two points");
  }
  if (!(spec.sigma_major > 0.0) || !(spec.sigma_minor > 0.0) ||
      !(spec.separation >= 0.0)) {
    throw Error(ErrorCode::kInvalidArgument,
                "cluster spreads must be positive and separation >= 0");
  }
  const double half = 0.5 * spec.separation * spec.sigma_minor;
  const double centers[2] = {-half, half};
  const int counts[2] = {spec.n_major, spec.n_minor};
  const double sigmas[2] = {spec.sigma_major, spec.sigma_minor};
  Builder b;
  for (int c = 0; c < 2; ++c) {
    std::normal_distribution<double> noise(0.0, sigmas[c]);
    const std::vector<int> s = HalfSplit(counts[c], rng);
    for (int i = 0; i < counts[c]; ++i) {
      const double x = centers[c] + noise(rng);
      const double y = spec.center_height + noise(rng);
      b.Add({x, y}, c, s[i]);
    }
  }
  return b.Build(2);
}

void Fairbias(const SynthSpec& spec, Rng& rng, SynthData& out) {
  if (spec.alpha < 1) {
    throw Error(ErrorCode::kInvalidArgument, "alpha must be >= 1");
  }
  if (spec.rho < 0.0 || spec.rho > 1.0) {
    throw Error(ErrorCode::kInvalidArgument, "rho must lie in [0, 1]");
  }
  if (spec.dim < 2) {
    throw Error(ErrorCode::kInvalidArgument, "fairbias needs dim >= 2");
  }
  const int per_group = spec.n / 2;
  const int minority = per_group / (spec.alpha + 1);
  if (minority < 1 || spec.test_per_cell < 1) {
    throw Error(ErrorCode::kInvalidArgument,
                "n too small for the requested alpha");
  }
  const int majority = spec.alpha * minority;
  std::normal_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> nuisance(0.0, spec.nuisance_sigma);
  std::bernoulli_distribution agree(0.5 * (1.0 + spec.rho));
  auto draw = [&](int t, int s) {
    std::vector<double> x(spec.dim);
    x[0] = (2 * t - 1) * spec.target_shift + unit(rng);
    const int side = agree(rng) ? (2 * s - 1) : -(2 * s - 1);
    x[1] = side * spec.nuisance_mean + nuisance(rng);
    for (int j = 2; j < spec.dim; ++j) x[j] = unit(rng);
    return x;
  };
  Builder train;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      // s = 0 favors t = 1, s = 1 favors t = 0.
      const int count = (t == 1) == (s == 0) ? majority : minority;
      for (int i = 0; i < count; ++i) train.Add(draw(t, s), t, s);
    }
  }
  out.train = train.Build(spec.dim);
  Builder test;
  for (int s = 0; s < 2; ++s) {
    for (int t = 0; t < 2; ++t) {
      for (int i = 0; i < spec.test_per_cell; ++i) test.Add(draw(t, s), t, s);
    }
  }
  out.test = test.Build(spec.dim);
}

}  // namespace

std::string ScenarioName(Scenario scenario) {
  switch (scenario) {
    case Scenario::kBalanced:
      return "balanced";
    case Scenario::kImbalanced:
      return "imbalanced";
    case Scenario::kOverlap:
      return "overlap";
    case Scenario::kFairbias:
      return "fairbias";
  }
  return "unknown";
}

Scenario ParseScenario(const std::string& name) {
  if (name == "balanced") return Scenario::kBalanced;
  if (name == "imbalanced") return Scenario::kImbalanced;
  if (name == "overlap") return Scenario::kOverlap;
  if (name == "fairbias") return Scenario::kFairbias;
  throw Error(ErrorCode::kInvalidArgument, "unknown scenario '" + name + "'");
}

SynthSpec DefaultSpec(Scenario scenario) {
  SynthSpec spec;
  spec.scenario = scenario;
  if (scenario == Scenario::kBalanced) {
    spec.n_major = 200;
    spec.n_minor = 200;
    spec.sigma_major = spec.sigma_minor;
  } else if (scenario == Scenario::kOverlap) {
    spec.separation = 1.5;
  }
  return spec;
}

SynthData Generate(const SynthSpec& spec) {
  Rng rng(spec.seed);
  SynthData out;
  if (spec.scenario == Scenario::kFairbias) {
    Fairbias(spec, rng, out);
  } else {
    out.train = TwoCluster(spec, rng);
  }
  return out;
}

std::string SynthSidecarJson(const SynthSpec& spec) {
  nlohmann::json j;
  j["scenario"] = ScenarioName(spec.scenario);
  j["seed"] = spec.seed;
  if (spec.scenario == Scenario::kFairbias) {
    const int minority = (spec.n / 2) / (spec.alpha + 1);
    j["n"] = spec.n;
    j["alpha"] = spec.alpha;
    j["rho"] = spec.rho;
    j["dim"] = spec.dim;
    j["target_shift"] = spec.target_shift;
    j["nuisance_mean"] = spec.nuisance_mean;
    j["nuisance_sigma"] = spec.nuisance_sigma;
    j["group_counts"] = {{"minority", minority},
                         {"majority", spec.alpha * minority}};
    j["test_per_cell"] = spec.test_per_cell;
  } else {
    j["n_major"] = spec.n_major;
    j["n_minor"] = spec.n_minor;
    j["alpha"] = static_cast<double>(spec.n_major) / spec.n_minor;
    j["sigma_major"] = spec.sigma_major;
    j["sigma_minor"] = spec.sigma_minor;
    j["separation_in_sigma_minor"] = spec.separation;
    j["center_height"] = spec.center_height;
  }
  return j.dump(2) + "\n";
}

}  // namespace subfair
