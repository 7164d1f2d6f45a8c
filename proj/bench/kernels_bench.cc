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


// Serial reference kernels against their OpenMP versions. Run with
// SUBFAIR_THREADS unset to use every core.

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "subfair/greedy.h"
#include "subfair/kernel.h"
#include "subfair/loss.h"
#include "subfair/model.h"
#include "subfair/parallel.h"
#include "subfair/serial.h"
#include "subfair/submodular.h"

namespace subfair {
namespace {

Eigen::MatrixXd Gaussian(int n, int m, uint64_t seed) {
  Rng rng(seed);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd x(n, m);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) x(i, j) = normal(rng);
  }
  return x;
}

void BM_CosineKernelSerial(benchmark::State& state) {
  const EmbeddingMatrix e = Gaussian(static_cast<int>(state.range(0)), 32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(serial::CosineKernel(e));
}

void BM_CosineKernelParallel(benchmark::State& state) {
  const EmbeddingMatrix e = Gaussian(static_cast<int>(state.range(0)), 32, 1);
  for (auto _ : state) benchmark::DoNotOptimize(CosineKernel(e));
}

struct GainSetup {
  SimilarityKernel kernel;
  std::vector<int> all;
};

GainSetup MakeGainSetup(int n) {
  GainSetup g{CosineKernel(Gaussian(n, 16, 2)), std::vector<int>(n)};
  for (int i = 0; i < n; ++i) g.all[i] = i;
  return g;
}

void BM_ScoreCandidatesSerial(benchmark::State& state) {
  const GainSetup g = MakeGainSetup(static_cast<int>(state.range(0)));
  LogDetGain objective(g.kernel, kDefaultLogDetEpsilon, g.all);
  for (int v = 0; v < 8; ++v) objective.Add(v * 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::ScoreCandidates(objective, g.all));
  }
}

void BM_ScoreCandidatesParallel(benchmark::State& state) {
  const GainSetup g = MakeGainSetup(static_cast<int>(state.range(0)));
  LogDetGain objective(g.kernel, kDefaultLogDetEpsilon, g.all);
  for (int v = 0; v < 8; ++v) objective.Add(v * 7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ScoreCandidates(objective, g.all));
  }
}

void BM_FlcmiTermsSerial(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SimilarityKernel kernel = CosineKernel(Gaussian(3 * k, 16, 3), 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::ComputeFlcmiTerms(kernel, k, k, k));
  }
}

void BM_FlcmiTermsParallel(benchmark::State& state) {
  const int k = static_cast<int>(state.range(0));
  const SimilarityKernel kernel = CosineKernel(Gaussian(3 * k, 16, 3), 0.7);
  for (auto _ : state) {
    benchmark::DoNotOptimize(ComputeFlcmiTerms(kernel, k, k, k));
  }
}

void BM_DenseForwardSerial(benchmark::State& state) {
  Rng rng(4);
  const DenseLayer layer = InitDense(64, 64, rng);
  const Eigen::MatrixXd x = Gaussian(static_cast<int>(state.range(0)), 64, 5);
  for (auto _ : state) {
    benchmark::DoNotOptimize(serial::DenseForward(x, layer.w, layer.b, true));
  }
}

void BM_DenseForwardParallel(benchmark::State& state) {
  Rng rng(4);
  const DenseLayer layer = InitDense(64, 64, rng);
  const Eigen::MatrixXd x = Gaussian(static_cast<int>(state.range(0)), 64, 5);
  for (auto _ : state) benchmark::DoNotOptimize(layer.Forward(x, true));
}

BENCHMARK(BM_CosineKernelSerial)->Arg(256)->Arg(1024);
BENCHMARK(BM_CosineKernelParallel)->Arg(256)->Arg(1024);
BENCHMARK(BM_ScoreCandidatesSerial)->Arg(512)->Arg(2048);
BENCHMARK(BM_ScoreCandidatesParallel)->Arg(512)->Arg(2048);
BENCHMARK(BM_FlcmiTermsSerial)->Arg(16)->Arg(64);
BENCHMARK(BM_FlcmiTermsParallel)->Arg(16)->Arg(64);
BENCHMARK(BM_DenseForwardSerial)->Arg(1024)->Arg(8192);
BENCHMARK(BM_DenseForwardParallel)->Arg(1024)->Arg(8192);

}  // namespace
}  // namespace subfair

BENCHMARK_MAIN();
