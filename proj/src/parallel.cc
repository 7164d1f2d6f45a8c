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

#include "subfair/parallel.h"

#include <omp.h>

#include <atomic>
#include <cstdlib>
#include <string>

namespace subfair {
namespace {

std::atomic<int> override_threads{0};

int EnvThreads() {
  static const int threads = [] {
    const char* env = std::getenv("SUBFAIR_THREADS");
    if (env != nullptr) {
      try {
        const int value = std::stoi(env);
        if (value >= 1) return value;
      } catch (const std::exception&) {
        // Fall through to the OpenMP default.
      }
    }
    return omp_get_max_threads();
  }();
  return threads;
}

}  // namespace

int ThreadCount() {
  const int forced = override_threads.load();
  return forced >= 1 ? forced : EnvThreads();
}

void SetThreadCount(int threads) { override_threads.store(threads); }

}  // namespace subfair
