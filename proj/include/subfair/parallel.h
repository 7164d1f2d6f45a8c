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

#ifndef SUBFAIR_PARALLEL_H_
#define SUBFAIR_PARALLEL_H_

namespace subfair {

// Number of OpenMP threads used by the parallel kernels. Read once from the
// SUBFAIR_THREADS environment variable; defaults to the OpenMP maximum.
// Kernels only parallelize over independent output elements, so results do
// not depend on this value.
int ThreadCount();

// Overrides the thread count for the rest of the process (tests and bench).
// A value < 1 restores the environment/default setting.
void SetThreadCount(int threads);

}  // namespace subfair

#endif  // SUBFAIR_PARALLEL_H_
