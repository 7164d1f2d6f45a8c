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


#ifndef SUBFAIR_TESTS_TEST_UTIL_H_
#define SUBFAIR_TESTS_TEST_UTIL_H_

#include <functional>

#include <gtest/gtest.h>

#include "subfair/error.h"

namespace subfair::testing {

// Code of the subfair::Error thrown by `f`; records a failure when nothing
// is thrown.
inline ErrorCode CodeOf(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no error raised";
  return ErrorCode::kIo;
}

}  // namespace subfair::testing

#endif  // SUBFAIR_TESTS_TEST_UTIL_H_
