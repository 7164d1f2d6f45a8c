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

#ifndef SUBFAIR_ERROR_H_
#define SUBFAIR_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace subfair {

enum class ErrorCode {
  kInvalidArgument,
  kParse,
  kDimensionMismatch,
  kDuplicateId,
  kEmptyPool,
  kOutOfRange,
  kNumericalDomain,
  kNoValidPair,
  kNonFinite,
  kIo,
};

std::string_view ErrorCodeName(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// CLI and the tests can dispatch on it without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument:
      return "invalid-argument";
    case ErrorCode::kParse:
      return "parse";
    case ErrorCode::kDimensionMismatch:
      return "dimension-mismatch";
    case ErrorCode::kDuplicateId:
      return "duplicate-id";
    case ErrorCode::kEmptyPool:
      return "empty-pool";
    case ErrorCode::kOutOfRange:
      return "out-of-range";
    case ErrorCode::kNumericalDomain:
      return "numerical-domain";
    case ErrorCode::kNoValidPair:
      return "no-valid-pair";
    case ErrorCode::kNonFinite:
      return "non-finite";
    case ErrorCode::kIo:
      return "io";
  }
  return "unknown";
}

}  // namespace subfair

#endif  // SUBFAIR_ERROR_H_
