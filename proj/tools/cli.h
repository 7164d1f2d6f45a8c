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

// The `subfair` command line: gen, mine-demo, train, eval and verify. Every
// command writes into an --out directory and leaves a manifest.json there.

#ifndef SUBFAIR_TOOLS_CLI_H_
#define SUBFAIR_TOOLS_CLI_H_

#include <ostream>
#include <string>
#include <vector>

namespace subfair::cli {

inline constexpr const char* kVersion = "0.1.0";

// Exit codes.
inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;      // runtime or input error
inline constexpr int kExitUsage = 2;      // bad flags
inline constexpr int kExitVerifyFail = 3;  // verify ran but a suite failed

// Parses `args` (without the program name) and runs the command. Reports go
// to `out`, diagnostics to `err`.
int Run(const std::vector<std::string>& args, std::ostream& out,
        std::ostream& err);

}  // namespace subfair::cli

#endif  // SUBFAIR_TOOLS_CLI_H_
