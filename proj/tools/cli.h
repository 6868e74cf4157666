// Copyright 2026 The PRoBit Lab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PROBIT_TOOLS_CLI_H_
#define PROBIT_TOOLS_CLI_H_

#include <ostream>

namespace probit::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitRuntime = 1;
inline constexpr int kExitUsage = 2;

// Environment variable consulted when --out is not given.
inline constexpr const char* kOutDirEnv = "PROBIT_OUT_DIR";

// Entry point of the probit tool: run, verify and sweep subcommands.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace probit::cli

#endif  // PROBIT_TOOLS_CLI_H_
