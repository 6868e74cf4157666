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

#ifndef PROBIT_ERRORS_H_
#define PROBIT_ERRORS_H_

#include <stdexcept>
#include <string>

namespace probit {

// Violated operation precondition (dimension mismatch, probability outside
// [0, 1], empty input). Indicates a programming error in the caller.
class PreconditionError : public std::invalid_argument {
 public:
  explicit PreconditionError(const std::string& what)
      : std::invalid_argument(what) {}
};

// Invalid experiment configuration, e.g. a quantization range too small for
// the requested privacy level or an unknown key in a config file.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace probit

#endif  // PROBIT_ERRORS_H_
