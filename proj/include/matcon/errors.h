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

#ifndef MATCON_ERRORS_H_
#define MATCON_ERRORS_H_

#include <stdexcept>
#include <string>

namespace matcon {

// Exit codes used by the command-line front end.
enum class ExitCode : int {
  kOk = 0,
  kValidation = 1,
  kInfeasible = 2,
  kCapExceeded = 3,
};

class Error : public std::runtime_error {
 public:
  Error(ExitCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ExitCode code() const { return code_; }

 private:
  ExitCode code_;
};

// Malformed or invariant-violating input.
class ValidationError : public Error {
 public:
  explicit ValidationError(const std::string& what)
      : Error(ExitCode::kValidation, what) {}
};

// Parameters that admit no valid construction (violated preconditions).
class InfeasibleError : public Error {
 public:
  explicit InfeasibleError(const std::string& what)
      : Error(ExitCode::kInfeasible, what) {}
};

// Enumeration or sampling budget above the configured cap.
class CapExceededError : public Error {
 public:
  explicit CapExceededError(const std::string& what)
      : Error(ExitCode::kCapExceeded, what) {}
};

}  // namespace matcon

#endif  // MATCON_ERRORS_H_
