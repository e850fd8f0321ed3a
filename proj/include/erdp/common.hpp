// Copyright 2026 The erdp Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace erdp {

enum class ErrorCode {
  kInvalidArgument,
  kNotFound,
  kFailedPrecondition,
  kIo,
};

// All library failures are reported through this exception. The code maps
// onto HTTP statuses in the service layer.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void invalid_argument(const std::string& what) {
  throw Error(ErrorCode::kInvalidArgument, what);
}

[[noreturn]] inline void not_found(const std::string& what) {
  throw Error(ErrorCode::kNotFound, what);
}

[[noreturn]] inline void failed_precondition(const std::string& what) {
  throw Error(ErrorCode::kFailedPrecondition, what);
}

[[noreturn]] inline void io_error(const std::string& what) {
  throw Error(ErrorCode::kIo, what);
}

// Relative slack used when comparing accumulated privacy loss against a
// budget, so that e.g. ln(1/e^-15)/150 still fits a budget of 0.1.
inline constexpr double kBudgetSlack = 1e-9;

inline bool within_budget(double loss, double budget) {
  return loss <= budget * (1.0 + kBudgetSlack);
}

}  // namespace erdp
