// Copyright 2026 The spircap authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//   http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace spir {

enum class ErrorCode {
  kInvalidArgument,
  kParseError,
  kIndexOutOfRange,
  kEmptySet,
  kEmptyPattern,
  kFullSetPresent,
  kMismatchedServers,
  kUnboundedLp,
  kInfeasibleLp,
  kDualityGap,
  kDivisionByZero,
  kFieldMismatch,
  kSingularMatrix,
  kNotEnoughPoints,
  kFNotGreaterThanOne,
  kInfeasibleY,
  kThetaOutOfRange,
  kSingularStack,
  kBudgetExceeded,
};

inline std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kParseError: return "ParseError";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kEmptySet: return "EmptySet";
    case ErrorCode::kEmptyPattern: return "EmptyPattern";
    case ErrorCode::kFullSetPresent: return "FullSetPresent";
    case ErrorCode::kMismatchedServers: return "MismatchedServers";
    case ErrorCode::kUnboundedLp: return "UnboundedLp";
    case ErrorCode::kInfeasibleLp: return "InfeasibleLp";
    case ErrorCode::kDualityGap: return "DualityGap";
    case ErrorCode::kDivisionByZero: return "DivisionByZero";
    case ErrorCode::kFieldMismatch: return "FieldMismatch";
    case ErrorCode::kSingularMatrix: return "SingularMatrix";
    case ErrorCode::kNotEnoughPoints: return "NotEnoughPoints";
    case ErrorCode::kFNotGreaterThanOne: return "FNotGreaterThanOne";
    case ErrorCode::kInfeasibleY: return "InfeasibleY";
    case ErrorCode::kThetaOutOfRange: return "ThetaOutOfRange";
    case ErrorCode::kSingularStack: return "SingularStack";
    case ErrorCode::kBudgetExceeded: return "BudgetExceeded";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

#define SPIR_ENFORCE(cond, code, msg)        \
  do {                                       \
    if (!(cond)) {                           \
      throw ::spir::Error((code), (msg));    \
    }                                        \
  } while (false)

}  // namespace spir
