// Copyright 2026 The ciproof Authors
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
#include <string_view>

namespace ciproof {

enum class ErrorCode {
  kInvalidOverlap,
  kUniverseTooLarge,
  kMissingElements,
  kUnknownNode,
  kSelfLoop,
  kSameNode,
  kEmptyPart,
  kCoverageGap,
  kStatementNotSatisfied,
  kWrongElementSet,
  kPremiseNotSatisfied,
  kReducedGraphLosesSeparation,
  kUnknownElement,
  kDuplicateElement,
  kCyclicGraph,
  kInvalidOrder,
  kUnknownVariable,
  kSyntaxError,
  kDuplicateName,
  kInvalidArgument,
};

constexpr std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidOverlap: return "InvalidOverlap";
    case ErrorCode::kUniverseTooLarge: return "UniverseTooLarge";
    case ErrorCode::kMissingElements: return "MissingElements";
    case ErrorCode::kUnknownNode: return "UnknownNode";
    case ErrorCode::kSelfLoop: return "SelfLoop";
    case ErrorCode::kSameNode: return "SameNode";
    case ErrorCode::kEmptyPart: return "EmptyPart";
    case ErrorCode::kCoverageGap: return "CoverageGap";
    case ErrorCode::kStatementNotSatisfied: return "StatementNotSatisfied";
    case ErrorCode::kWrongElementSet: return "WrongElementSet";
    case ErrorCode::kPremiseNotSatisfied: return "PremiseNotSatisfied";
    case ErrorCode::kReducedGraphLosesSeparation: return "ReducedGraphLosesSeparation";
    case ErrorCode::kUnknownElement: return "UnknownElement";
    case ErrorCode::kDuplicateElement: return "DuplicateElement";
    case ErrorCode::kCyclicGraph: return "CyclicGraph";
    case ErrorCode::kInvalidOrder: return "InvalidOrder";
    case ErrorCode::kUnknownVariable: return "UnknownVariable";
    case ErrorCode::kSyntaxError: return "SyntaxError";
    case ErrorCode::kDuplicateName: return "DuplicateName";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

/// Every failure raised by the library. The code identifies the contract
/// that was violated; the message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code), detail_(message) {}

  ErrorCode code() const noexcept { return code_; }
  /// The message without the code prefix.
  const std::string& detail() const noexcept { return detail_; }

 private:
  ErrorCode code_;
  std::string detail_;
};

}  // namespace ciproof
