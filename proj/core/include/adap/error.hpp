// Copyright 2026 The ADAP Authors
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

#ifndef ADAP_ERROR_HPP_
#define ADAP_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace adap {

enum class ErrorCode {
  kNonFinite,
  kHorizonMismatch,
  kJointCountMismatch,
  kJointLimitViolation,
  kDegenerateRange,
  kNoImpact,
  kDegenerateMotion,
  kEmptyDataset,
  kNotTrained,
  kSingularKernel,
  kUninitialized,
  kDegenerateNeighbors,
  kInsufficientDiversity,
  kParseError,
  kSchemaError,
  kCorruptCheckpoint,
  kConfigMismatch,
  kAborted,
  kIo,
  kInvalidArgument,
};

std::string_view ToString(ErrorCode code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(ToString(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace adap

#endif  // ADAP_ERROR_HPP_
