// Copyright 2026 The plapreg Authors
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

#include "plapreg/error.hpp"

namespace plapreg {

std::string_view ErrorCodeName(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kMalformedCsv: return "MalformedCsv";
    case ErrorCode::kUnknownColumn: return "UnknownColumn";
    case ErrorCode::kEmptyAfterCleaning: return "EmptyAfterCleaning";
    case ErrorCode::kEmptyFitSet: return "EmptyFitSet";
    case ErrorCode::kZeroVariance: return "ZeroVariance";
    case ErrorCode::kIoError: return "IoError";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kNonPositiveEpsilon: return "NonPositiveEpsilon";
    case ErrorCode::kKTooLarge: return "KTooLarge";
    case ErrorCode::kComponentWithoutLabel: return "ComponentWithoutLabel";
    case ErrorCode::kPOutOfRange: return "POutOfRange";
    case ErrorCode::kIsolatedVertex: return "IsolatedVertex";
    case ErrorCode::kSingularSystem: return "SingularSystem";
    case ErrorCode::kUnsupportedDegree: return "UnsupportedDegree";
    case ErrorCode::kSingularNormalMatrix: return "SingularNormalMatrix";
    case ErrorCode::kSingularKernelSystem: return "SingularKernelSystem";
    case ErrorCode::kZeroDenominator: return "ZeroDenominator";
    case ErrorCode::kLengthMismatch: return "LengthMismatch";
    case ErrorCode::kKOutOfRange: return "KOutOfRange";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(ErrorCodeName(code)) + ": " + message),
      code_(code) {}

}  // namespace plapreg
