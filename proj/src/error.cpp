// Copyright 2026 The bvt Authors
// SPDX-License-Identifier: Apache-2.0
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

#include "bvt/error.hpp"

namespace bvt {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kInvalidBinaryValue: return "InvalidBinaryValue";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kEncodingMismatch: return "EncodingMismatch";
    case ErrorCode::kInvalidInput: return "InvalidInput";
    case ErrorCode::kDegenerateInput: return "DegenerateInput";
    case ErrorCode::kTooLarge: return "TooLarge";
    case ErrorCode::kInvalidBeta: return "InvalidBeta";
    case ErrorCode::kNumericalFailure: return "NumericalFailure";
    case ErrorCode::kConfigError: return "ConfigError";
    case ErrorCode::kFormatError: return "FormatError";
    case ErrorCode::kIoError: return "IoError";
  }
  return "Unknown";
}

}  // namespace bvt
