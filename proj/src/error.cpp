//
// Copyright 2026 The synaudit Authors
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
//

#include "synaudit/error.hpp"

namespace synaudit {

std::string_view error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMagicMismatch: return "MagicMismatch";
    case ErrorCode::kUnsupportedDtype: return "UnsupportedDtype";
    case ErrorCode::kUnsupportedOrder: return "UnsupportedOrder";
    case ErrorCode::kTruncatedPayload: return "TruncatedPayload";
    case ErrorCode::kMalformedHeader: return "MalformedHeader";
    case ErrorCode::kIoFailure: return "IoFailure";
    case ErrorCode::kMalformedManifest: return "MalformedManifest";
    case ErrorCode::kUnknownLabel: return "UnknownLabel";
    case ErrorCode::kUnknownOrigin: return "UnknownOrigin";
    case ErrorCode::kDuplicateId: return "DuplicateId";
    case ErrorCode::kRowCountMismatch: return "RowCountMismatch";
    case ErrorCode::kInsufficientSamples: return "InsufficientSamples";
    case ErrorCode::kOriginMismatch: return "OriginMismatch";
    case ErrorCode::kShapeMismatch: return "ShapeMismatch";
    case ErrorCode::kInvalidArgument: return "InvalidArgument";
    case ErrorCode::kEmptyInput: return "EmptyInput";
    case ErrorCode::kSyntheticContamination: return "SyntheticContamination";
    case ErrorCode::kDimTooLarge: return "DimTooLarge";
    case ErrorCode::kDegenerateData: return "DegenerateData";
    case ErrorCode::kEmptySynthetic: return "EmptySynthetic";
    case ErrorCode::kMissingEmbeddingModel: return "MissingEmbeddingModel";
    case ErrorCode::kCutoffTooLarge: return "CutoffTooLarge";
    case ErrorCode::kEmptyReference: return "EmptyReference";
    case ErrorCode::kMissingOrigin: return "MissingOrigin";
    case ErrorCode::kSingleClass: return "SingleClass";
    case ErrorCode::kOutOfDomain: return "OutOfDomain";
    case ErrorCode::kIndexOutOfRange: return "IndexOutOfRange";
    case ErrorCode::kStepOutOfRange: return "StepOutOfRange";
    case ErrorCode::kDegenerateMorph: return "DegenerateMorph";
    case ErrorCode::kDimensionMismatch: return "DimensionMismatch";
    case ErrorCode::kDivergenceDetected: return "DivergenceDetected";
    case ErrorCode::kInvalidConfig: return "InvalidConfig";
    case ErrorCode::kInternal: return "Internal";
  }
  return "Unknown";
}

ErrorCategory error_category(ErrorCode code) {
  switch (code) {
    case ErrorCode::kMagicMismatch:
    case ErrorCode::kUnsupportedDtype:
    case ErrorCode::kUnsupportedOrder:
    case ErrorCode::kTruncatedPayload:
    case ErrorCode::kMalformedHeader:
    case ErrorCode::kIoFailure:
      return ErrorCategory::kIo;
    case ErrorCode::kDivergenceDetected:
    case ErrorCode::kInternal:
      return ErrorCategory::kInternal;
    default:
      return ErrorCategory::kValidation;
  }
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(error_code_name(code)) + ": " + message),
      code_(code) {}

}  // namespace synaudit
