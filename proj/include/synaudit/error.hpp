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

#ifndef SYNAUDIT_ERROR_HPP_
#define SYNAUDIT_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace synaudit {

// Every failure raised by the library carries one of these codes. The CLI
// maps them onto process exit codes (see ErrorCategory).
enum class ErrorCode {
  // tensor_io
  kMagicMismatch,
  kUnsupportedDtype,
  kUnsupportedOrder,
  kTruncatedPayload,
  kMalformedHeader,
  kIoFailure,
  kMalformedManifest,
  kUnknownLabel,
  kUnknownOrigin,
  kDuplicateId,
  kRowCountMismatch,
  kInsufficientSamples,
  kOriginMismatch,
  // shared
  kShapeMismatch,
  kInvalidArgument,
  kEmptyInput,
  // embedding
  kSyntheticContamination,
  kDimTooLarge,
  kDegenerateData,
  // attack
  kEmptySynthetic,
  kMissingEmbeddingModel,
  kCutoffTooLarge,
  kEmptyReference,
  kMissingOrigin,
  // stats
  kSingleClass,
  kOutOfDomain,
  // conditioning
  kIndexOutOfRange,
  kStepOutOfRange,
  kDegenerateMorph,
  kDimensionMismatch,
  // classifier
  kDivergenceDetected,
  // cli
  kInvalidConfig,
  kInternal,
};

std::string_view error_code_name(ErrorCode code);

// Coarse grouping used for exit codes: validation problems (3), I/O (4) and
// broken internal invariants (5).
enum class ErrorCategory { kValidation, kIo, kInternal };

ErrorCategory error_category(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace synaudit

#endif  // SYNAUDIT_ERROR_HPP_
