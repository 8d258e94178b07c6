/**
 * Copyright 2026 The drcinv Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DRCINV_ERROR_H_
#define DRCINV_ERROR_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace drc {

enum class ErrorCode {
  // parameter validation
  kNonPositiveTimeConstant,
  kRatioBelowOne,
  kInvalidDetector,
  kPositiveThreshold,
  kUnknownCatalog,
  kUnknownProfile,
  kInvalidProfileFile,
  // numeric preconditions
  kNonPositiveInput,
  kInvalidConfig,
  kSilentClip,
  kLengthMismatch,
  kRateMismatch,
  kZeroReference,
  kClipTooShort,
  kEmptyInput,
  kEmptyCatalog,
  // io
  kFileNotFound,
  kUnsupportedFormat,
  kCorruptFile,
  kIoError,
};

std::string_view ErrorCodeName(ErrorCode code);

// All library failures surface as drc::Error; code() identifies the failure
// class and what() carries a human-readable description.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

// Raised by parameter validation; field() names the offending parameter.
class ValidationError : public Error {
 public:
  ValidationError(ErrorCode code, std::string field, const std::string& message)
      : Error(code, message), field_(std::move(field)) {}

  const std::string& field() const noexcept { return field_; }

 private:
  std::string field_;
};

} // namespace drc

#endif // DRCINV_ERROR_H_
