// Copyright 2026 The wdepth Authors
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

#ifndef WDEPTH_ERRORS_H_
#define WDEPTH_ERRORS_H_

#include <stdexcept>
#include <string>
#include <string_view>

namespace wdepth {

// Failure categories raised by the analysis layers. Invalid arguments to
// constructors and parameter validation use std::invalid_argument instead.
enum class ErrorCode {
  kNoHerald,
  kInsufficientCoincidences,
  kInvalidData,
  kInvalidCalibration,
  kModelViolation,
  kIncompleteDataset,
  kInvalidPlan,
  kUnstableStatistics,
};

std::string_view to_string(ErrorCode code);

class AnalysisError : public std::runtime_error {
 public:
  AnalysisError(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::kNoHerald:
      return "no-herald";
    case ErrorCode::kInsufficientCoincidences:
      return "insufficient-coincidences";
    case ErrorCode::kInvalidData:
      return "invalid-data";
    case ErrorCode::kInvalidCalibration:
      return "invalid-calibration";
    case ErrorCode::kModelViolation:
      return "model-violation";
    case ErrorCode::kIncompleteDataset:
      return "incomplete-dataset";
    case ErrorCode::kInvalidPlan:
      return "invalid-plan";
    case ErrorCode::kUnstableStatistics:
      return "unstable-statistics";
  }
  return "unknown";
}

}  // namespace wdepth

#endif  // WDEPTH_ERRORS_H_
