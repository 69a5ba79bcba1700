// Copyright 2026 The incanvas Authors.
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

#pragma once

#include <stdexcept>
#include <string>
#include <utility>

#include <nlohmann/json.hpp>

namespace incanvas {

/// Every failure in the engine surfaces as an Error carrying a stable,
/// machine-readable code (e.g. "RaggedRows", "UnknownColumn"). The HTTP
/// layer maps codes to status codes and echoes them in error bodies.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& message, nlohmann::json detail = nlohmann::json::object())
      : std::runtime_error(message), code_(std::move(code)), detail_(std::move(detail)) {}

  const std::string& code() const noexcept { return code_; }
  const nlohmann::json& detail() const noexcept { return detail_; }

  /// {code, message, detail} in that key order.
  nlohmann::ordered_json to_json() const {
    nlohmann::ordered_json out;
    out["code"] = code_;
    out["message"] = what();
    out["detail"] = nlohmann::ordered_json::parse(detail_.dump());
    return out;
  }

 private:
  std::string code_;
  nlohmann::json detail_;
};

namespace errc {
// data engine
inline constexpr const char* kEmptyInput = "EmptyInput";
inline constexpr const char* kRaggedRows = "RaggedRows";
inline constexpr const char* kDuplicateHeader = "DuplicateHeader";
inline constexpr const char* kInvalidEncoding = "InvalidEncoding";
inline constexpr const char* kMalformedCsv = "MalformedCsv";
inline constexpr const char* kUnknownColumn = "UnknownColumn";
inline constexpr const char* kTypeMismatch = "TypeMismatch";
inline constexpr const char* kInvalidBinCount = "InvalidBinCount";
inline constexpr const char* kInvalidQuery = "InvalidQuery";
inline constexpr const char* kNonQuantitativeColumn = "NonQuantitativeColumn";
inline constexpr const char* kFieldNotNumeric = "FieldNotNumeric";
inline constexpr const char* kEmptyTable = "EmptyTable";
inline constexpr const char* kInvalidFraction = "InvalidFraction";
// chart spec
inline constexpr const char* kInvalidSpec = "InvalidSpec";
inline constexpr const char* kUnrepairable = "Unrepairable";
inline constexpr const char* kUnsupportedSpecVersion = "UnsupportedSpecVersion";
// generation
inline constexpr const char* kNoJsonFound = "NoJsonFound";
inline constexpr const char* kMalformedSpecJson = "MalformedSpecJson";
inline constexpr const char* kNoColumnsMatched = "NoColumnsMatched";
inline constexpr const char* kUnrecognizedRevision = "UnrecognizedRevision";
inline constexpr const char* kProviderTimeout = "ProviderTimeout";
inline constexpr const char* kProviderError = "ProviderError";
inline constexpr const char* kGenerationFailed = "GenerationFailed";
inline constexpr const char* kUnknownDataset = "UnknownDataset";
inline constexpr const char* kUnknownProvider = "UnknownProvider";
inline constexpr const char* kInvalidRequest = "InvalidRequest";
// canvas
inline constexpr const char* kInvalidText = "InvalidText";
inline constexpr const char* kUnknownSourceNode = "UnknownSourceNode";
inline constexpr const char* kUnknownNode = "UnknownNode";
inline constexpr const char* kNonPositiveSize = "NonPositiveSize";
inline constexpr const char* kNotAVisualization = "NotAVisualization";
inline constexpr const char* kUnsupportedVersion = "UnsupportedVersion";
inline constexpr const char* kMalformedDocument = "MalformedDocument";
// server
inline constexpr const char* kUnknownDocument = "UnknownDocument";
inline constexpr const char* kUnknownJob = "UnknownJob";
inline constexpr const char* kStaleVersion = "StaleVersion";
inline constexpr const char* kQueueFull = "QueueFull";
inline constexpr const char* kServerRestarted = "ServerRestarted";
inline constexpr const char* kPayloadTooLarge = "PayloadTooLarge";
inline constexpr const char* kNotFound = "NotFound";
inline constexpr const char* kStorageError = "StorageError";
inline constexpr const char* kMalformedJson = "MalformedJson";
inline constexpr const char* kInternalError = "InternalError";
}  // namespace errc

}  // namespace incanvas
