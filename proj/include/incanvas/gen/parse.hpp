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

#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "incanvas/chart/spec.hpp"
#include "incanvas/common/error.hpp"

namespace incanvas::gen {

namespace detail {

// Drops ``` fence lines, keeping their contents. Offsets into the result are
// reported as-is; fences only ever shorten the text.
inline std::string strip_fences(std::string_view text) {
  std::string out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    std::size_t first = line.find_first_not_of(" \t");
    bool fence = first != std::string_view::npos && line.substr(first, 3) == "```";
    if (!fence) {
      out.append(line);
      if (nl != std::string_view::npos) out.push_back('\n');
    }
    if (nl == std::string_view::npos) break;
    pos = nl + 1;
  }
  return out;
}

// End (exclusive) of the balanced object starting at `open`, honoring JSON
// string escapes; npos when the braces never balance.
inline std::size_t balanced_end(const std::string& s, std::size_t open) {
  int depth = 0;
  bool in_string = false;
  for (std::size_t i = open; i < s.size(); ++i) {
    char c = s[i];
    if (in_string) {
      if (c == '\\') {
        ++i;
      } else if (c == '"') {
        in_string = false;
      }
      continue;
    }
    if (c == '"') {
      in_string = true;
    } else if (c == '{') {
      ++depth;
    } else if (c == '}' && --depth == 0) {
      return i + 1;
    }
  }
  return std::string::npos;
}

}  // namespace detail

/// Pulls the first JSON object out of free-form model text and reads it as an
/// unvalidated spec draft. Prose and ``` fences around the object are ignored.
inline chart::ChartSpec parse_model_output(std::string_view text) {
  const std::string body = detail::strip_fences(text);
  std::size_t open = body.find('{');
  if (open == std::string::npos) throw Error(errc::kNoJsonFound, "model output contains no JSON object");

  std::size_t first_error_at = std::string::npos;
  std::string first_error;
  for (; open != std::string::npos; open = body.find('{', open + 1)) {
    std::size_t end = detail::balanced_end(body, open);
    if (end == std::string::npos) {
      if (first_error_at == std::string::npos) {
        first_error_at = open;
        first_error = "unterminated JSON object";
      }
      break;
    }
    nlohmann::ordered_json j;
    try {
      j = nlohmann::ordered_json::parse(body.begin() + static_cast<std::ptrdiff_t>(open),
                                        body.begin() + static_cast<std::ptrdiff_t>(end));
    } catch (const nlohmann::json::parse_error& e) {
      if (first_error_at == std::string::npos) {
        first_error_at = open + (e.byte > 0 ? e.byte - 1 : 0);
        first_error = e.what();
      }
      open = end - 1;  // skip this object's nested braces
      continue;
    }
    try {
      return chart::spec_from_json(j);
    } catch (Error& e) {
      if (e.code() != errc::kMalformedSpecJson) throw;
      nlohmann::json detail = e.detail();
      detail["position"] = open;
      throw Error(errc::kMalformedSpecJson, e.what(), detail);
    }
  }
  throw Error(errc::kMalformedSpecJson, "no parseable JSON object: " + first_error, {{"position", first_error_at}});
}

}  // namespace incanvas::gen
