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

#include <atomic>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <mutex>
#include <string>
#include <string_view>

namespace incanvas {

inline std::int64_t now_millis() {
  using namespace std::chrono;
  return duration_cast<milliseconds>(system_clock::now().time_since_epoch()).count();
}

/// Process-wide generator of lexicographically sortable identifiers of the
/// form `<prefix>_<12 hex ms><6 hex seq>`. Identifiers from one process are
/// strictly increasing; across restarts the millisecond clock keeps them
/// ordered as long as the wall clock does not step backwards.
class IdGenerator {
 public:
  static std::string next(std::string_view prefix) {
    static std::mutex mu;
    static std::int64_t last_ms = 0;
    static std::uint32_t seq = 0;
    std::int64_t ms = now_millis();
    std::uint32_t s;
    {
      std::lock_guard lock(mu);
      if (ms <= last_ms) {
        ms = last_ms;
        ++seq;
        if (seq > 0xFFFFFF) {
          ++last_ms;
          ms = last_ms;
          seq = 0;
        }
      } else {
        last_ms = ms;
        seq = 0;
      }
      s = seq;
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%012llx%06x", static_cast<unsigned long long>(ms) & 0xFFFFFFFFFFFFull,
                  static_cast<unsigned>(s));
    std::string out(prefix);
    out += '_';
    out += buf;
    return out;
  }
};

}  // namespace incanvas
