// Copyright 2026 The grel Authors.
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

#include <cstddef>
#include <string>
#include <string_view>

#include "grel/error.hpp"
#include "json.hpp"

namespace grel::detail {

/// Calls fn(record, line_no) for every non-blank, non-'#' line.
template <typename Fn>
void for_each_json_line(std::string_view text, const std::string& source, Fn&& fn) {
  std::size_t pos = 0;
  std::size_t line = 0;
  while (pos < text.size()) {
    ++line;
    auto nl = text.find('\n', pos);
    std::string_view l =
        text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.empty() || l.front() == '#') continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(l);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line, std::string("invalid JSON: ") + e.what());
    }
    try {
      fn(j, line);
    } catch (const nlohmann::json::exception& e) {
      throw ParseError(source, line, std::string("bad record: ") + e.what());
    }
  }
}

}  // namespace grel::detail
