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
#include <vector>

namespace grel {

/// Delimited text table with a header row. Fields containing the delimiter,
/// a quote, or a line break are double-quoted with "" as the escaped quote.
/// Lines starting with '#' before the header row are provenance comments.
struct Table {
  std::string source;
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
  std::vector<std::size_t> row_lines;  // 1-based source line of each row

  /// Index of a named column; throws ParseError if absent.
  std::size_t column(std::string_view name) const;
  bool has_column(std::string_view name) const;
};

/// ',' for *.csv, tab otherwise.
char delimiter_for(std::string_view path);

Table parse_table(std::string_view text, char delim, const std::string& source);
Table read_table(const std::string& path);

class TableWriter {
 public:
  explicit TableWriter(std::vector<std::string> header, char delim = '\t');
  void add_row(const std::vector<std::string>& fields);
  /// `prefix` (typically an artifact header line) is emitted first.
  std::string str(std::string_view prefix = {}) const;

 private:
  void append_row(std::string& out, const std::vector<std::string>& fields) const;

  std::vector<std::string> header_;
  std::vector<std::vector<std::string>> rows_;
  char delim_;
};

// Strict field parsers; throw ParseError tagged with table/line context.
double parse_real(const Table& t, std::size_t row, std::size_t col);
long long parse_int(const Table& t, std::size_t row, std::size_t col);

}  // namespace grel
