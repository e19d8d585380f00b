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

#include "grel/table.hpp"

#include <charconv>
#include <cmath>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

std::size_t Table::column(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i) {
    if (header[i] == name) return i;
  }
  throw ParseError(source, 1, "missing column '" + std::string(name) + "'");
}

bool Table::has_column(std::string_view name) const {
  for (const auto& h : header) {
    if (h == name) return true;
  }
  return false;
}

char delimiter_for(std::string_view path) {
  return path.ends_with(".csv") ? ',' : '\t';
}

Table parse_table(std::string_view text, char delim, const std::string& source) {
  Table t;
  t.source = source;
  std::size_t pos = 0;
  std::size_t line = 1;
  if (text.starts_with("\xEF\xBB\xBF")) pos = 3;

  // Provenance comments and blank lines ahead of the header.
  while (pos < text.size()) {
    if (text[pos] == '#' || text[pos] == '\n' || text[pos] == '\r') {
      auto nl = text.find('\n', pos);
      pos = (nl == std::string_view::npos) ? text.size() : nl + 1;
      ++line;
      continue;
    }
    break;
  }

  bool have_header = false;
  while (pos < text.size()) {
    const std::size_t start_line = line;
    std::vector<std::string> fields;
    std::string field;
    bool in_quotes = false;
    bool was_quoted = false;
    bool row_done = false;
    while (pos < text.size() && !row_done) {
      char c = text[pos++];
      if (in_quotes) {
        if (c == '"') {
          if (pos < text.size() && text[pos] == '"') {
            field.push_back('"');
            ++pos;
          } else {
            in_quotes = false;
          }
        } else {
          if (c == '\n') ++line;
          field.push_back(c);
        }
        continue;
      }
      if (c == '"' && field.empty() && !was_quoted) {
        in_quotes = true;
        was_quoted = true;
      } else if (c == delim) {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (c == '\n') {
        row_done = true;
        ++line;
      } else if (c == '\r') {
        // CRLF; the '\n' ends the row.
      } else {
        if (was_quoted) {
          throw ParseError(source, start_line, "text after closing quote");
        }
        field.push_back(c);
      }
    }
    if (in_quotes) throw ParseError(source, start_line, "unterminated quoted field");
    fields.push_back(std::move(field));
    if (fields.size() == 1 && fields[0].empty() && !was_quoted) continue;  // blank
    if (!have_header) {
      t.header = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != t.header.size()) {
      throw ParseError(source, start_line,
                       "expected " + std::to_string(t.header.size()) + " fields, got " +
                           std::to_string(fields.size()));
    }
    t.rows.push_back(std::move(fields));
    t.row_lines.push_back(start_line);
  }
  if (!have_header) throw ParseError(source, line, "missing header row");
  return t;
}

Table read_table(const std::string& path) {
  return parse_table(read_file(path), delimiter_for(path), path);
}

TableWriter::TableWriter(std::vector<std::string> header, char delim)
    : header_(std::move(header)), delim_(delim) {}

void TableWriter::add_row(const std::vector<std::string>& fields) {
  rows_.push_back(fields);
}

void TableWriter::append_row(std::string& out,
                             const std::vector<std::string>& fields) const {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i) out.push_back(delim_);
    const std::string& f = fields[i];
    const bool quote = f.find_first_of(std::string{delim_, '"', '\n', '\r'}) !=
                           std::string::npos ||
                       (i == 0 && !f.empty() && f[0] == '#');
    if (!quote) {
      out += f;
      continue;
    }
    out.push_back('"');
    for (char c : f) {
      if (c == '"') out.push_back('"');
      out.push_back(c);
    }
    out.push_back('"');
  }
  out.push_back('\n');
}

std::string TableWriter::str(std::string_view prefix) const {
  std::string out(prefix);
  append_row(out, header_);
  for (const auto& r : rows_) append_row(out, r);
  return out;
}

double parse_real(const Table& t, std::size_t row, std::size_t col) {
  const std::string& s = t.rows[row][col];
  double v = 0.0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(t.source, t.row_lines[row],
                     "column '" + t.header[col] + "': not a number: '" + s + "'");
  }
  return v;
}

long long parse_int(const Table& t, std::size_t row, std::size_t col) {
  const std::string& s = t.rows[row][col];
  long long v = 0;
  auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size() || s.empty()) {
    throw ParseError(t.source, t.row_lines[row],
                     "column '" + t.header[col] + "': not an integer: '" + s + "'");
  }
  return v;
}

}  // namespace grel
