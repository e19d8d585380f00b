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

#include "grel/features.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstring>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

void EmbeddingTable::add(const std::string& id, std::span<const double> v) {
  if (ids_.empty() && dim_ == 0) dim_ = v.size();
  if (v.size() != dim_ || dim_ == 0) {
    throw InvalidArgument("feature '" + id + "' has dimension " + std::to_string(v.size()) +
                          ", table has " + std::to_string(dim_));
  }
  for (double x : v) {
    if (!std::isfinite(x)) throw InvalidArgument("feature '" + id + "' has a non-finite entry");
  }
  if (!index_.emplace(id, ids_.size()).second) {
    throw InvalidArgument("duplicate feature id '" + id + "'");
  }
  ids_.push_back(id);
  data_.insert(data_.end(), v.begin(), v.end());
}

std::span<const double> EmbeddingTable::at(std::string_view id) const {
  auto it = index_.find(id);
  if (it == index_.end()) throw DataError("no feature vector for '" + std::string(id) + "'");
  return {data_.data() + it->second * dim_, dim_};
}

Matrix EmbeddingTable::gather(std::span<const std::string> ids) const {
  Matrix m(ids.size(), dim_);
  for (std::size_t i = 0; i < ids.size(); ++i) {
    auto v = at(ids[i]);
    std::copy(v.begin(), v.end(), m.row(i).begin());
  }
  return m;
}

namespace {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t get_u32(std::string_view in, std::size_t& pos, const std::string& source) {
  if (pos + 4 > in.size()) throw ParseError(source + ": truncated feature file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<unsigned char>(in[pos + i])) << (8 * i);
  }
  pos += 4;
  return v;
}

}  // namespace

std::string encode_features_binary(const EmbeddingTable& t) {
  std::string out(kFeatureMagic);
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(t.size()));
  put_u32(out, static_cast<std::uint32_t>(t.dim()));
  for (const auto& id : t.ids()) {
    put_u32(out, static_cast<std::uint32_t>(id.size()));
    out += id;
    for (double v : t.at(id)) put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
  }
  return out;
}

std::string encode_features_text(const EmbeddingTable& t, std::string_view prefix) {
  std::string out(prefix);
  for (const auto& id : t.ids()) {
    out += id;
    for (double v : t.at(id)) {
      out.push_back('\t');
      out += format_double(v);
    }
    out.push_back('\n');
  }
  return out;
}

EmbeddingTable decode_features(std::string_view bytes, const std::string& source) {
  if (bytes.starts_with(kFeatureMagic)) {
    std::size_t pos = kFeatureMagic.size();
    const auto version = get_u32(bytes, pos, source);
    if (version != 1) throw ParseError(source + ": unsupported feature file version");
    const auto count = get_u32(bytes, pos, source);
    const auto dim = get_u32(bytes, pos, source);
    EmbeddingTable t(dim);
    std::vector<double> row(dim);
    for (std::uint32_t r = 0; r < count; ++r) {
      const auto len = get_u32(bytes, pos, source);
      if (pos + len > bytes.size()) throw ParseError(source + ": truncated feature file");
      std::string id(bytes.substr(pos, len));
      pos += len;
      for (std::uint32_t k = 0; k < dim; ++k) {
        row[k] = std::bit_cast<float>(get_u32(bytes, pos, source));
      }
      try {
        t.add(id, row);
      } catch (const InvalidArgument& e) {
        throw ParseError(source + ": " + e.what());
      }
    }
    if (pos != bytes.size()) throw ParseError(source + ": trailing bytes after feature rows");
    return t;
  }

  EmbeddingTable t;
  std::size_t pos = 0, line = 0;
  std::vector<double> row;
  while (pos < bytes.size()) {
    ++line;
    auto nl = bytes.find('\n', pos);
    std::string_view l = bytes.substr(pos, nl == bytes.npos ? bytes.npos : nl - pos);
    pos = nl == bytes.npos ? bytes.size() : nl + 1;
    if (!l.empty() && l.back() == '\r') l.remove_suffix(1);
    if (l.empty() || l.front() == '#') continue;
    auto tab = l.find('\t');
    if (tab == l.npos) throw ParseError(source, line, "expected id followed by values");
    std::string id(l.substr(0, tab));
    row.clear();
    std::size_t p = tab + 1;
    while (p <= l.size()) {
      auto next = l.find('\t', p);
      std::string_view cell = l.substr(p, next == l.npos ? l.npos : next - p);
      double v = 0.0;
      auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
      if (res.ec != std::errc() || res.ptr != cell.data() + cell.size() || cell.empty()) {
        throw ParseError(source, line, "not a number: '" + std::string(cell) + "'");
      }
      row.push_back(v);
      if (next == l.npos) break;
      p = next + 1;
    }
    try {
      t.add(id, row);
    } catch (const InvalidArgument& e) {
      throw ParseError(source, line, e.what());
    }
  }
  return t;
}

EmbeddingTable read_features(const std::string& path) {
  return decode_features(read_file(path), path);
}

}  // namespace grel
