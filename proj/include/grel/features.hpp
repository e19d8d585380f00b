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

#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grel/matrix.hpp"

namespace grel {

/// id -> fixed-length feature vector (precomputed encoder output).
class EmbeddingTable {
 public:
  EmbeddingTable() = default;
  explicit EmbeddingTable(std::size_t dim) : dim_(dim) {}

  /// Throws InvalidArgument on a dimension mismatch, duplicate id, or
  /// non-finite entry.
  void add(const std::string& id, std::span<const double> v);

  std::size_t dim() const { return dim_; }
  std::size_t size() const { return ids_.size(); }
  bool contains(std::string_view id) const { return index_.contains(id); }
  std::span<const double> at(std::string_view id) const;
  const std::vector<std::string>& ids() const { return ids_; }

  /// Stacks the rows for `ids` in order; throws DataError naming the first
  /// missing id.
  Matrix gather(std::span<const std::string> ids) const;

 private:
  std::size_t dim_ = 0;
  std::vector<std::string> ids_;  // insertion order
  std::vector<double> data_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

// Binary layout (all integers and floats little-endian):
//   "GRELFEAT" | u32 version=1 | u32 count | u32 dim |
//   count x ( u32 id_len | id bytes | dim x f32 )
// Text layout: one row per line, "id<TAB>v1<TAB>...<TAB>vd", '#' lines skipped.
inline constexpr std::string_view kFeatureMagic = "GRELFEAT";

std::string encode_features_binary(const EmbeddingTable& t);
std::string encode_features_text(const EmbeddingTable& t, std::string_view prefix = {});
/// Detects the layout from the magic bytes.
EmbeddingTable decode_features(std::string_view bytes, const std::string& source);
EmbeddingTable read_features(const std::string& path);

}  // namespace grel
