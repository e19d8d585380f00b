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
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "grel/table.hpp"

namespace grel {

enum class Split { development, validation, evaluation };
inline constexpr Split kAllSplits[] = {Split::development, Split::validation,
                                       Split::evaluation};

std::string_view to_string(Split s);
std::optional<Split> parse_split(std::string_view s);
/// Throws InvalidArgument for an unknown split name.
Split split_from_string(std::string_view s);

/// Role of a clip relative to the caption of a HIT.
enum class Role { TP, TN, C15 };

std::string_view to_string(Role r);
std::optional<Role> parse_role(std::string_view s);

/// Maximum number of captions authored for one clip (Clotho convention).
inline constexpr std::size_t kMaxCaptionsPerClip = 5;

struct AudioClip {
  std::string clip_id;
  Split split = Split::development;
  double duration_s = 0.0;
  std::string media_path;  // may be empty
};

struct CaptionItem {
  std::string caption_id;
  std::string text;
  Split split = Split::development;
  std::string source_clip_id;
};

/// caption_id -> clip_id -> baseline-system similarity.
using SimilarityTable =
    std::map<std::string, std::map<std::string, double, std::less<>>, std::less<>>;

/// Clips, captions and authorship links. Immutable once constructed; items
/// are kept sorted by id so row order in the source files never matters.
class Catalog {
 public:
  Catalog() = default;
  Catalog(std::vector<AudioClip> clips, std::vector<CaptionItem> captions,
          std::optional<SimilarityTable> similarity = std::nullopt);

  const std::vector<AudioClip>& clips() const { return clips_; }
  const std::vector<CaptionItem>& captions() const { return captions_; }

  const AudioClip* find_clip(std::string_view id) const;
  const CaptionItem* find_caption(std::string_view id) const;

  /// Captions whose source clip is `clip_id`, sorted by id.
  const std::vector<std::string>& authored_captions(std::string_view clip_id) const;
  std::vector<std::string> clips_in_split(Split s) const;

  bool has_similarity() const { return similarity_.has_value(); }
  const SimilarityTable& similarity_table() const;
  std::optional<double> similarity(std::string_view caption_id,
                                   std::string_view clip_id) const;

 private:
  std::vector<AudioClip> clips_;
  std::vector<CaptionItem> captions_;
  std::optional<SimilarityTable> similarity_;
  std::map<std::string, std::size_t, std::less<>> clip_index_;
  std::map<std::string, std::size_t, std::less<>> caption_index_;
  std::map<std::string, std::vector<std::string>, std::less<>> authored_;
};

struct Finding {
  std::string code;  // stable machine-readable tag
  std::string message;
};

struct ValidationReport {
  std::vector<Finding> findings;
  bool ok() const { return findings.empty(); }
};

/// Checks every catalog invariant. Findings are data, never exceptions, and
/// come out in a fixed order (by check, then by id).
ValidationReport validate_catalog(const Catalog& c);

/// Builds a catalog from parsed tables. Throws ParseError for malformed rows
/// or duplicate ids, DanglingReference for references to missing items, and
/// DataError for any other violated invariant.
Catalog catalog_from_tables(const Table& clips, const Table& captions,
                            const Table* similarity = nullptr);

Catalog load_catalog(const std::string& clip_table, const std::string& caption_table,
                     const std::optional<std::string>& similarity_table = std::nullopt);

/// Serialized forms matching the load schema.
std::string write_clip_table(const Catalog& c, std::string_view prefix = {});
std::string write_caption_table(const Catalog& c, std::string_view prefix = {});
std::string write_similarity_table(const Catalog& c, std::string_view prefix = {});

}  // namespace grel
