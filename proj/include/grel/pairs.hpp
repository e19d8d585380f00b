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
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grel/aggregation.hpp"
#include "grel/catalog.hpp"

namespace grel {

inline constexpr std::string_view kBiCrRel = "BiCrRel";
inline constexpr std::string_view kBiRel = "BiRel";
inline constexpr std::string_view kUnion = "BiCrRel+BiRel";

/// caption_id -> C15 clips whose aggregated score is strictly above the
/// threshold. Every caption that has C15 aggregates gets an entry, possibly
/// empty.
struct HighGradedSet {
  std::map<std::string, std::set<std::string>, std::less<>> by_caption;

  std::size_t size() const;  // total (caption, clip) members
};

HighGradedSet binarize(const std::vector<AggregatedRelevance>& aggs, double threshold);

/// (clip_id, caption_id)
using AudioCaptionPair = std::pair<std::string, std::string>;

/// Positive pairs under one regime. Every other combination of the two
/// universes is a negative; negatives are never materialized.
struct PairSet {
  std::string name;
  Split split = Split::development;
  std::set<AudioCaptionPair> positives;
  std::set<std::string> clip_universe;
  std::set<std::string> caption_universe;

  bool is_positive(const std::string& clip, const std::string& caption) const {
    return positives.contains({clip, caption});
  }
  std::size_t size() const { return positives.size(); }
  /// caption -> relevant clips
  std::map<std::string, std::set<std::string>> relevant_by_caption() const;
  void add(std::string clip, std::string caption);
};

struct BiCrRelOptions {
  /// Restrict the captions paired with a query's TP clip to captions that were
  /// themselves crowdsourced queries.
  bool rule2_selected_only = false;
};

/// Positives for captions of `split`:
///   1. (c, q)     for each high-graded clip c of query q
///   2. (a_q, k)   for each caption k authored for such a c, a_q = q's source clip
///   3. (c, s)     for each sibling s != q authored for a_q
PairSet build_bicrrel(const HighGradedSet& hg, const Catalog& catalog, Split split,
                      const BiCrRelOptions& opts = {});

/// Authored (clip, caption) pairs whose clip or caption appears in `bicrrel`.
PairSet build_birel(const PairSet& bicrrel, const Catalog& catalog);

/// Throws InvalidArgument when the splits differ.
PairSet union_pairs(const PairSet& a, const PairSet& b);

std::set<AudioCaptionPair> overlap(const PairSet& a, const PairSet& b);

/// name, split, clip_id, caption_id
std::string write_pairs(const std::vector<PairSet>& sets, std::string_view prefix = {});
std::vector<PairSet> pairs_from_table(const Table& t);
std::vector<PairSet> read_pairs(const std::string& path);

}  // namespace grel
