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

#include <array>
#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grel/catalog.hpp"

namespace grel {

/// The 17 clips chosen for one caption: its true positive, one true negative
/// and fifteen relevance-unknown candidates.
struct CandidateSet {
  std::string caption_id;
  Split split = Split::development;
  std::string tp_clip;
  std::string tn_clip;
  bool tn_verified = false;
  std::vector<std::string> c15;  // top-k by similarity, then the random draws
};

struct SelectionParams {
  std::size_t top_k = 5;
  std::size_t random_k = 10;
};

/// Picks TP (the caption's source clip), TN (lowest similarity, ties to the
/// smallest clip_id), the top_k most similar remaining clips, and random_k
/// uniform draws from what is left, all within the caption's split.
CandidateSet select_candidates(const Catalog& catalog, std::string_view caption_id,
                               const SelectionParams& params, std::uint64_t seed);

/// select_candidates for many captions; parallel across captions.
std::vector<CandidateSet> select_all(const Catalog& catalog,
                                     const std::vector<std::string>& caption_ids,
                                     const SelectionParams& params, std::uint64_t seed);

/// Throws InvalidArgument if the 17-distinct-clips invariant does not hold.
void check_candidate_set(const CandidateSet& cs, std::size_t expected_c15 = 15);

inline constexpr int kHitsPerCaption = 5;
inline constexpr int kClipsPerHit = 5;

struct HitClip {
  std::string clip_id;
  Role role = Role::C15;
  int position = 0;  // 1-based display position
};

struct Hit {
  std::string hit_id;
  std::string caption_id;
  Split split = Split::development;
  int batch_index = 0;                     // 1..5
  std::array<HitClip, kClipsPerHit> clips;  // in display order

  const HitClip* find(std::string_view clip_id) const;
  const HitClip& with_role(Role r) const;  // first clip with role r
  /// C15 clips in display order.
  std::array<std::string, 3> c15_clips() const;
};

std::string make_hit_id(std::string_view caption_id, int batch_index);

/// Splits the 15 candidates into five consecutive batches of three; each HIT
/// gets TP + TN + one batch, displayed in a seeded random order.
std::vector<Hit> build_hits(const CandidateSet& cs, std::uint64_t seed);

struct AssignmentPlan {
  int redundancy = 5;
  std::vector<std::string> hit_ids;

  std::size_t target_assignments() const {
    return static_cast<std::size_t>(redundancy) * hit_ids.size();
  }
};

AssignmentPlan plan_assignments(const std::vector<Hit>& hits, int redundancy);

/// hit_id -> Hit lookup with a clear error for unknown ids.
class HitIndex {
 public:
  HitIndex() = default;
  explicit HitIndex(const std::vector<Hit>& hits);
  const Hit& at(std::string_view hit_id) const;
  const Hit* find(std::string_view hit_id) const;
  std::size_t size() const { return hits_.size(); }

 private:
  std::map<std::string, Hit, std::less<>> hits_;
};

// Line-delimited JSON, one record per line; '#' lines are provenance.
std::string write_candidates(const std::vector<CandidateSet>& sets, std::string_view prefix = {});
std::vector<CandidateSet> parse_candidates(std::string_view text, const std::string& source);
std::string write_hits(const std::vector<Hit>& hits, std::string_view prefix = {});
std::vector<Hit> parse_hits(std::string_view text, const std::string& source);

}  // namespace grel
