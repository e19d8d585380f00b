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
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "grel/catalog.hpp"
#include "grel/hits.hpp"

namespace grel {

inline constexpr int kMinScore = 0;
inline constexpr int kMaxScore = 100;

/// One submitted answer with its scores resolved to roles. C15 slots follow
/// the HIT's display order.
struct AnswerRecord {
  std::string hit_id;
  std::string worker_id;
  std::string caption_id;
  Split split = Split::development;
  std::string tp_clip;
  int s_tp = 0;
  std::string tn_clip;
  int s_tn = 0;
  std::array<std::string, 3> c_clips;
  std::array<int, 3> s_c{};

  friend bool operator==(const AnswerRecord&, const AnswerRecord&) = default;
};

/// Joins per-clip scores with the HIT's role tags. The score map must cover
/// exactly the HIT's five clips.
AnswerRecord make_answer_record(const Hit& hit, std::string worker_id,
                                const std::map<std::string, int, std::less<>>& scores);

/// Throws DanglingReference for an unknown hit_id and DataError when the
/// record's clips or caption disagree with the HIT.
void check_joinable(const AnswerRecord& a, const HitIndex& hits);

/// Stable sort by (hit_id, worker_id).
void sort_answers(std::vector<AnswerRecord>& answers);

std::string write_answers(const std::vector<AnswerRecord>& answers, std::string_view prefix = {});
std::vector<AnswerRecord> answers_from_table(const Table& t);
/// A file holding nothing but provenance comments reads as zero answers.
std::vector<AnswerRecord> read_answers(const std::string& path);

}  // namespace grel
