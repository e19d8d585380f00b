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

#include "grel/answers.hpp"

#include <algorithm>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

namespace {

const std::vector<std::string> kColumns = {
    "hit_id", "worker_id", "caption_id", "split",   "tp_clip", "s_tp",    "tn_clip",
    "s_tn",   "c1_clip",   "s_c1",       "c2_clip", "s_c2",    "c3_clip", "s_c3"};

int score_cell(const Table& t, std::size_t row, std::size_t col) {
  const long long v = parse_int(t, row, col);
  if (v < kMinScore || v > kMaxScore) {
    throw ParseError(t.source, t.row_lines[row],
                     "score out of [0,100] in column '" + t.header[col] + "'");
  }
  return static_cast<int>(v);
}

}  // namespace

AnswerRecord make_answer_record(const Hit& hit, std::string worker_id,
                                const std::map<std::string, int, std::less<>>& scores) {
  if (scores.size() != kClipsPerHit) {
    throw DataError("answer for HIT '" + hit.hit_id + "' must score exactly 5 clips");
  }
  auto score_of = [&](const std::string& clip) {
    auto it = scores.find(clip);
    if (it == scores.end()) {
      throw DataError("answer for HIT '" + hit.hit_id + "' is missing clip '" + clip + "'");
    }
    return it->second;
  };
  AnswerRecord a;
  a.hit_id = hit.hit_id;
  a.worker_id = std::move(worker_id);
  a.caption_id = hit.caption_id;
  a.split = hit.split;
  a.tp_clip = hit.with_role(Role::TP).clip_id;
  a.s_tp = score_of(a.tp_clip);
  a.tn_clip = hit.with_role(Role::TN).clip_id;
  a.s_tn = score_of(a.tn_clip);
  a.c_clips = hit.c15_clips();
  for (std::size_t i = 0; i < 3; ++i) a.s_c[i] = score_of(a.c_clips[i]);
  return a;
}

void check_joinable(const AnswerRecord& a, const HitIndex& hits) {
  const Hit& h = hits.at(a.hit_id);
  auto mismatch = [&](const std::string& what) {
    throw DataError("answer (" + a.hit_id + ", " + a.worker_id + ") disagrees with HIT: " + what);
  };
  if (h.caption_id != a.caption_id) mismatch("caption_id");
  if (h.split != a.split) mismatch("split");
  if (h.with_role(Role::TP).clip_id != a.tp_clip) mismatch("TP clip");
  if (h.with_role(Role::TN).clip_id != a.tn_clip) mismatch("TN clip");
  auto c15 = h.c15_clips();
  auto mine = a.c_clips;
  std::sort(c15.begin(), c15.end());
  std::sort(mine.begin(), mine.end());
  if (c15 != mine) mismatch("C15 clips");
}

void sort_answers(std::vector<AnswerRecord>& answers) {
  std::stable_sort(answers.begin(), answers.end(), [](const auto& x, const auto& y) {
    if (x.hit_id != y.hit_id) return x.hit_id < y.hit_id;
    return x.worker_id < y.worker_id;
  });
}

std::string write_answers(const std::vector<AnswerRecord>& answers, std::string_view prefix) {
  TableWriter w(kColumns);
  for (const auto& a : answers) {
    w.add_row({a.hit_id, a.worker_id, a.caption_id, std::string(to_string(a.split)), a.tp_clip,
               std::to_string(a.s_tp), a.tn_clip, std::to_string(a.s_tn), a.c_clips[0],
               std::to_string(a.s_c[0]), a.c_clips[1], std::to_string(a.s_c[1]), a.c_clips[2],
               std::to_string(a.s_c[2])});
  }
  return w.str(prefix);
}

std::vector<AnswerRecord> answers_from_table(const Table& t) {
  std::array<std::size_t, 14> col{};
  for (std::size_t i = 0; i < kColumns.size(); ++i) col[i] = t.column(kColumns[i]);
  std::vector<AnswerRecord> out;
  out.reserve(t.rows.size());
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    AnswerRecord a;
    a.hit_id = row[col[0]];
    a.worker_id = row[col[1]];
    a.caption_id = row[col[2]];
    auto sp = parse_split(row[col[3]]);
    if (!sp) throw ParseError(t.source, t.row_lines[r], "unknown split '" + row[col[3]] + "'");
    a.split = *sp;
    a.tp_clip = row[col[4]];
    a.s_tp = score_cell(t, r, col[5]);
    a.tn_clip = row[col[6]];
    a.s_tn = score_cell(t, r, col[7]);
    for (std::size_t i = 0; i < 3; ++i) {
      a.c_clips[i] = row[col[8 + 2 * i]];
      a.s_c[i] = score_cell(t, r, col[9 + 2 * i]);
    }
    out.push_back(std::move(a));
  }
  return out;
}

std::vector<AnswerRecord> read_answers(const std::string& path) {
  std::string text = read_file(path);
  bool blank = true;
  std::size_t pos = 0;
  while (pos < text.size() && blank) {
    auto nl = text.find('\n', pos);
    std::string_view line(text.data() + pos, (nl == std::string::npos ? text.size() : nl) - pos);
    pos = nl == std::string::npos ? text.size() : nl + 1;
    blank = line.empty() || line.front() == '#' || line == "\r";
  }
  if (blank) return {};
  return answers_from_table(parse_table(text, delimiter_for(path), path));
}

}  // namespace grel
