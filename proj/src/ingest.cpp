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

#include "grel/ingest.hpp"

#include <algorithm>
#include <map>

#include "grel/error.hpp"

namespace grel {

namespace {

struct PendingHit {
  std::string caption_id;
  std::vector<std::pair<std::string, Role>> clips;  // first-appearance order
};

int batch_from_id(const std::string& hit_id, int fallback) {
  auto hash = hit_id.rfind('#');
  if (hash == std::string::npos) return fallback;
  try {
    std::size_t used = 0;
    int k = std::stoi(hit_id.substr(hash + 1), &used);
    if (used == hit_id.size() - hash - 1 && k >= 1) return k;
  } catch (const std::exception&) {
  }
  return fallback;
}

}  // namespace

IngestResult ingest_long_table(const Table& t, const Catalog& catalog, const IngestColumns& cols) {
  IngestResult out;
  if (t.header.empty()) return out;
  const std::size_t c_hit = t.column(cols.hit_id);
  const std::size_t c_worker = t.column(cols.worker_id);
  const std::size_t c_caption = t.column(cols.caption_id);
  const std::size_t c_clip = t.column(cols.clip_id);
  const std::size_t c_score = t.column(cols.score);
  const std::size_t c_role = t.column(cols.role);

  std::map<std::string, PendingHit> pending;
  std::map<std::pair<std::string, std::string>, std::map<std::string, int, std::less<>>> scores;

  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    const auto& row = t.rows[r];
    const std::size_t line = t.row_lines[r];
    const std::string& hit_id = row[c_hit];
    const std::string& worker = row[c_worker];
    const std::string& caption = row[c_caption];
    const std::string& clip = row[c_clip];
    if (hit_id.empty() || worker.empty()) throw ParseError(t.source, line, "empty hit or worker id");
    if (!catalog.find_caption(caption)) throw DanglingReference("unknown caption '" + caption + "'", caption);
    if (!catalog.find_clip(clip)) throw DanglingReference("unknown clip '" + clip + "'", clip);
    auto role = parse_role(row[c_role]);
    if (!role) throw ParseError(t.source, line, "unknown role '" + row[c_role] + "'");
    long long s = parse_int(t, r, c_score);
    if (s < kMinScore || s > kMaxScore) {
      throw ParseError(t.source, line, "score outside [0, 100]");
    }

    PendingHit& h = pending[hit_id];
    if (h.caption_id.empty()) {
      h.caption_id = caption;
    } else if (h.caption_id != caption) {
      throw DataError("HIT '" + hit_id + "' mixes captions '" + h.caption_id + "' and '" +
                      caption + "'");
    }
    auto it = std::find_if(h.clips.begin(), h.clips.end(),
                           [&](const auto& c) { return c.first == clip; });
    if (it == h.clips.end()) {
      h.clips.emplace_back(clip, *role);
    } else if (it->second != *role) {
      throw DataError("HIT '" + hit_id + "' gives clip '" + clip + "' two roles");
    }
    auto& sc = scores[{hit_id, worker}];
    if (!sc.emplace(clip, static_cast<int>(s)).second) {
      throw ParseError(t.source, line, "worker '" + worker + "' scored clip '" + clip +
                                           "' twice in HIT '" + hit_id + "'");
    }
  }

  std::map<std::string, int> per_caption;
  for (auto& [hit_id, p] : pending) {
    if (p.clips.size() != kClipsPerHit) {
      throw DataError("HIT '" + hit_id + "' has " + std::to_string(p.clips.size()) +
                      " clips, expected 5");
    }
    int tp = 0, tn = 0;
    for (const auto& c : p.clips) {
      tp += c.second == Role::TP;
      tn += c.second == Role::TN;
    }
    if (tp != 1 || tn != 1) {
      throw DataError("HIT '" + hit_id + "' needs one TP, one TN and three C15 clips");
    }
    Hit h;
    h.hit_id = hit_id;
    h.caption_id = p.caption_id;
    h.split = catalog.find_caption(p.caption_id)->split;
    h.batch_index = batch_from_id(hit_id, ++per_caption[p.caption_id]);
    for (std::size_t i = 0; i < kClipsPerHit; ++i) {
      h.clips[i] = {p.clips[i].first, p.clips[i].second, static_cast<int>(i) + 1};
    }
    out.hits.push_back(std::move(h));
  }

  HitIndex index(out.hits);
  for (const auto& [key, sc] : scores) {
    out.answers.push_back(make_answer_record(index.at(key.first), key.second, sc));
  }
  sort_answers(out.answers);
  return out;
}

}  // namespace grel
