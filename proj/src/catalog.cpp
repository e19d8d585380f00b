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

#include "grel/catalog.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

std::string_view to_string(Split s) {
  switch (s) {
    case Split::development: return "development";
    case Split::validation: return "validation";
    case Split::evaluation: return "evaluation";
  }
  return "?";
}

std::optional<Split> parse_split(std::string_view s) {
  for (Split sp : kAllSplits) {
    if (to_string(sp) == s) return sp;
  }
  return std::nullopt;
}

Split split_from_string(std::string_view s) {
  auto sp = parse_split(s);
  if (!sp) throw InvalidArgument("unknown split '" + std::string(s) + "'");
  return *sp;
}

std::string_view to_string(Role r) {
  switch (r) {
    case Role::TP: return "TP";
    case Role::TN: return "TN";
    case Role::C15: return "C15";
  }
  return "?";
}

std::optional<Role> parse_role(std::string_view s) {
  if (s == "TP" || s == "tp") return Role::TP;
  if (s == "TN" || s == "tn") return Role::TN;
  if (s == "C15" || s == "c15") return Role::C15;
  return std::nullopt;
}

Catalog::Catalog(std::vector<AudioClip> clips, std::vector<CaptionItem> captions,
                 std::optional<SimilarityTable> similarity)
    : clips_(std::move(clips)),
      captions_(std::move(captions)),
      similarity_(std::move(similarity)) {
  std::stable_sort(clips_.begin(), clips_.end(),
                   [](const auto& a, const auto& b) { return a.clip_id < b.clip_id; });
  std::stable_sort(captions_.begin(), captions_.end(), [](const auto& a, const auto& b) {
    return a.caption_id < b.caption_id;
  });
  for (std::size_t i = 0; i < clips_.size(); ++i) clip_index_.emplace(clips_[i].clip_id, i);
  for (std::size_t i = 0; i < captions_.size(); ++i) {
    caption_index_.emplace(captions_[i].caption_id, i);
    authored_[captions_[i].source_clip_id].push_back(captions_[i].caption_id);
  }
}

const AudioClip* Catalog::find_clip(std::string_view id) const {
  auto it = clip_index_.find(id);
  return it == clip_index_.end() ? nullptr : &clips_[it->second];
}

const CaptionItem* Catalog::find_caption(std::string_view id) const {
  auto it = caption_index_.find(id);
  return it == caption_index_.end() ? nullptr : &captions_[it->second];
}

const std::vector<std::string>& Catalog::authored_captions(std::string_view clip_id) const {
  static const std::vector<std::string> kNone;
  auto it = authored_.find(clip_id);
  return it == authored_.end() ? kNone : it->second;
}

std::vector<std::string> Catalog::clips_in_split(Split s) const {
  std::vector<std::string> out;
  for (const auto& c : clips_) {
    if (c.split == s) out.push_back(c.clip_id);
  }
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

const SimilarityTable& Catalog::similarity_table() const {
  if (!similarity_) throw DataError("catalog has no similarity table");
  return *similarity_;
}

std::optional<double> Catalog::similarity(std::string_view caption_id,
                                          std::string_view clip_id) const {
  if (!similarity_) return std::nullopt;
  auto row = similarity_->find(caption_id);
  if (row == similarity_->end()) return std::nullopt;
  auto cell = row->second.find(clip_id);
  if (cell == row->second.end()) return std::nullopt;
  return cell->second;
}

ValidationReport validate_catalog(const Catalog& c) {
  ValidationReport r;
  auto add = [&r](std::string code, std::string msg) {
    r.findings.push_back({std::move(code), std::move(msg)});
  };

  const auto& clips = c.clips();
  for (std::size_t i = 0; i < clips.size(); ++i) {
    const auto& clip = clips[i];
    if (clip.clip_id.empty()) add("empty_id", "clip with empty clip_id");
    if (i > 0 && clips[i - 1].clip_id == clip.clip_id) {
      add("duplicate_clip", "duplicate clip_id '" + clip.clip_id + "'");
    }
    if (!(clip.duration_s > 0.0) || !std::isfinite(clip.duration_s)) {
      add("bad_duration", "clip '" + clip.clip_id + "' has non-positive duration");
    }
  }

  const auto& caps = c.captions();
  for (std::size_t i = 0; i < caps.size(); ++i) {
    const auto& cap = caps[i];
    if (cap.caption_id.empty()) add("empty_id", "caption with empty caption_id");
    if (i > 0 && caps[i - 1].caption_id == cap.caption_id) {
      add("duplicate_caption", "duplicate caption_id '" + cap.caption_id + "'");
    }
    if (cap.text.empty()) add("empty_text", "caption '" + cap.caption_id + "' has empty text");
    const AudioClip* src = c.find_clip(cap.source_clip_id);
    if (!src) {
      add("dangling_reference", "caption '" + cap.caption_id + "' references missing clip '" +
                                    cap.source_clip_id + "'");
    } else if (src->split != cap.split) {
      add("split_mismatch", "caption '" + cap.caption_id + "' is in split " +
                                std::string(to_string(cap.split)) + " but its clip '" +
                                src->clip_id + "' is in " + std::string(to_string(src->split)));
    }
  }

  for (std::size_t i = 0; i < clips.size(); ++i) {
    if (i > 0 && clips[i - 1].clip_id == clips[i].clip_id) continue;
    const auto n = c.authored_captions(clips[i].clip_id).size();
    if (n > kMaxCaptionsPerClip) {
      add("caption_count", "clip '" + clips[i].clip_id + "': caption count exceeds " +
                               std::to_string(kMaxCaptionsPerClip) + " (" + std::to_string(n) +
                               ")");
    } else if (n == 0) {
      add("caption_count", "clip '" + clips[i].clip_id + "' has no authored caption");
    }
  }

  if (c.has_similarity()) {
    for (const auto& [cap_id, row] : c.similarity_table()) {
      if (!c.find_caption(cap_id)) {
        add("dangling_reference", "similarity row references missing caption '" + cap_id + "'");
      }
      for (const auto& [clip_id, v] : row) {
        if (!c.find_clip(clip_id)) {
          add("dangling_reference",
              "similarity row references missing clip '" + clip_id + "'");
        }
        if (!std::isfinite(v)) {
          add("bad_similarity", "non-finite similarity for (" + cap_id + ", " + clip_id + ")");
        }
      }
    }
  }
  return r;
}

namespace {

Split parse_split_cell(const Table& t, std::size_t row, std::size_t col) {
  auto sp = parse_split(t.rows[row][col]);
  if (!sp) {
    throw ParseError(t.source, t.row_lines[row], "unknown split '" + t.rows[row][col] + "'");
  }
  return *sp;
}

}  // namespace

Catalog catalog_from_tables(const Table& clip_t, const Table& cap_t, const Table* sim_t) {
  std::vector<AudioClip> clips;
  {
    const auto id = clip_t.column("clip_id");
    const auto split = clip_t.column("split");
    const auto dur = clip_t.column("duration_s");
    const bool has_media = clip_t.has_column("media_path");
    const auto media = has_media ? clip_t.column("media_path") : 0;
    std::set<std::string, std::less<>> seen;
    for (std::size_t r = 0; r < clip_t.rows.size(); ++r) {
      AudioClip c;
      c.clip_id = clip_t.rows[r][id];
      if (!seen.insert(c.clip_id).second) {
        throw ParseError(clip_t.source, clip_t.row_lines[r], "duplicate clip_id '" + c.clip_id + "'");
      }
      c.split = parse_split_cell(clip_t, r, split);
      c.duration_s = parse_real(clip_t, r, dur);
      if (has_media) c.media_path = clip_t.rows[r][media];
      clips.push_back(std::move(c));
    }
  }

  std::vector<CaptionItem> captions;
  std::set<std::string, std::less<>> clip_ids;
  for (const auto& c : clips) clip_ids.insert(c.clip_id);
  {
    const auto id = cap_t.column("caption_id");
    const auto split = cap_t.column("split");
    const auto text = cap_t.column("text");
    const auto src = cap_t.column("source_clip_id");
    std::set<std::string, std::less<>> seen;
    for (std::size_t r = 0; r < cap_t.rows.size(); ++r) {
      CaptionItem c;
      c.caption_id = cap_t.rows[r][id];
      if (!seen.insert(c.caption_id).second) {
        throw ParseError(cap_t.source, cap_t.row_lines[r],
                         "duplicate caption_id '" + c.caption_id + "'");
      }
      c.split = parse_split_cell(cap_t, r, split);
      c.text = cap_t.rows[r][text];
      c.source_clip_id = cap_t.rows[r][src];
      if (!clip_ids.contains(c.source_clip_id)) {
        throw DanglingReference("caption '" + c.caption_id + "' references missing clip '" +
                                    c.source_clip_id + "'",
                                c.source_clip_id);
      }
      captions.push_back(std::move(c));
    }
  }

  std::optional<SimilarityTable> sim;
  if (sim_t) {
    sim.emplace();
    std::set<std::string, std::less<>> cap_ids;
    for (const auto& c : captions) cap_ids.insert(c.caption_id);
    const auto cap = sim_t->column("caption_id");
    const auto clip = sim_t->column("clip_id");
    const auto score = sim_t->column("score");
    for (std::size_t r = 0; r < sim_t->rows.size(); ++r) {
      const auto& cap_id = sim_t->rows[r][cap];
      const auto& clip_id = sim_t->rows[r][clip];
      if (!cap_ids.contains(cap_id)) {
        throw DanglingReference("similarity references missing caption '" + cap_id + "'", cap_id);
      }
      if (!clip_ids.contains(clip_id)) {
        throw DanglingReference("similarity references missing clip '" + clip_id + "'", clip_id);
      }
      if (!(*sim)[cap_id].emplace(clip_id, parse_real(*sim_t, r, score)).second) {
        throw ParseError(sim_t->source, sim_t->row_lines[r],
                         "duplicate similarity entry (" + cap_id + ", " + clip_id + ")");
      }
    }
  }

  Catalog catalog(std::move(clips), std::move(captions), std::move(sim));
  auto report = validate_catalog(catalog);
  if (!report.ok()) throw DataError(report.findings.front().message);
  return catalog;
}

Catalog load_catalog(const std::string& clip_table, const std::string& caption_table,
                     const std::optional<std::string>& similarity_table) {
  const Table clips = read_table(clip_table);
  const Table caps = read_table(caption_table);
  if (similarity_table) {
    const Table sim = read_table(*similarity_table);
    return catalog_from_tables(clips, caps, &sim);
  }
  return catalog_from_tables(clips, caps, nullptr);
}

std::string write_clip_table(const Catalog& c, std::string_view prefix) {
  TableWriter w({"clip_id", "split", "duration_s", "media_path"});
  for (const auto& clip : c.clips()) {
    w.add_row({clip.clip_id, std::string(to_string(clip.split)), format_double(clip.duration_s),
               clip.media_path});
  }
  return w.str(prefix);
}

std::string write_caption_table(const Catalog& c, std::string_view prefix) {
  TableWriter w({"caption_id", "split", "text", "source_clip_id"});
  for (const auto& cap : c.captions()) {
    w.add_row({cap.caption_id, std::string(to_string(cap.split)), cap.text, cap.source_clip_id});
  }
  return w.str(prefix);
}

std::string write_similarity_table(const Catalog& c, std::string_view prefix) {
  TableWriter w({"caption_id", "clip_id", "score"});
  if (c.has_similarity()) {
    for (const auto& [cap, row] : c.similarity_table()) {
      for (const auto& [clip, v] : row) w.add_row({cap, clip, format_double(v)});
    }
  }
  return w.str(prefix);
}

}  // namespace grel
