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

#include "grel/pairs.hpp"

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

std::size_t HighGradedSet::size() const {
  std::size_t n = 0;
  for (const auto& [q, clips] : by_caption) n += clips.size();
  return n;
}

HighGradedSet binarize(const std::vector<AggregatedRelevance>& aggs, double threshold) {
  if (!(threshold >= 0.0 && threshold <= 100.0)) {
    throw InvalidArgument("threshold must lie in [0,100], got " + format_double(threshold));
  }
  HighGradedSet hg;
  for (const auto& g : aggs) {
    if (g.role != Role::C15) continue;
    auto& clips = hg.by_caption[g.caption_id];
    if (g.agg_score > threshold) clips.insert(g.clip_id);
  }
  return hg;
}

std::map<std::string, std::set<std::string>> PairSet::relevant_by_caption() const {
  std::map<std::string, std::set<std::string>> out;
  for (const auto& [clip, cap] : positives) out[cap].insert(clip);
  return out;
}

void PairSet::add(std::string clip, std::string caption) {
  clip_universe.insert(clip);
  caption_universe.insert(caption);
  positives.emplace(std::move(clip), std::move(caption));
}

PairSet build_bicrrel(const HighGradedSet& hg, const Catalog& catalog, Split split,
                      const BiCrRelOptions& opts) {
  PairSet ps;
  ps.name = kBiCrRel;
  ps.split = split;
  for (const auto& [q, clips] : hg.by_caption) {
    const CaptionItem* cap = catalog.find_caption(q);
    if (!cap) throw DanglingReference("unknown caption '" + q + "'", q);
    if (cap->split != split) continue;
    const std::string& a_q = cap->source_clip_id;
    for (const auto& c : clips) {
      const AudioClip* clip = catalog.find_clip(c);
      if (!clip) throw DanglingReference("unknown clip '" + c + "'", c);
      if (clip->split != split) {
        throw DataError("high-graded clip '" + c + "' is not in split " +
                        std::string(to_string(split)));
      }
      ps.add(c, q);
      for (const auto& k : catalog.authored_captions(c)) {
        if (opts.rule2_selected_only && !hg.by_caption.contains(k)) continue;
        ps.add(a_q, k);
      }
      for (const auto& s : catalog.authored_captions(a_q)) {
        if (s != q) ps.add(c, s);
      }
    }
  }
  return ps;
}

PairSet build_birel(const PairSet& bicrrel, const Catalog& catalog) {
  PairSet ps;
  ps.name = kBiRel;
  ps.split = bicrrel.split;
  for (const auto& cap : catalog.captions()) {
    if (cap.split != bicrrel.split) continue;
    if (bicrrel.clip_universe.contains(cap.source_clip_id) ||
        bicrrel.caption_universe.contains(cap.caption_id)) {
      ps.add(cap.source_clip_id, cap.caption_id);
    }
  }
  return ps;
}

PairSet union_pairs(const PairSet& a, const PairSet& b) {
  if (a.split != b.split) {
    throw InvalidArgument("cannot unite pair sets from splits " + std::string(to_string(a.split)) +
                          " and " + std::string(to_string(b.split)));
  }
  PairSet u = a;
  u.name = kUnion;
  u.positives.insert(b.positives.begin(), b.positives.end());
  u.clip_universe.insert(b.clip_universe.begin(), b.clip_universe.end());
  u.caption_universe.insert(b.caption_universe.begin(), b.caption_universe.end());
  return u;
}

std::set<AudioCaptionPair> overlap(const PairSet& a, const PairSet& b) {
  std::set<AudioCaptionPair> out;
  for (const auto& p : a.positives) {
    if (b.positives.contains(p)) out.insert(p);
  }
  return out;
}

std::string write_pairs(const std::vector<PairSet>& sets, std::string_view prefix) {
  TableWriter w({"name", "split", "clip_id", "caption_id"});
  for (const auto& s : sets) {
    for (const auto& [clip, cap] : s.positives) {
      w.add_row({s.name, std::string(to_string(s.split)), clip, cap});
    }
  }
  return w.str(prefix);
}

std::vector<PairSet> pairs_from_table(const Table& t) {
  const auto name = t.column("name");
  const auto split = t.column("split");
  const auto clip = t.column("clip_id");
  const auto cap = t.column("caption_id");
  std::map<std::pair<std::string, int>, PairSet> sets;
  std::vector<std::pair<std::string, int>> order;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    auto sp = parse_split(t.rows[r][split]);
    if (!sp) throw ParseError(t.source, t.row_lines[r], "unknown split");
    std::pair<std::string, int> key{t.rows[r][name], static_cast<int>(*sp)};
    auto [it, fresh] = sets.try_emplace(key);
    if (fresh) {
      it->second.name = key.first;
      it->second.split = *sp;
      order.push_back(key);
    }
    it->second.add(t.rows[r][clip], t.rows[r][cap]);
  }
  std::vector<PairSet> out;
  for (const auto& k : order) out.push_back(std::move(sets.at(k)));
  return out;
}

std::vector<PairSet> read_pairs(const std::string& path) {
  return pairs_from_table(read_table(path));
}

}  // namespace grel
