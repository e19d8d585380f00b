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

#include "grel/hits.hpp"

#include <algorithm>
#include <set>

#include "grel/error.hpp"
#include "grel/util.hpp"
#include "jsonl.hpp"

namespace grel {

CandidateSet select_candidates(const Catalog& catalog, std::string_view caption_id,
                               const SelectionParams& params, std::uint64_t seed) {
  const CaptionItem* cap = catalog.find_caption(caption_id);
  if (!cap) {
    throw DanglingReference("unknown caption '" + std::string(caption_id) + "'",
                            std::string(caption_id));
  }
  if (!catalog.has_similarity()) throw DataError("candidate selection needs a similarity table");

  const std::vector<std::string> pool = catalog.clips_in_split(cap->split);
  const std::size_t needed = 2 + params.top_k + params.random_k;
  if (pool.size() < needed) {
    throw DataError("candidate pool too small for caption '" + cap->caption_id + "': " +
                    std::to_string(pool.size()) + " clips, need " + std::to_string(needed));
  }

  struct Scored {
    double sim;
    const std::string* id;
  };
  std::vector<Scored> scored;
  scored.reserve(pool.size());
  for (const auto& clip : pool) {
    if (clip == cap->source_clip_id) continue;
    auto s = catalog.similarity(cap->caption_id, clip);
    if (!s) {
      throw DataError("missing similarity entry (" + cap->caption_id + ", " + clip + ")");
    }
    scored.push_back({*s, &clip});
  }

  CandidateSet cs;
  cs.caption_id = cap->caption_id;
  cs.split = cap->split;
  cs.tp_clip = cap->source_clip_id;

  // pool is sorted by id, so strict < keeps the smallest id among ties.
  std::size_t tn = 0;
  for (std::size_t i = 1; i < scored.size(); ++i) {
    if (scored[i].sim < scored[tn].sim) tn = i;
  }
  cs.tn_clip = *scored[tn].id;
  scored.erase(scored.begin() + static_cast<std::ptrdiff_t>(tn));

  std::stable_sort(scored.begin(), scored.end(),
                   [](const Scored& a, const Scored& b) { return a.sim > b.sim; });
  for (std::size_t i = 0; i < params.top_k; ++i) cs.c15.push_back(*scored[i].id);

  std::vector<std::string> rest;
  for (std::size_t i = params.top_k; i < scored.size(); ++i) rest.push_back(*scored[i].id);
  std::sort(rest.begin(), rest.end());

  Rng rng(derive_seed(seed, "select:" + cs.caption_id));
  for (std::size_t i = 0; i < params.random_k; ++i) {
    const std::size_t j = i + rng.below(rest.size() - i);
    std::swap(rest[i], rest[j]);
    cs.c15.push_back(rest[i]);
  }
  return cs;
}

std::vector<CandidateSet> select_all(const Catalog& catalog,
                                     const std::vector<std::string>& caption_ids,
                                     const SelectionParams& params, std::uint64_t seed) {
  std::vector<CandidateSet> out(caption_ids.size());
  std::string first_error;
  bool failed = false;
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(caption_ids.size()); ++i) {
    try {
      out[i] = select_candidates(catalog, caption_ids[i], params, seed);
    } catch (const std::exception& e) {
#pragma omp critical(grel_select_error)
      if (!failed) {
        failed = true;
        first_error = e.what();
      }
    }
  }
  if (failed) throw DataError(first_error);
  return out;
}

void check_candidate_set(const CandidateSet& cs, std::size_t expected_c15) {
  if (cs.c15.size() != expected_c15) {
    throw InvalidArgument("candidate set for '" + cs.caption_id + "' has " +
                          std::to_string(cs.c15.size()) + " C15 clips, expected " +
                          std::to_string(expected_c15));
  }
  std::set<std::string> ids{cs.tp_clip, cs.tn_clip};
  ids.insert(cs.c15.begin(), cs.c15.end());
  if (ids.size() != expected_c15 + 2) {
    throw InvalidArgument("candidate set for '" + cs.caption_id + "' has repeated clips");
  }
}

const HitClip* Hit::find(std::string_view clip_id) const {
  for (const auto& c : clips) {
    if (c.clip_id == clip_id) return &c;
  }
  return nullptr;
}

const HitClip& Hit::with_role(Role r) const {
  for (const auto& c : clips) {
    if (c.role == r) return c;
  }
  throw DataError("HIT '" + hit_id + "' has no " + std::string(to_string(r)) + " clip");
}

std::array<std::string, 3> Hit::c15_clips() const {
  std::array<std::string, 3> out;
  std::size_t n = 0;
  for (const auto& c : clips) {
    if (c.role == Role::C15) {
      if (n == 3) throw DataError("HIT '" + hit_id + "' has more than three C15 clips");
      out[n++] = c.clip_id;
    }
  }
  if (n != 3) throw DataError("HIT '" + hit_id + "' has fewer than three C15 clips");
  return out;
}

std::string make_hit_id(std::string_view caption_id, int batch_index) {
  return std::string(caption_id) + "#" + std::to_string(batch_index);
}

std::vector<Hit> build_hits(const CandidateSet& cs, std::uint64_t seed) {
  check_candidate_set(cs);
  std::vector<Hit> hits;
  hits.reserve(kHitsPerCaption);
  for (int b = 0; b < kHitsPerCaption; ++b) {
    Hit h;
    h.caption_id = cs.caption_id;
    h.split = cs.split;
    h.batch_index = b + 1;
    h.hit_id = make_hit_id(cs.caption_id, h.batch_index);
    std::array<HitClip, kClipsPerHit> slots{
        HitClip{cs.tp_clip, Role::TP, 0}, HitClip{cs.tn_clip, Role::TN, 0},
        HitClip{cs.c15[3 * b], Role::C15, 0}, HitClip{cs.c15[3 * b + 1], Role::C15, 0},
        HitClip{cs.c15[3 * b + 2], Role::C15, 0}};
    Rng rng(derive_seed(seed, "display:" + h.hit_id));
    rng.shuffle(std::span<HitClip>(slots));
    for (int p = 0; p < kClipsPerHit; ++p) slots[p].position = p + 1;
    h.clips = std::move(slots);
    hits.push_back(std::move(h));
  }
  return hits;
}

AssignmentPlan plan_assignments(const std::vector<Hit>& hits, int redundancy) {
  if (redundancy < 1) {
    throw InvalidArgument("redundancy must be >= 1, got " + std::to_string(redundancy));
  }
  AssignmentPlan plan;
  plan.redundancy = redundancy;
  plan.hit_ids.reserve(hits.size());
  for (const auto& h : hits) plan.hit_ids.push_back(h.hit_id);
  return plan;
}

HitIndex::HitIndex(const std::vector<Hit>& hits) {
  for (const auto& h : hits) {
    if (!hits_.emplace(h.hit_id, h).second) {
      throw DataError("duplicate hit_id '" + h.hit_id + "'");
    }
  }
}

const Hit* HitIndex::find(std::string_view hit_id) const {
  auto it = hits_.find(hit_id);
  return it == hits_.end() ? nullptr : &it->second;
}

const Hit& HitIndex::at(std::string_view hit_id) const {
  const Hit* h = find(hit_id);
  if (!h) {
    throw DanglingReference("unknown hit_id '" + std::string(hit_id) + "'", std::string(hit_id));
  }
  return *h;
}

std::string write_candidates(const std::vector<CandidateSet>& sets, std::string_view prefix) {
  std::string out(prefix);
  for (const auto& cs : sets) {
    nlohmann::ordered_json j;
    j["caption_id"] = cs.caption_id;
    j["split"] = to_string(cs.split);
    j["tp"] = cs.tp_clip;
    j["tn"] = cs.tn_clip;
    j["tn_verified"] = cs.tn_verified;
    j["c15"] = cs.c15;
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<CandidateSet> parse_candidates(std::string_view text, const std::string& source) {
  std::vector<CandidateSet> out;
  detail::for_each_json_line(text, source, [&](const nlohmann::json& j, std::size_t line) {
    CandidateSet cs;
    cs.caption_id = j.at("caption_id").get<std::string>();
    auto sp = parse_split(j.at("split").get<std::string>());
    if (!sp) throw ParseError(source, line, "unknown split");
    cs.split = *sp;
    cs.tp_clip = j.at("tp").get<std::string>();
    cs.tn_clip = j.at("tn").get<std::string>();
    cs.tn_verified = j.at("tn_verified").get<bool>();
    cs.c15 = j.at("c15").get<std::vector<std::string>>();
    out.push_back(std::move(cs));
  });
  return out;
}

std::string write_hits(const std::vector<Hit>& hits, std::string_view prefix) {
  std::string out(prefix);
  for (const auto& h : hits) {
    nlohmann::ordered_json j;
    j["hit_id"] = h.hit_id;
    j["caption_id"] = h.caption_id;
    j["split"] = to_string(h.split);
    j["batch_index"] = h.batch_index;
    auto clips = nlohmann::ordered_json::array();
    for (const auto& c : h.clips) {
      nlohmann::ordered_json cj;
      cj["clip_id"] = c.clip_id;
      cj["role"] = to_string(c.role);
      cj["position"] = c.position;
      clips.push_back(std::move(cj));
    }
    j["clips"] = std::move(clips);
    out += j.dump();
    out += '\n';
  }
  return out;
}

std::vector<Hit> parse_hits(std::string_view text, const std::string& source) {
  std::vector<Hit> out;
  detail::for_each_json_line(text, source, [&](const nlohmann::json& j, std::size_t line) {
    Hit h;
    h.hit_id = j.at("hit_id").get<std::string>();
    h.caption_id = j.at("caption_id").get<std::string>();
    auto sp = parse_split(j.at("split").get<std::string>());
    if (!sp) throw ParseError(source, line, "unknown split");
    h.split = *sp;
    h.batch_index = j.at("batch_index").get<int>();
    const auto& clips = j.at("clips");
    if (!clips.is_array() || clips.size() != kClipsPerHit) {
      throw ParseError(source, line, "a HIT must list exactly 5 clips");
    }
    int tp = 0, tn = 0, c15 = 0;
    for (std::size_t i = 0; i < kClipsPerHit; ++i) {
      auto role = parse_role(clips[i].at("role").get<std::string>());
      if (!role) throw ParseError(source, line, "unknown role");
      h.clips[i] = {clips[i].at("clip_id").get<std::string>(), *role,
                    clips[i].at("position").get<int>()};
      tp += *role == Role::TP;
      tn += *role == Role::TN;
      c15 += *role == Role::C15;
    }
    if (tp != 1 || tn != 1 || c15 != 3) {
      throw ParseError(source, line, "a HIT needs one TP, one TN and three C15 clips");
    }
    out.push_back(std::move(h));
  });
  return out;
}

}  // namespace grel
