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

#include <gtest/gtest.h>

#include <chrono>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "grel/service.hpp"
#include "test_support.hpp"

namespace grel::testing {

// Two captions (one per split), each with its own 17 clips, and 10 HITs.
struct World {
  Catalog catalog;
  std::vector<Hit> hits;
  std::vector<QualificationItem> pool;
};

inline World make_world(std::size_t pool_size = 10) {
  World w;
  std::vector<AudioClip> clips;
  std::vector<CaptionItem> caps;
  for (Split s : {Split::development, Split::evaluation}) {
    std::string p = s == Split::development ? "d" : "e";
    CandidateSet cs;
    cs.caption_id = p + "cap";
    cs.split = s;
    cs.tp_clip = p + "tp";
    cs.tn_clip = p + "tn";
    clips.push_back(clip(cs.tp_clip, s));
    clips.push_back(clip(cs.tn_clip, s));
    caps.push_back(caption(cs.caption_id, cs.tp_clip, s));
    caps.push_back(caption(p + "tn-cap", cs.tn_clip, s));
    for (int i = 0; i < 15; ++i) {
      std::string id = p + "c" + std::to_string(10 + i);
      clips.push_back(clip(id, s));
      caps.push_back(caption(id + "-cap", id, s));
      cs.c15.push_back(id);
    }
    auto b = build_hits(cs, 3);
    w.hits.insert(w.hits.end(), b.begin(), b.end());
  }
  clips[0].media_path = "audio/dtp.wav";
  w.catalog = Catalog(clips, caps);
  w.pool = make_qualification_pool(w.catalog, pool_size, 5);
  return w;
}

struct FakeClock {
  std::shared_ptr<TimePoint> now =
      std::make_shared<TimePoint>(TimePoint{} + std::chrono::hours(1000));
  Clock fn() const {
    return [p = now] { return *p; };
  }
  void advance(std::chrono::seconds s) { *now += s; }
};

inline std::map<std::string, std::string> correct_choices(const QualificationStart& s) {
  std::map<std::string, std::string> out;
  for (const auto& q : s.items) out[q.item_id] = q.correct;
  return out;
}

inline void qualify(AnnotationStore& st, const std::string& w) {
  auto s = st.qualification_start(w);
  if (s.already_qualified) return;
  ASSERT_TRUE(st.qualification_grade(w, correct_choices(s)).qualified);
}

inline std::map<std::string, int> scores_for(const IssuedAssignment& a, int v = 50) {
  std::map<std::string, int> out;
  for (const auto& c : a.payload.clips) out[c.clip_id] = v;
  return out;
}

inline std::map<std::string, bool> listened(const IssuedAssignment& a, bool v = true) {
  std::map<std::string, bool> out;
  for (const auto& c : a.payload.clips) out[c.clip_id] = v;
  return out;
}

}  // namespace grel::testing
