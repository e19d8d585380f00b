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

#include <gtest/gtest.h>

#include <map>
#include <set>

#include "grel/error.hpp"
#include "grel/hits.hpp"
#include "grel/synth.hpp"
#include "test_support.hpp"

namespace grel {
namespace {

using testing::caption;
using testing::clip;

/// Caption "q" describes clip "t"; `n` other clips "k00".."k{n-1}" get
/// similarity 1 - i/n (so k00 is the most similar and the last the least).
Catalog pool_catalog(int n, Split s = Split::development) {
  std::vector<AudioClip> clips{clip("t", s)};
  std::vector<CaptionItem> caps{caption("q", "t", s)};
  SimilarityTable sim;
  sim["q"]["t"] = 1.0;
  for (int i = 0; i < n; ++i) {
    char id[8];
    std::snprintf(id, sizeof(id), "k%02d", i);
    clips.push_back(clip(id, s));
    caps.push_back(caption(std::string("cap-") + id, id, s));
    sim["q"][id] = 1.0 - static_cast<double>(i) / n;
  }
  return Catalog(clips, caps, sim);
}

TEST(SelectCandidates, PoolOfSeventeenIsForced) {
  Catalog c = pool_catalog(16);
  std::set<std::string> expected;
  for (const auto& x : c.clips()) {
    if (x.clip_id != "t" && x.clip_id != "k15") expected.insert(x.clip_id);
  }
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    CandidateSet cs = select_candidates(c, "q", {}, seed);
    EXPECT_EQ(cs.tp_clip, "t");
    EXPECT_EQ(cs.tn_clip, "k15");
    EXPECT_FALSE(cs.tn_verified);
    EXPECT_EQ(std::set<std::string>(cs.c15.begin(), cs.c15.end()), expected);
  }
}

TEST(SelectCandidates, TnIsTheArgminAndTopFiveFollowSimilarity) {
  Catalog c = pool_catalog(30);
  CandidateSet cs = select_candidates(c, "q", {}, 1);
  EXPECT_EQ(cs.tn_clip, "k29");
  ASSERT_EQ(cs.c15.size(), 15u);
  EXPECT_EQ(std::vector<std::string>(cs.c15.begin(), cs.c15.begin() + 5),
            (std::vector<std::string>{"k00", "k01", "k02", "k03", "k04"}));
  check_candidate_set(cs);
}

TEST(SelectCandidates, TnTieGoesToSmallestId) {
  Catalog base = pool_catalog(20);
  SimilarityTable sim = base.similarity_table();
  sim["q"]["k07"] = -1.0;
  sim["q"]["k03"] = -1.0;
  Catalog c(base.clips(), base.captions(), sim);
  EXPECT_EQ(select_candidates(c, "q", {}, 0).tn_clip, "k03");
}

TEST(SelectCandidates, SeedOnlyChangesTheRandomDraws) {
  Catalog c = pool_catalog(40);
  CandidateSet a = select_candidates(c, "q", {}, 1);
  bool any_diff = false;
  for (std::uint64_t seed = 2; seed < 12; ++seed) {
    CandidateSet b = select_candidates(c, "q", {}, seed);
    EXPECT_EQ(a.tp_clip, b.tp_clip);
    EXPECT_EQ(a.tn_clip, b.tn_clip);
    EXPECT_TRUE(std::equal(a.c15.begin(), a.c15.begin() + 5, b.c15.begin()));
    any_diff |= a.c15 != b.c15;
  }
  EXPECT_TRUE(any_diff);
  EXPECT_EQ(select_candidates(c, "q", {}, 1).c15, a.c15);
}

TEST(SelectCandidates, RandomDrawsAreRoughlyUniform) {
  Catalog c = pool_catalog(36);  // 35 eligible once the TN is out, 30 after top-5, 10 drawn
  std::map<std::string, int> hits;
  const int trials = 3000;
  for (int s = 0; s < trials; ++s) {
    auto cs = select_candidates(c, "q", {}, static_cast<std::uint64_t>(s));
    for (std::size_t i = 5; i < 15; ++i) ++hits[cs.c15[i]];
  }
  ASSERT_EQ(hits.size(), 30u);
  const double expected = trials * 10.0 / 30.0;
  for (const auto& [id, n] : hits) EXPECT_NEAR(n, expected, 0.15 * expected) << id;
}

TEST(SelectCandidates, OnlyClipsFromTheCaptionSplitAreUsed) {
  Catalog dev = pool_catalog(20);
  auto clips = dev.clips();
  auto caps = dev.captions();
  auto sim = dev.similarity_table();
  for (int i = 0; i < 10; ++i) {
    std::string id = "e" + std::to_string(i);
    clips.push_back(clip(id, Split::evaluation));
    caps.push_back(caption("cap-" + id, id, Split::evaluation));
    sim["q"][id] = 5.0;  // more similar than anything, but another split
  }
  Catalog c(clips, caps, sim);
  auto cs = select_candidates(c, "q", {}, 3);
  for (const auto& x : cs.c15) EXPECT_EQ(x[0], 'k');
  EXPECT_EQ(cs.c15[0], "k00");
}

TEST(SelectCandidates, Errors) {
  EXPECT_THROW(select_candidates(pool_catalog(15), "q", {}, 0), DataError);
  EXPECT_THROW(select_candidates(pool_catalog(20), "missing", {}, 0), DanglingReference);
  Catalog base = pool_catalog(20);
  SimilarityTable sim = base.similarity_table();
  sim["q"].erase("k05");
  EXPECT_THROW(select_candidates(Catalog(base.clips(), base.captions(), sim), "q", {}, 0),
               DataError);
  EXPECT_THROW(select_candidates(Catalog(base.clips(), base.captions()), "q", {}, 0), DataError);
}

TEST(SelectAll, TwoHundredCaptionsGiveThreeThousandSlots) {
  SynthParams p;
  p.clips_per_split = 220;
  p.selected_per_split = 200;
  p.captions_per_clip = 1;
  p.splits = {Split::development};
  auto d = make_synthetic_corpus(p, 11);
  auto sets = select_all(d.catalog, d.selected_captions, {}, 11);
  ASSERT_EQ(sets.size(), 200u);
  std::size_t slots = 0;
  for (const auto& cs : sets) {
    check_candidate_set(cs);
    slots += cs.c15.size();
  }
  EXPECT_EQ(slots, 3000u);
  auto serial_equiv = select_all(d.catalog, d.selected_captions, {}, 11);
  for (std::size_t i = 0; i < sets.size(); ++i) EXPECT_EQ(sets[i].c15, serial_equiv[i].c15);
}

CandidateSet sample_set() {
  CandidateSet cs;
  cs.caption_id = "cap";
  cs.split = Split::validation;
  cs.tp_clip = "tp";
  cs.tn_clip = "tn";
  for (int i = 0; i < 15; ++i) cs.c15.push_back("c" + std::to_string(i));
  return cs;
}

TEST(BuildHits, PartitionLawAndRoleCounts) {
  CandidateSet cs = sample_set();
  auto hits = build_hits(cs, 5);
  ASSERT_EQ(hits.size(), 5u);
  std::map<std::string, int> seen;
  for (std::size_t b = 0; b < hits.size(); ++b) {
    const Hit& h = hits[b];
    EXPECT_EQ(h.batch_index, static_cast<int>(b) + 1);
    EXPECT_EQ(h.hit_id, make_hit_id("cap", h.batch_index));
    EXPECT_EQ(h.split, Split::validation);
    EXPECT_EQ(h.with_role(Role::TP).clip_id, "tp");
    EXPECT_EQ(h.with_role(Role::TN).clip_id, "tn");
    std::set<int> positions;
    for (const auto& c : h.clips) {
      ++seen[c.clip_id];
      positions.insert(c.position);
    }
    EXPECT_EQ(positions, (std::set<int>{1, 2, 3, 4, 5}));
    // batch b holds c15[3b..3b+2] in list order
    auto c15 = h.c15_clips();
    std::set<std::string> batch(c15.begin(), c15.end());
    EXPECT_EQ(batch, (std::set<std::string>{cs.c15[3 * b], cs.c15[3 * b + 1], cs.c15[3 * b + 2]}));
  }
  EXPECT_EQ(seen["tp"], 5);
  EXPECT_EQ(seen["tn"], 5);
  for (const auto& c : cs.c15) EXPECT_EQ(seen[c], 1) << c;
}

TEST(BuildHits, DeterministicAndSeedSensitiveDisplayOrder) {
  CandidateSet cs = sample_set();
  EXPECT_EQ(write_hits(build_hits(cs, 9)), write_hits(build_hits(cs, 9)));
  std::set<int> tp_positions;
  for (std::uint64_t s = 0; s < 200; ++s) {
    for (const auto& h : build_hits(cs, s)) {
      for (const auto& c : h.clips) {
        if (c.role == Role::TP) tp_positions.insert(c.position);
      }
    }
  }
  EXPECT_EQ(tp_positions.size(), 5u);
}

TEST(BuildHits, RejectsInvalidCandidateSets) {
  CandidateSet cs = sample_set();
  cs.c15.pop_back();
  EXPECT_THROW(build_hits(cs, 0), InvalidArgument);
  cs = sample_set();
  cs.c15[3] = "tp";
  EXPECT_THROW(build_hits(cs, 0), InvalidArgument);
}

TEST(PlanAssignments, TargetsAndErrors) {
  std::vector<Hit> hits;
  for (int i = 0; i < 200; ++i) {
    CandidateSet cs = sample_set();
    cs.caption_id = "cap" + std::to_string(i);
    auto b = build_hits(cs, 1);
    hits.insert(hits.end(), b.begin(), b.end());
  }
  ASSERT_EQ(hits.size(), 1000u);
  EXPECT_EQ(plan_assignments(hits, 5).target_assignments(), 5000u);
  EXPECT_EQ(plan_assignments(hits, 1).target_assignments(), 1000u);
  EXPECT_THROW(plan_assignments(hits, 0), InvalidArgument);
}

TEST(HitsFile, RoundTripAndValidation) {
  auto hits = build_hits(sample_set(), 3);
  std::string text = write_hits(hits, "# header\n");
  auto back = parse_hits(text, "hits.jsonl");
  ASSERT_EQ(back.size(), hits.size());
  EXPECT_EQ(write_hits(back), write_hits(hits));
  HitIndex idx(back);
  EXPECT_EQ(idx.at("cap#3").batch_index, 3);
  EXPECT_EQ(idx.find("nope"), nullptr);
  EXPECT_THROW(idx.at("nope"), DanglingReference);

  std::string broken = text;
  broken.replace(broken.find("\"TN\""), 4, "\"TP\"");
  EXPECT_THROW(parse_hits(broken, "hits.jsonl"), ParseError);
  EXPECT_THROW(parse_hits("{not json}\n", "x"), ParseError);
}

TEST(CandidatesFile, RoundTrip) {
  std::vector<CandidateSet> sets{sample_set()};
  sets[0].tn_verified = true;
  auto back = parse_candidates(write_candidates(sets, "# h\n"), "c.jsonl");
  ASSERT_EQ(back.size(), 1u);
  EXPECT_TRUE(back[0].tn_verified);
  EXPECT_EQ(back[0].c15, sets[0].c15);
  EXPECT_EQ(back[0].split, Split::validation);
}

}  // namespace
}  // namespace grel
