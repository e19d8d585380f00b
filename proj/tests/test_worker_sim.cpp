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

#include <set>

#include "grel/error.hpp"
#include "grel/worker_sim.hpp"

namespace grel {
namespace {

std::vector<Hit> hits_for(int captions) {
  std::vector<Hit> out;
  for (int c = 0; c < captions; ++c) {
    CandidateSet cs;
    cs.caption_id = "q" + std::to_string(c);
    cs.tp_clip = "tp" + std::to_string(c);
    cs.tn_clip = "tn" + std::to_string(c);
    for (int i = 0; i < 15; ++i) cs.c15.push_back(cs.caption_id + "c" + std::to_string(i));
    auto b = build_hits(cs, 9);
    out.insert(out.end(), b.begin(), b.end());
  }
  return out;
}

LatentRelevance fixed_latent(const std::vector<Hit>& hits) {
  LatentRelevance l;
  for (const auto& h : hits) {
    for (const auto& c : h.clips) {
      l[{h.caption_id, c.clip_id}] = c.role == Role::TP ? 100 : c.role == Role::TN ? 0 : 50;
    }
  }
  return l;
}

TEST(Simulate, ZeroNoiseHonestWorkerReproducesLatent) {
  auto hits = hits_for(2);
  auto plan = plan_assignments(hits, 1);
  auto ans = simulate(plan, hits, parse_worker_spec("honest:1:0"), fixed_latent(hits), 1);
  ASSERT_EQ(ans.size(), hits.size());
  for (const auto& a : ans) {
    EXPECT_EQ(a.s_tp, 100);
    EXPECT_EQ(a.s_tn, 0);
    EXPECT_EQ(a.s_c, (std::array<int, 3>{50, 50, 50}));
  }
}

TEST(Simulate, ConstantAndInvertedWorkers) {
  auto hits = hits_for(1);
  auto plan = plan_assignments(hits, 2);
  auto ans = simulate(plan, hits, parse_worker_spec("constant:2:0"), fixed_latent(hits), 1);
  for (const auto& a : ans) {
    EXPECT_EQ(a.s_tp, 0);
    EXPECT_EQ(a.s_tn, 0);
    EXPECT_EQ(a.s_c, (std::array<int, 3>{0, 0, 0}));
  }
  auto inv = simulate(plan_assignments(hits, 1), hits, parse_worker_spec("inverted:1:0"),
                      fixed_latent(hits), 1);
  for (const auto& a : inv) {
    EXPECT_EQ(a.s_tp, 0);
    EXPECT_EQ(a.s_tn, 100);
  }
}

TEST(Simulate, ScoresStayInRange) {
  auto hits = hits_for(4);
  auto ans = simulate(plan_assignments(hits, 3), hits, parse_worker_spec("noisy:3:80"),
                      default_latent(hits, 3), 3);
  for (const auto& a : ans) {
    for (int s : {a.s_tp, a.s_tn, a.s_c[0], a.s_c[1], a.s_c[2]}) {
      EXPECT_GE(s, 0);
      EXPECT_LE(s, 100);
    }
  }
}

TEST(Simulate, EachWorkerAnswersAHitAtMostOnce) {
  auto hits = hits_for(5);
  auto workers = parse_worker_spec("honest:4:10");
  auto more = parse_worker_spec("spammer:3");
  workers.insert(workers.end(), more.begin(), more.end());
  auto ans = simulate(plan_assignments(hits, 5), hits, workers, default_latent(hits, 2), 2);
  EXPECT_EQ(ans.size(), hits.size() * 5);
  std::set<std::pair<std::string, std::string>> seen;
  std::map<std::string, int> per_hit, per_worker;
  for (const auto& a : ans) {
    EXPECT_TRUE(seen.insert({a.hit_id, a.worker_id}).second);
    ++per_hit[a.hit_id];
    ++per_worker[a.worker_id];
  }
  for (const auto& [h, n] : per_hit) EXPECT_EQ(n, 5) << h;
  // Round-robin keeps the load within one of even.
  for (const auto& [w, n] : per_worker) EXPECT_NEAR(n, 125.0 / 7.0, 1.0) << w;
}

TEST(Simulate, DeterministicInSeed) {
  auto hits = hits_for(3);
  auto workers = parse_worker_spec("noisy:5:15");
  auto plan = plan_assignments(hits, 5);
  auto a = simulate(plan, hits, workers, default_latent(hits, 4), 4);
  EXPECT_EQ(a, simulate(plan, hits, workers, default_latent(hits, 4), 4));
  EXPECT_NE(a, simulate(plan, hits, workers, default_latent(hits, 4), 5));
  EXPECT_NE(default_latent(hits, 4), default_latent(hits, 6));
}

TEST(Simulate, Errors) {
  auto hits = hits_for(1);
  EXPECT_THROW(simulate(plan_assignments(hits, 3), hits, parse_worker_spec("honest:2"),
                        fixed_latent(hits), 1),
               InvalidArgument);
  EXPECT_THROW(simulate(plan_assignments(hits, 1), hits, parse_worker_spec("honest:1"), {}, 1),
               DataError);
}

TEST(DefaultLatent, RolesAndRange) {
  auto hits = hits_for(10);
  auto l = default_latent(hits, 11);
  for (const auto& h : hits) {
    for (const auto& c : h.clips) {
      double v = l.at({h.caption_id, c.clip_id});
      if (c.role == Role::TP) EXPECT_EQ(v, 95.0);
      if (c.role == Role::TN) EXPECT_EQ(v, 3.0);
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 100.0);
    }
  }
}

TEST(WorkerSpec, Parsing) {
  auto w = parse_worker_spec("noisy:3:12.5");
  ASSERT_EQ(w.size(), 3u);
  EXPECT_EQ(w[0].worker_id, "noisy-000");
  EXPECT_EQ(w[2].worker_id, "noisy-002");
  EXPECT_EQ(w[1].model.noise_sd, 12.5);
  auto c = parse_worker_spec("constant:1:37");
  EXPECT_EQ(c[0].model.kind, WorkerKind::constant);
  EXPECT_EQ(c[0].model.constant_value, 37);
  EXPECT_EQ(parse_worker_spec("spammer").size(), 1u);
  for (const char* bad : {"", "robot:2", "honest:0", "honest:x", "honest:1:-3", "a:1:2:3"}) {
    EXPECT_THROW(parse_worker_spec(bad), InvalidArgument) << bad;
  }
}

}  // namespace
}  // namespace grel
