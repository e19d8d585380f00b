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

#include <algorithm>
#include <numeric>

#include "grel/aggregation.hpp"
#include "grel/error.hpp"
#include "grel/util.hpp"
#include "test_support.hpp"

namespace grel {
namespace {

double oracle(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  if (v.size() >= 3) v = std::vector<int>(v.begin() + 1, v.end() - 1);
  long long s = std::accumulate(v.begin(), v.end(), 0LL);
  return static_cast<double>(s) / static_cast<double>(v.size());
}

TEST(TrimmedMean, HandExamples) {
  EXPECT_DOUBLE_EQ(trimmed_mean(std::vector<int>{0, 50, 100, 100, 100}), 250.0 / 3.0);
  EXPECT_EQ(trimmed_mean(std::vector<int>{5, 5, 5, 5, 5}), 5.0);
  EXPECT_EQ(trimmed_mean(std::vector<int>{100, 100, 0}), 100.0);
  EXPECT_EQ(trimmed_mean(std::vector<int>{40}), 40.0);
  EXPECT_EQ(trimmed_mean(std::vector<int>{40, 61}), 50.5);
  EXPECT_THROW(trimmed_mean(std::vector<int>{}), InvalidArgument);
}

TEST(TrimmedMean, EqualsSortAndSliceOracle) {
  Rng r(5);
  for (int t = 0; t < 2000; ++t) {
    std::vector<int> v(1 + r.below(12));
    for (int& x : v) x = r.between(0, 100);
    EXPECT_EQ(trimmed_mean(v), oracle(v));
  }
}

TEST(TrimmedMean, PermutationInvariantBoundedAndMonotone) {
  Rng r(6);
  for (int t = 0; t < 500; ++t) {
    std::vector<int> v(1 + r.below(10));
    for (int& x : v) x = r.between(0, 100);
    double m = trimmed_mean(v);
    auto w = v;
    r.shuffle(w);
    EXPECT_EQ(trimmed_mean(w), m);
    EXPECT_GE(m, *std::min_element(v.begin(), v.end()));
    EXPECT_LE(m, *std::max_element(v.begin(), v.end()));
    auto up = v;
    std::size_t i = r.below(up.size());
    up[i] = std::min(100, up[i] + r.between(1, 30));
    EXPECT_GE(trimmed_mean(up), m);
  }
}

struct Fixture {
  std::vector<Hit> hits;
  HitIndex index;
  std::vector<AnswerRecord> answers;
};

Fixture two_caption_fixture() {
  Fixture f;
  for (int c = 0; c < 2; ++c) {
    CandidateSet cs;
    cs.caption_id = "q" + std::to_string(c);
    cs.split = c == 0 ? Split::development : Split::evaluation;
    cs.tp_clip = "tp" + std::to_string(c);
    cs.tn_clip = "tn" + std::to_string(c);
    for (int i = 0; i < 15; ++i) cs.c15.push_back(cs.caption_id + "c" + std::to_string(i));
    auto b = build_hits(cs, 2);
    f.hits.insert(f.hits.end(), b.begin(), b.end());
  }
  f.index = HitIndex(f.hits);
  Rng r(8);
  for (const auto& h : f.hits) {
    for (int w = 0; w < 5; ++w) {
      std::map<std::string, int, std::less<>> s;
      for (const auto& x : h.clips) s[x.clip_id] = r.between(0, 100);
      f.answers.push_back(make_answer_record(h, "w" + std::to_string(w), s));
    }
  }
  return f;
}

TEST(AggregateScores, GroupsByCaptionAndClip) {
  auto f = two_caption_fixture();
  auto aggs = aggregate_scores(f.answers, f.index);
  // Per caption: TP, TN, 15 C15.
  ASSERT_EQ(aggs.size(), 34u);
  for (const auto& g : aggs) {
    std::vector<int> raw;
    for (const auto& a : f.answers) {
      if (a.caption_id != g.caption_id) continue;
      if (a.tp_clip == g.clip_id) raw.push_back(a.s_tp);
      if (a.tn_clip == g.clip_id) raw.push_back(a.s_tn);
      for (int i = 0; i < 3; ++i) {
        if (a.c_clips[i] == g.clip_id) raw.push_back(a.s_c[i]);
      }
    }
    std::sort(raw.begin(), raw.end());
    EXPECT_EQ(g.raw_scores, raw);
    EXPECT_EQ(g.n_raw, raw.size());
    EXPECT_EQ(g.agg_score, oracle(raw));
    EXPECT_EQ(g.n_raw, g.role == Role::C15 ? 5u : 25u);
  }
}

TEST(AggregateScores, IndependentOfInputOrder) {
  auto f = two_caption_fixture();
  auto a = aggregate_scores(f.answers, f.index);
  auto shuffled = f.answers;
  Rng r(3);
  r.shuffle(shuffled);
  EXPECT_EQ(write_aggregates(a), write_aggregates(aggregate_scores(shuffled, f.index)));
}

TEST(AggregateScores, FileRoundTrip) {
  auto f = two_caption_fixture();
  auto aggs = aggregate_scores(f.answers, f.index);
  testing::TempDir d;
  auto p = d.write("agg.tsv", write_aggregates(aggs, "# h\n"));
  auto back = read_aggregates(p);
  ASSERT_EQ(back.size(), aggs.size());
  for (std::size_t i = 0; i < aggs.size(); ++i) {
    EXPECT_EQ(back[i].caption_id, aggs[i].caption_id);
    EXPECT_EQ(back[i].role, aggs[i].role);
    EXPECT_EQ(back[i].split, aggs[i].split);
    EXPECT_EQ(back[i].raw_scores, aggs[i].raw_scores);
    EXPECT_EQ(back[i].agg_score, aggs[i].agg_score);
  }
}

TEST(DistributionReport, EmptyInputGivesZeroBins) {
  auto h = distribution_report({}, "empty");
  EXPECT_EQ(h.bins.size(), 10u);
  EXPECT_EQ(h.total, 0u);
  for (auto b : h.bins) EXPECT_EQ(b, 0u);
  EXPECT_EQ(h.fractions.eq0, 0.0);
}

TEST(DistributionReport, HandBuiltFixture) {
  std::vector<double> v{0, 0, 0, 5, 10, 15, 19.5, 20, 72, 72.5, 99.9, 100};
  auto h = distribution_report(v, "fx", 10, 72.0);
  EXPECT_EQ(h.total, 12u);
  EXPECT_EQ(h.bins[0], 4u);   // 0 0 0 5
  EXPECT_EQ(h.bins[1], 3u);   // 10 15 19.5
  EXPECT_EQ(h.bins[2], 1u);   // 20
  EXPECT_EQ(h.bins[7], 2u);   // 72 72.5
  EXPECT_EQ(h.bins[9], 2u);   // 99.9 and 100 in the top bin
  std::size_t sum = 0;
  for (auto b : h.bins) sum += b;
  EXPECT_EQ(sum, h.total);
  EXPECT_DOUBLE_EQ(h.fractions.eq0, 3.0 / 12);
  EXPECT_DOUBLE_EQ(h.fractions.eq100, 1.0 / 12);
  EXPECT_DOUBLE_EQ(h.fractions.lt20, 7.0 / 12);
  EXPECT_DOUBLE_EQ(h.fractions.gt10, 7.0 / 12);
  EXPECT_DOUBLE_EQ(h.fractions.gt_threshold, 3.0 / 12);  // strict: 72 excluded
}

TEST(DistributionReport, BinWidthValidationAndRange) {
  EXPECT_THROW(distribution_report({}, "x", 30), InvalidArgument);
  EXPECT_THROW(distribution_report({}, "x", 0), InvalidArgument);
  EXPECT_EQ(distribution_report({}, "x", 25).bins.size(), 4u);
  std::vector<double> bad{101};
  EXPECT_THROW(distribution_report(bad, "x"), InvalidArgument);
}

TEST(DistributionReport, HistogramTablesListEveryBin) {
  std::vector<double> v{0, 50, 100};
  auto h = distribution_report(v, "v", 50);
  Table t = parse_table(write_histograms({h}), '\t', "h");
  ASSERT_EQ(t.rows.size(), 2u);
  EXPECT_EQ(t.rows[1][1], "50");
  EXPECT_EQ(t.rows[1][2], "100");
  EXPECT_EQ(t.rows[1][3], "2");
  Table hl = parse_table(write_headlines({h}), '\t', "hl");
  EXPECT_EQ(hl.rows[0][0], "v");
}

TEST(TpMeanThreshold, ExamplesAndErrors) {
  std::vector<AggregatedRelevance> a(3);
  a[0].role = Role::TP;
  a[0].agg_score = 60;
  a[1].role = Role::TP;
  a[1].agg_score = 80;
  a[1].split = Split::evaluation;
  a[2].role = Role::C15;
  a[2].agg_score = 0;
  EXPECT_EQ(tp_mean_threshold(a), 70.0);
  EXPECT_EQ(tp_mean_threshold(a, Split::evaluation), 80.0);
  EXPECT_EQ(tp_mean_threshold({a[1]}), 80.0);
  a[0].agg_score = 72;
  EXPECT_EQ(tp_mean_threshold({a[0]}), 72.0);
  EXPECT_THROW(tp_mean_threshold({a[2]}), DataError);
  EXPECT_THROW(tp_mean_threshold(a, Split::validation), DataError);
}

TEST(ScoreExtraction, RawAndAggregatedByRole) {
  auto f = two_caption_fixture();
  EXPECT_EQ(raw_scores_for(f.answers, Role::TP).size(), f.answers.size());
  EXPECT_EQ(raw_scores_for(f.answers, Role::C15).size(), 3 * f.answers.size());
  auto aggs = aggregate_scores(f.answers, f.index);
  EXPECT_EQ(agg_scores_for(aggs, Role::TN).size(), 2u);
}

}  // namespace
}  // namespace grel
