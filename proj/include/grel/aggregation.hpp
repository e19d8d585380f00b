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

#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grel/answers.hpp"
#include "grel/hits.hpp"

namespace grel {

struct AggregatedRelevance {
  std::string caption_id;
  std::string clip_id;
  Split split = Split::development;
  Role role = Role::C15;
  std::vector<int> raw_scores;  // ascending
  double agg_score = 0.0;
  std::size_t n_raw = 0;
};

/// Drops one maximum and one minimum and averages the rest. With two or
/// fewer scores there is nothing to trim and the plain mean is returned.
/// Throws InvalidArgument on empty input.
double trimmed_mean(std::span<const int> scores);

/// One row per (caption, clip), sorted by (caption_id, clip_id).
std::vector<AggregatedRelevance> aggregate_scores(const std::vector<AnswerRecord>& answers,
                                                  const HitIndex& hits);

struct HeadlineFractions {
  double eq0 = 0.0;
  double eq100 = 0.0;
  double lt20 = 0.0;
  double gt10 = 0.0;
  std::optional<double> threshold;
  double gt_threshold = 0.0;
};

struct Histogram {
  std::string label;
  int bin_width = 10;
  std::vector<std::size_t> bins;  // [0,w), [w,2w), ..., [100-w,100]
  std::size_t total = 0;
  HeadlineFractions fractions;
};

/// Exact counts over [0,100]; 100 lands in the top bin. bin_width must be a
/// positive divisor of 100.
Histogram distribution_report(std::span<const double> scores, std::string label,
                              int bin_width = 10,
                              std::optional<double> threshold = std::nullopt);

std::vector<double> raw_scores_for(const std::vector<AnswerRecord>& answers, Role role);
std::vector<double> agg_scores_for(const std::vector<AggregatedRelevance>& aggs, Role role);

/// Mean agg_score over TP rows, optionally restricted to one split.
double tp_mean_threshold(const std::vector<AggregatedRelevance>& aggs,
                         std::optional<Split> split = std::nullopt);

std::string write_aggregates(const std::vector<AggregatedRelevance>& aggs,
                             std::string_view prefix = {});
std::vector<AggregatedRelevance> aggregates_from_table(const Table& t);
std::vector<AggregatedRelevance> read_aggregates(const std::string& path);

/// label, bin_lo, bin_hi, count, fraction  (plot data)
std::string write_histograms(const std::vector<Histogram>& hs, std::string_view prefix = {});
/// label, total, eq0, eq100, lt20, gt10, threshold, gt_threshold
std::string write_headlines(const std::vector<Histogram>& hs, std::string_view prefix = {});

}  // namespace grel
