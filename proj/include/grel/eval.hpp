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

#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "grel/features.hpp"
#include "grel/infonce.hpp"
#include "grel/pairs.hpp"

namespace grel {

/// Clips ordered by descending cosine similarity to the caption; equal
/// scores are ordered by clip_id.
struct RankedList {
  std::string caption_id;
  std::vector<std::string> clips;
};

/// Sorts `universe` (any order) by score, ties by id. `scores[i]` belongs to
/// `universe[i]`.
RankedList rank_by_scores(std::string caption_id, std::span<const std::string> universe,
                          std::span<const double> scores);

RankedList rank_clips(const ProjectionModel& model, const std::string& caption_id,
                      std::span<const std::string> clip_universe, const EmbeddingTable& audio,
                      const EmbeddingTable& text);

/// Ranks the universe for many queries; the clip side is projected once and
/// queries are distributed over threads under Exec::parallel.
std::vector<RankedList> rank_all(const ProjectionModel& model,
                                 std::span<const std::string> captions,
                                 std::span<const std::string> clip_universe,
                                 const EmbeddingTable& audio, const EmbeddingTable& text,
                                 Exec ex = Exec::parallel);

struct MetricReport {
  std::string name;
  std::size_t k = 10;
  std::map<std::string, double> per_query;
  double mean = 0.0;
  std::size_t n_queries = 0;
  /// Queries with no relevant clip inside their ranking; left out of the mean.
  std::vector<std::string> excluded;
};

/// Per query: |relevant in top k| / |relevant|, with relevance taken from the
/// pair set's positives restricted to the ranked clips.
MetricReport recall_at_k(const std::vector<RankedList>& rankings, const PairSet& pairs,
                         std::size_t k = 10);

struct MetricRow {
  std::string train_regime;
  std::string eval_regime;
  Split split = Split::evaluation;
  std::size_t k = 10;
  double mean_recall = 0.0;
  std::size_t n_queries = 0;
  std::size_t n_excluded = 0;
};

struct EvalOptions {
  std::size_t k = 10;
  /// Rank against this clip list instead of each pair set's own clip universe.
  std::optional<std::vector<std::string>> clip_universe;
  Exec exec = Exec::parallel;
};

/// One row per evaluation pair set. All sets must share a split.
std::vector<MetricRow> evaluate(const ProjectionModel& model, const std::string& train_regime,
                                const std::vector<PairSet>& eval_sets, const EmbeddingTable& audio,
                                const EmbeddingTable& text, const EvalOptions& opts = {});

/// train_regime, eval_regime, split, k, mean_recall, n_queries, n_excluded
std::string write_metrics(const std::vector<MetricRow>& rows, std::string_view prefix = {});

}  // namespace grel
