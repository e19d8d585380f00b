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

#include "grel/eval.hpp"

#include <algorithm>
#include <numeric>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

RankedList rank_by_scores(std::string caption_id, std::span<const std::string> universe,
                          std::span<const double> scores) {
  std::vector<std::size_t> order(universe.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return universe[a] < universe[b];
  });
  RankedList r;
  r.caption_id = std::move(caption_id);
  r.clips.reserve(order.size());
  for (std::size_t i : order) r.clips.push_back(universe[i]);
  return r;
}

std::vector<RankedList> rank_all(const ProjectionModel& model,
                                 std::span<const std::string> captions,
                                 std::span<const std::string> clip_universe,
                                 const EmbeddingTable& audio, const EmbeddingTable& text,
                                 Exec ex) {
  Matrix clips = model.project_audio(audio.gather(clip_universe), ex);
  kernels::normalize_rows(clips, ex);
  Matrix queries = model.project_text(text.gather(captions), ex);
  kernels::normalize_rows(queries, ex);

  std::vector<RankedList> out(captions.size());
  const auto n = static_cast<std::ptrdiff_t>(captions.size());
  const std::size_t e = clips.cols;
#pragma omp parallel for schedule(dynamic) if (ex == Exec::parallel)
  for (std::ptrdiff_t q = 0; q < n; ++q) {
    std::vector<double> scores(clip_universe.size());
    const auto qv = queries.row(static_cast<std::size_t>(q));
    for (std::size_t c = 0; c < clip_universe.size(); ++c) {
      double s = 0.0;
      for (std::size_t k = 0; k < e; ++k) s += qv[k] * clips(c, k);
      scores[c] = s;
    }
    out[q] = rank_by_scores(captions[q], clip_universe, scores);
  }
  return out;
}

RankedList rank_clips(const ProjectionModel& model, const std::string& caption_id,
                      std::span<const std::string> clip_universe, const EmbeddingTable& audio,
                      const EmbeddingTable& text) {
  const std::string ids[] = {caption_id};
  return std::move(rank_all(model, ids, clip_universe, audio, text, Exec::serial).front());
}

MetricReport recall_at_k(const std::vector<RankedList>& rankings, const PairSet& pairs,
                         std::size_t k) {
  if (k < 1) throw InvalidArgument("k must be >= 1");
  const auto relevant = pairs.relevant_by_caption();
  MetricReport rep;
  rep.name = pairs.name;
  rep.k = k;
  double sum = 0.0;
  for (const auto& r : rankings) {
    auto it = relevant.find(r.caption_id);
    std::size_t total = 0, hits = 0;
    if (it != relevant.end()) {
      for (std::size_t i = 0; i < r.clips.size(); ++i) {
        if (it->second.contains(r.clips[i])) {
          ++total;
          if (i < k) ++hits;
        }
      }
    }
    if (total == 0) {
      rep.excluded.push_back(r.caption_id);
      continue;
    }
    const double rec = static_cast<double>(hits) / static_cast<double>(total);
    rep.per_query[r.caption_id] = rec;
    sum += rec;
  }
  rep.n_queries = rep.per_query.size();
  rep.mean = rep.n_queries ? sum / static_cast<double>(rep.n_queries) : 0.0;
  return rep;
}

std::vector<MetricRow> evaluate(const ProjectionModel& model, const std::string& train_regime,
                                const std::vector<PairSet>& eval_sets, const EmbeddingTable& audio,
                                const EmbeddingTable& text, const EvalOptions& opts) {
  for (const auto& s : eval_sets) {
    if (s.split != eval_sets.front().split) {
      throw InvalidArgument("evaluation pair sets come from different splits");
    }
  }
  std::vector<MetricRow> rows;
  for (const auto& s : eval_sets) {
    const std::vector<std::string> captions(s.caption_universe.begin(), s.caption_universe.end());
    const std::vector<std::string> universe =
        opts.clip_universe ? *opts.clip_universe
                           : std::vector<std::string>(s.clip_universe.begin(),
                                                      s.clip_universe.end());
    const auto rankings = rank_all(model, captions, universe, audio, text, opts.exec);
    const auto rep = recall_at_k(rankings, s, opts.k);
    rows.push_back({train_regime, s.name, s.split, opts.k, rep.mean, rep.n_queries,
                    rep.excluded.size()});
  }
  return rows;
}

std::string write_metrics(const std::vector<MetricRow>& rows, std::string_view prefix) {
  TableWriter w({"train_regime", "eval_regime", "split", "k", "mean_recall", "n_queries",
                 "n_excluded"});
  for (const auto& r : rows) {
    w.add_row({r.train_regime, r.eval_regime, std::string(to_string(r.split)),
               std::to_string(r.k), format_double(r.mean_recall), std::to_string(r.n_queries),
               std::to_string(r.n_excluded)});
  }
  return w.str(prefix);
}

}  // namespace grel
