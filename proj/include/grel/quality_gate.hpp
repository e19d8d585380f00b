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

/// Role-resolved scores of one answer: TP, TN and the three C15 clips.
struct AnswerScores {
  int tp = 0;
  int tn = 0;
  int c1 = 0;
  int c2 = 0;
  int c3 = 0;
};

AnswerScores scores_of(const AnswerRecord& a);

/// Consistency statistics for one worker's answer set D.
///   X = s_tp - s_tn                     (one sample per answer)
///   Y = |s_ca - s_cb| over the 3 unordered C15 pairs (three per answer)
/// The worker passes iff E(X) >= E(Y) + sd(Y), sd being the population
/// standard deviation over all Y samples.
struct ConsistencyStats {
  std::size_t n = 0;
  double e_x = 0.0;
  double e_y = 0.0;
  double sd_y = 0.0;
  bool pass = false;

  /// e_x == 0 passes with >=, but usually means a constant worker.
  bool zero_gap() const { return e_x == 0.0; }
};

/// Throws InvalidArgument for an empty answer set. The verdict is decided in
/// exact integer arithmetic; the reported means are doubles.
ConsistencyStats worker_stats(std::span<const AnswerScores> d);

struct WorkerVerdict {
  std::string worker_id;
  std::optional<Split> split;  // nullopt when pooled across splits
  ConsistencyStats stats;
};

struct FilterOptions {
  /// Evaluate each worker separately per split (default) or pooled.
  bool per_split = true;
};

struct FilterResult {
  std::vector<AnswerRecord> retained;  // input order preserved
  std::vector<WorkerVerdict> report;   // sorted by (worker_id, split)

  std::size_t rejected_workers() const;
};

/// Drops every answer of each worker (or worker-split group) failing the
/// consistency check. Every answer must join to a HIT in `hits`.
FilterResult filter_answers(const std::vector<AnswerRecord>& answers, const HitIndex& hits,
                            const FilterOptions& opts = {});

/// worker_id, split, n, e_x, e_y, sd_y, verdict, warning
std::string write_rejection_report(const std::vector<WorkerVerdict>& report,
                                   std::string_view prefix = {});

}  // namespace grel
