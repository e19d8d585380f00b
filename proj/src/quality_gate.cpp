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

#include "grel/quality_gate.hpp"

#include <cmath>
#include <cstdint>
#include <cstdlib>
#include <map>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

AnswerScores scores_of(const AnswerRecord& a) {
  return {a.s_tp, a.s_tn, a.s_c[0], a.s_c[1], a.s_c[2]};
}

ConsistencyStats worker_stats(std::span<const AnswerScores> d) {
  if (d.empty()) throw InvalidArgument("worker answer set is empty");

  // Integer sums keep the verdict exact; scores are bounded so int64 is ample.
  std::int64_t sum_x = 0;
  std::int64_t sum_y = 0;
  std::int64_t sum_yy = 0;
  for (const auto& s : d) {
    sum_x += s.tp - s.tn;
    for (std::int64_t y : {std::llabs(s.c1 - s.c2), std::llabs(s.c1 - s.c3),
                           std::llabs(s.c2 - s.c3)}) {
      sum_y += y;
      sum_yy += y * y;
    }
  }
  const auto n = static_cast<std::int64_t>(d.size());
  const std::int64_t m = 3 * n;

  ConsistencyStats st;
  st.n = d.size();
  st.e_x = static_cast<double>(sum_x) / static_cast<double>(n);
  st.e_y = static_cast<double>(sum_y) / static_cast<double>(m);
  double ss = 0.0;
  for (const auto& s : d) {
    for (int y : {std::abs(s.c1 - s.c2), std::abs(s.c1 - s.c3), std::abs(s.c2 - s.c3)}) {
      const double dev = y - st.e_y;
      ss += dev * dev;
    }
  }
  st.sd_y = std::sqrt(ss / static_cast<double>(m));

  // Scaled by m = 3n:  m*(E[X] - E[Y]) = 3*sum_x - sum_y  and
  // m^2 * Var(Y) = m*sum_yy - sum_y^2, so the check needs no division.
  const std::int64_t gap = 3 * sum_x - sum_y;
  const std::int64_t var_m2 = m * sum_yy - sum_y * sum_y;
  st.pass = gap >= 0 && static_cast<__int128>(gap) * gap >= static_cast<__int128>(var_m2);
  return st;
}

std::size_t FilterResult::rejected_workers() const {
  std::size_t n = 0;
  for (const auto& v : report) n += !v.stats.pass;
  return n;
}

FilterResult filter_answers(const std::vector<AnswerRecord>& answers, const HitIndex& hits,
                            const FilterOptions& opts) {
  for (const auto& a : answers) check_joinable(a, hits);

  using Key = std::pair<std::string, int>;  // (worker, split or -1)
  std::map<Key, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < answers.size(); ++i) {
    const int sp = opts.per_split ? static_cast<int>(answers[i].split) : -1;
    groups[{answers[i].worker_id, sp}].push_back(i);
  }

  std::vector<const Key*> keys;
  std::vector<const std::vector<std::size_t>*> members;
  for (const auto& [k, v] : groups) {
    keys.push_back(&k);
    members.push_back(&v);
  }

  FilterResult res;
  res.report.resize(keys.size());
#pragma omp parallel for schedule(dynamic)
  for (std::ptrdiff_t g = 0; g < static_cast<std::ptrdiff_t>(keys.size()); ++g) {
    std::vector<AnswerScores> d;
    d.reserve(members[g]->size());
    for (std::size_t i : *members[g]) d.push_back(scores_of(answers[i]));
    WorkerVerdict v;
    v.worker_id = keys[g]->first;
    if (keys[g]->second >= 0) v.split = static_cast<Split>(keys[g]->second);
    v.stats = worker_stats(d);
    res.report[g] = std::move(v);
  }

  std::map<Key, bool> passed;
  for (std::size_t g = 0; g < keys.size(); ++g) passed[*keys[g]] = res.report[g].stats.pass;
  for (const auto& a : answers) {
    const int sp = opts.per_split ? static_cast<int>(a.split) : -1;
    if (passed.at({a.worker_id, sp})) res.retained.push_back(a);
  }
  return res;
}

std::string write_rejection_report(const std::vector<WorkerVerdict>& report,
                                   std::string_view prefix) {
  TableWriter w({"worker_id", "split", "n", "e_x", "e_y", "sd_y", "verdict", "warning"});
  for (const auto& v : report) {
    w.add_row({v.worker_id, v.split ? std::string(to_string(*v.split)) : "all",
               std::to_string(v.stats.n), format_double(v.stats.e_x),
               format_double(v.stats.e_y), format_double(v.stats.sd_y),
               v.stats.pass ? "pass" : "fail", v.stats.zero_gap() ? "zero_gap" : ""});
  }
  return w.str(prefix);
}

}  // namespace grel
