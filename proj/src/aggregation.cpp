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

#include "grel/aggregation.hpp"

#include <algorithm>
#include <cstdint>
#include <map>
#include <numeric>
#include <sstream>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

double trimmed_mean(std::span<const int> scores) {
  if (scores.empty()) throw InvalidArgument("cannot aggregate an empty score group");
  std::int64_t sum = 0;
  int lo = scores[0];
  int hi = scores[0];
  for (int s : scores) {
    sum += s;
    lo = std::min(lo, s);
    hi = std::max(hi, s);
  }
  const auto n = static_cast<std::int64_t>(scores.size());
  if (n <= 2) return static_cast<double>(sum) / static_cast<double>(n);
  return static_cast<double>(sum - lo - hi) / static_cast<double>(n - 2);
}

std::vector<AggregatedRelevance> aggregate_scores(const std::vector<AnswerRecord>& answers,
                                                  const HitIndex& hits) {
  std::map<std::pair<std::string, std::string>, AggregatedRelevance> groups;
  auto add = [&](const AnswerRecord& a, const std::string& clip, Role role, int score) {
    auto [it, fresh] = groups.try_emplace({a.caption_id, clip});
    AggregatedRelevance& g = it->second;
    if (fresh) {
      g.caption_id = a.caption_id;
      g.clip_id = clip;
      g.split = a.split;
      g.role = role;
    } else if (g.role != role) {
      throw DataError("clip '" + clip + "' has conflicting roles for caption '" + a.caption_id +
                      "'");
    }
    g.raw_scores.push_back(score);
  };
  for (const auto& a : answers) {
    check_joinable(a, hits);
    add(a, a.tp_clip, Role::TP, a.s_tp);
    add(a, a.tn_clip, Role::TN, a.s_tn);
    for (std::size_t i = 0; i < 3; ++i) add(a, a.c_clips[i], Role::C15, a.s_c[i]);
  }

  std::vector<AggregatedRelevance> out;
  out.reserve(groups.size());
  for (auto& [key, g] : groups) out.push_back(std::move(g));
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(out.size()); ++i) {
    auto& g = out[i];
    std::sort(g.raw_scores.begin(), g.raw_scores.end());
    g.n_raw = g.raw_scores.size();
    g.agg_score = trimmed_mean(g.raw_scores);
  }
  return out;
}

Histogram distribution_report(std::span<const double> scores, std::string label, int bin_width,
                              std::optional<double> threshold) {
  if (bin_width <= 0 || 100 % bin_width != 0) {
    throw InvalidArgument("bin_width must divide 100, got " + std::to_string(bin_width));
  }
  Histogram h;
  h.label = std::move(label);
  h.bin_width = bin_width;
  const int nbins = 100 / bin_width;
  h.bins.assign(static_cast<std::size_t>(nbins), 0);
  h.fractions.threshold = threshold;
  std::size_t eq0 = 0, eq100 = 0, lt20 = 0, gt10 = 0, gt_t = 0;
  for (double v : scores) {
    if (!(v >= 0.0 && v <= 100.0)) {
      throw InvalidArgument("score outside [0,100]: " + format_double(v));
    }
    const int b = std::min(static_cast<int>(v / bin_width), nbins - 1);
    ++h.bins[static_cast<std::size_t>(b)];
    eq0 += v == 0.0;
    eq100 += v == 100.0;
    lt20 += v < 20.0;
    gt10 += v > 10.0;
    if (threshold) gt_t += v > *threshold;
  }
  h.total = scores.size();
  if (h.total > 0) {
    const auto t = static_cast<double>(h.total);
    h.fractions.eq0 = static_cast<double>(eq0) / t;
    h.fractions.eq100 = static_cast<double>(eq100) / t;
    h.fractions.lt20 = static_cast<double>(lt20) / t;
    h.fractions.gt10 = static_cast<double>(gt10) / t;
    h.fractions.gt_threshold = static_cast<double>(gt_t) / t;
  }
  return h;
}

std::vector<double> raw_scores_for(const std::vector<AnswerRecord>& answers, Role role) {
  std::vector<double> out;
  for (const auto& a : answers) {
    switch (role) {
      case Role::TP: out.push_back(a.s_tp); break;
      case Role::TN: out.push_back(a.s_tn); break;
      case Role::C15: out.insert(out.end(), a.s_c.begin(), a.s_c.end()); break;
    }
  }
  return out;
}

std::vector<double> agg_scores_for(const std::vector<AggregatedRelevance>& aggs, Role role) {
  std::vector<double> out;
  for (const auto& g : aggs) {
    if (g.role == role) out.push_back(g.agg_score);
  }
  return out;
}

double tp_mean_threshold(const std::vector<AggregatedRelevance>& aggs,
                         std::optional<Split> split) {
  double sum = 0.0;
  std::size_t n = 0;
  for (const auto& g : aggs) {
    if (g.role != Role::TP) continue;
    if (split && g.split != *split) continue;
    sum += g.agg_score;
    ++n;
  }
  if (n == 0) throw DataError("no TP aggregates to derive a threshold from");
  return sum / static_cast<double>(n);
}

std::string write_aggregates(const std::vector<AggregatedRelevance>& aggs,
                             std::string_view prefix) {
  TableWriter w({"caption_id", "clip_id", "split", "role", "n_raw", "agg_score", "raw_scores"});
  for (const auto& g : aggs) {
    std::string raw;
    for (std::size_t i = 0; i < g.raw_scores.size(); ++i) {
      if (i) raw.push_back(' ');
      raw += std::to_string(g.raw_scores[i]);
    }
    w.add_row({g.caption_id, g.clip_id, std::string(to_string(g.split)),
               std::string(to_string(g.role)), std::to_string(g.n_raw),
               format_double(g.agg_score), raw});
  }
  return w.str(prefix);
}

std::vector<AggregatedRelevance> aggregates_from_table(const Table& t) {
  const auto cap = t.column("caption_id");
  const auto clip = t.column("clip_id");
  const auto split = t.column("split");
  const auto role = t.column("role");
  const auto n_raw = t.column("n_raw");
  const auto agg = t.column("agg_score");
  const bool has_raw = t.has_column("raw_scores");
  const auto raw = has_raw ? t.column("raw_scores") : 0;
  std::vector<AggregatedRelevance> out;
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    AggregatedRelevance g;
    g.caption_id = t.rows[r][cap];
    g.clip_id = t.rows[r][clip];
    auto sp = parse_split(t.rows[r][split]);
    auto ro = parse_role(t.rows[r][role]);
    if (!sp || !ro) throw ParseError(t.source, t.row_lines[r], "bad split or role");
    g.split = *sp;
    g.role = *ro;
    g.n_raw = static_cast<std::size_t>(parse_int(t, r, n_raw));
    g.agg_score = parse_real(t, r, agg);
    if (!(g.agg_score >= 0.0 && g.agg_score <= 100.0)) {
      throw ParseError(t.source, t.row_lines[r], "agg_score outside [0,100]");
    }
    if (has_raw) {
      std::istringstream ss(t.rows[r][raw]);
      int v;
      while (ss >> v) g.raw_scores.push_back(v);
    }
    out.push_back(std::move(g));
  }
  return out;
}

std::vector<AggregatedRelevance> read_aggregates(const std::string& path) {
  return aggregates_from_table(read_table(path));
}

std::string write_histograms(const std::vector<Histogram>& hs, std::string_view prefix) {
  TableWriter w({"label", "bin_lo", "bin_hi", "count", "fraction"});
  for (const auto& h : hs) {
    for (std::size_t b = 0; b < h.bins.size(); ++b) {
      const double frac =
          h.total ? static_cast<double>(h.bins[b]) / static_cast<double>(h.total) : 0.0;
      w.add_row({h.label, std::to_string(static_cast<int>(b) * h.bin_width),
                 std::to_string(static_cast<int>(b + 1) * h.bin_width),
                 std::to_string(h.bins[b]), format_double(frac)});
    }
  }
  return w.str(prefix);
}

std::string write_headlines(const std::vector<Histogram>& hs, std::string_view prefix) {
  TableWriter w({"label", "total", "eq0", "eq100", "lt20", "gt10", "threshold", "gt_threshold"});
  for (const auto& h : hs) {
    const auto& f = h.fractions;
    w.add_row({h.label, std::to_string(h.total), format_double(f.eq0), format_double(f.eq100),
               format_double(f.lt20), format_double(f.gt10),
               f.threshold ? format_double(*f.threshold) : "",
               f.threshold ? format_double(f.gt_threshold) : ""});
  }
  return w.str(prefix);
}

}  // namespace grel
