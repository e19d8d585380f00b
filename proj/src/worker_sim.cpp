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

#include "grel/worker_sim.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

std::string_view to_string(WorkerKind k) {
  switch (k) {
    case WorkerKind::honest: return "honest";
    case WorkerKind::noisy: return "noisy";
    case WorkerKind::spammer: return "spammer";
    case WorkerKind::inverted: return "inverted";
    case WorkerKind::constant: return "constant";
  }
  return "?";
}

std::optional<WorkerKind> parse_worker_kind(std::string_view s) {
  for (auto k : {WorkerKind::honest, WorkerKind::noisy, WorkerKind::spammer,
                 WorkerKind::inverted, WorkerKind::constant}) {
    if (to_string(k) == s) return k;
  }
  return std::nullopt;
}

LatentRelevance default_latent(const std::vector<Hit>& hits, std::uint64_t seed,
                               const LatentDefaults& d) {
  double total_w = 0.0;
  for (const auto& c : d.c15) total_w += c.weight;
  if (d.c15.empty() || !(total_w > 0.0)) throw InvalidArgument("empty C15 latent mixture");

  LatentRelevance latent;
  for (const auto& h : hits) {
    for (const auto& c : h.clips) {
      auto key = std::make_pair(h.caption_id, c.clip_id);
      if (latent.contains(key)) continue;
      double v = 0.0;
      switch (c.role) {
        case Role::TP: v = d.tp; break;
        case Role::TN: v = d.tn; break;
        case Role::C15: {
          Rng rng(derive_seed(seed, "latent:" + h.caption_id + "\x1f" + c.clip_id));
          double pick = rng.uniform() * total_w;
          const auto* comp = &d.c15.back();
          for (const auto& k : d.c15) {
            if (pick < k.weight) {
              comp = &k;
              break;
            }
            pick -= k.weight;
          }
          v = rng.uniform(comp->lo, comp->hi);
          break;
        }
      }
      latent.emplace(std::move(key), v);
    }
  }
  return latent;
}

namespace {

int emit_score(const WorkerModel& m, double latent, Rng& rng) {
  switch (m.kind) {
    case WorkerKind::spammer:
      return rng.between(kMinScore, kMaxScore);
    case WorkerKind::constant:
      return std::clamp(m.constant_value, kMinScore, kMaxScore);
    case WorkerKind::honest:
    case WorkerKind::noisy:
    case WorkerKind::inverted: {
      const double noisy = latent + m.noise_sd * rng.normal();
      const double clamped = std::clamp(noisy, double(kMinScore), double(kMaxScore));
      return static_cast<int>(std::lround(clamped));
    }
  }
  return 0;
}

}  // namespace

std::vector<AnswerRecord> simulate(const AssignmentPlan& plan, const std::vector<Hit>& hits,
                                   const std::vector<SimWorker>& workers,
                                   const LatentRelevance& latent, std::uint64_t seed) {
  const auto r = static_cast<std::size_t>(plan.redundancy);
  if (plan.redundancy < 1) throw InvalidArgument("redundancy must be >= 1");
  if (workers.size() < r) {
    throw InvalidArgument("insufficient workers: " + std::to_string(workers.size()) +
                          " for redundancy " + std::to_string(r));
  }
  const HitIndex index(hits);
  std::vector<const Hit*> ordered;
  ordered.reserve(plan.hit_ids.size());
  for (const auto& id : plan.hit_ids) ordered.push_back(&index.at(id));

  auto latent_of = [&](const Hit& h, const std::string& clip) {
    auto it = latent.find({h.caption_id, clip});
    if (it == latent.end()) {
      throw DataError("no latent relevance for (" + h.caption_id + ", " + clip + ")");
    }
    return it->second;
  };
  // Resolve latent lookups up front so the parallel loop cannot throw.
  for (const Hit* h : ordered) {
    for (const auto& c : h->clips) latent_of(*h, c.clip_id);
  }

  std::vector<AnswerRecord> out(ordered.size() * r);
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(ordered.size()); ++i) {
    const Hit& h = *ordered[i];
    for (std::size_t j = 0; j < r; ++j) {
      const SimWorker& w = workers[(static_cast<std::size_t>(i) * r + j) % workers.size()];
      Rng rng(derive_seed(seed, "answer:" + w.worker_id + "\x1f" + h.hit_id));
      const double tp = latent.at({h.caption_id, h.with_role(Role::TP).clip_id});
      const double tn = latent.at({h.caption_id, h.with_role(Role::TN).clip_id});
      std::map<std::string, int, std::less<>> scores;
      for (const auto& c : h.clips) {
        double v = latent.at({h.caption_id, c.clip_id});
        if (w.model.kind == WorkerKind::inverted) {
          if (c.role == Role::TP) v = tn;
          if (c.role == Role::TN) v = tp;
        }
        scores.emplace(c.clip_id, emit_score(w.model, v, rng));
      }
      out[static_cast<std::size_t>(i) * r + j] = make_answer_record(h, w.worker_id, scores);
    }
  }
  sort_answers(out);
  return out;
}

std::vector<SimWorker> parse_worker_spec(std::string_view spec) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = spec.find(':', start);
    parts.push_back(spec.substr(start, colon == std::string_view::npos ? spec.npos : colon - start));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.empty() || parts.size() > 3) {
    throw InvalidArgument("bad worker spec '" + std::string(spec) + "'");
  }
  auto kind = parse_worker_kind(parts[0]);
  if (!kind) throw InvalidArgument("unknown worker kind '" + std::string(parts[0]) + "'");
  int count = 1;
  double param = 0.0;
  if (parts.size() >= 2) {
    auto res = std::from_chars(parts[1].data(), parts[1].data() + parts[1].size(), count);
    if (res.ec != std::errc() || count < 1) {
      throw InvalidArgument("bad worker count in '" + std::string(spec) + "'");
    }
  }
  if (parts.size() == 3) {
    auto res = std::from_chars(parts[2].data(), parts[2].data() + parts[2].size(), param);
    if (res.ec != std::errc() || param < 0.0) {
      throw InvalidArgument("bad worker parameter in '" + std::string(spec) + "'");
    }
  }
  std::vector<SimWorker> out;
  for (int i = 0; i < count; ++i) {
    char name[64];
    std::snprintf(name, sizeof(name), "%s-%03d", std::string(parts[0]).c_str(), i);
    WorkerModel m;
    m.kind = *kind;
    if (*kind == WorkerKind::constant) {
      m.constant_value = static_cast<int>(param);
    } else {
      m.noise_sd = param;
    }
    out.push_back({name, m});
  }
  return out;
}

}  // namespace grel
