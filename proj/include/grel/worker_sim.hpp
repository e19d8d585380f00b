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

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "grel/answers.hpp"
#include "grel/hits.hpp"

namespace grel {

enum class WorkerKind { honest, noisy, spammer, inverted, constant };

std::string_view to_string(WorkerKind k);
std::optional<WorkerKind> parse_worker_kind(std::string_view s);

/// honest/noisy: latent + N(0, noise_sd), clamped to [0,100] then rounded.
/// inverted: same, with the TP and TN latent scores swapped.
/// spammer: uniform integer in [0,100]. constant: always `constant_value`.
struct WorkerModel {
  WorkerKind kind = WorkerKind::honest;
  double noise_sd = 0.0;
  int constant_value = 0;
};

struct SimWorker {
  std::string worker_id;
  WorkerModel model;
};

/// (caption_id, clip_id) -> latent relevance in [0,100].
using LatentRelevance = std::map<std::pair<std::string, std::string>, double>;

struct LatentDefaults {
  double tp = 95.0;
  double tn = 3.0;
  // C15 mixture: weight and uniform range per component.
  struct Component {
    double weight;
    double lo;
    double hi;
  };
  std::vector<Component> c15 = {{0.7, 0.0, 20.0}, {0.2, 30.0, 70.0}, {0.1, 80.0, 100.0}};
};

LatentRelevance default_latent(const std::vector<Hit>& hits, std::uint64_t seed,
                               const LatentDefaults& d = {});

/// Each HIT (in plan order) is answered by `redundancy` distinct workers chosen
/// round-robin, so load is spread evenly. Output is sorted by (hit, worker) and
/// is a pure function of the arguments. Throws InvalidArgument when there are
/// fewer workers than the redundancy.
std::vector<AnswerRecord> simulate(const AssignmentPlan& plan, const std::vector<Hit>& hits,
                                   const std::vector<SimWorker>& workers,
                                   const LatentRelevance& latent, std::uint64_t seed);

/// Parses "kind[:count[:param]]" (param = noise_sd, or the value for
/// constant) into workers named "<kind>-NNN".
std::vector<SimWorker> parse_worker_spec(std::string_view spec);

}  // namespace grel
