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

#include <string>
#include <vector>

#include "grel/answers.hpp"
#include "grel/catalog.hpp"
#include "grel/hits.hpp"
#include "grel/table.hpp"

namespace grel {

/// Column names of a long-format answer table: one row per (HIT, worker, clip).
struct IngestColumns {
  std::string hit_id = "hit_id";
  std::string worker_id = "worker_id";
  std::string caption_id = "caption_id";
  std::string clip_id = "clip_id";
  std::string score = "score";
  std::string role = "role";
};

struct IngestResult {
  std::vector<Hit> hits;  // sorted by hit_id
  std::vector<AnswerRecord> answers;  // sorted by (hit_id, worker_id)
};

/// Pivots a long-format table into answer records and reconstructs the HITs
/// they answer. Display positions follow first appearance of each clip within
/// its HIT. Throws ParseError on malformed rows, DanglingReference for ids
/// missing from the catalog and DataError when a HIT is inconsistent (roles
/// disagree between rows, wrong role mix, or an answer not covering 5 clips).
IngestResult ingest_long_table(const Table& t, const Catalog& catalog,
                               const IngestColumns& cols = {});

}  // namespace grel
