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
#include <string>
#include <vector>

#include "grel/catalog.hpp"
#include "grel/features.hpp"

namespace grel {

/// Clotho-shaped synthetic corpus: every clip has a latent content vector;
/// audio features, caption features and the baseline similarity table are all
/// noisy views of it, so authored pairs are genuinely similar.
struct SynthParams {
  std::size_t clips_per_split = 60;
  std::size_t selected_per_split = 20;  // query captions, one per distinct clip
  std::size_t captions_per_clip = 5;
  std::size_t latent_dim = 16;
  std::size_t audio_dim = 24;
  std::size_t text_dim = 20;
  double caption_noise = 0.3;  // caption latent = clip latent + this * N(0,I)
  double feature_noise = 0.05;
  double similarity_noise = 0.05;
  std::vector<Split> splits = {Split::development, Split::validation, Split::evaluation};
};

struct SynthData {
  Catalog catalog;  // similarity rows cover selected captions x clips of their split
  EmbeddingTable audio;
  EmbeddingTable text;
  std::vector<std::string> selected_captions;  // sorted
};

SynthData make_synthetic_corpus(const SynthParams& p, std::uint64_t seed);

}  // namespace grel
