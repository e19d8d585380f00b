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
#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "grel/features.hpp"
#include "grel/infonce.hpp"
#include "grel/pairs.hpp"
#include "grel/util.hpp"

namespace grel {

struct TrainConfig {
  std::size_t batch_size = 32;
  double lr0 = 1e-3;
  double plateau_factor = 0.1;
  int plateau_patience = 5;
  int early_stop_patience = 10;
  double tau = 0.07;
  std::uint64_t seed = 0;
  int max_epochs = 100;
  std::size_t embed_dim = 300;
  Exec exec = Exec::parallel;

  /// Throws InvalidArgument for any non-positive field or a factor outside (0,1).
  void validate() const;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
  double lr = 0.0;  // rate used during this epoch
};

struct TrainResult {
  ProjectionModel model;  // parameters of the best validation epoch
  std::vector<EpochRecord> history;
  double initial_val_loss = 0.0;
  int best_epoch = 0;
  bool early_stopped = false;
};

/// Test seam: replaces the measured validation loss of an epoch.
struct TrainHooks {
  std::function<double(int epoch, double measured)> val_loss_override;
};

/// Groups pair indices into batches of at most `batch_size`, in shuffled
/// order, never putting two pairs that share a clip or a caption in the same
/// batch. Pairs that cannot be placed without a repeat wait for a later batch.
std::vector<std::vector<std::size_t>> make_batches(const std::vector<AudioCaptionPair>& pairs,
                                                   std::size_t batch_size, Rng& rng);

/// Size-weighted mean batch loss over fixed batches.
double mean_loss(const ProjectionModel& model, const std::vector<AudioCaptionPair>& pairs,
                 const std::vector<std::vector<std::size_t>>& batches, const EmbeddingTable& audio,
                 const EmbeddingTable& text, Exec ex);

/// Trains both projection heads with Adam on in-batch InfoNCE. The learning
/// rate drops by plateau_factor after plateau_patience epochs without a
/// validation improvement; training stops after early_stop_patience such
/// epochs or max_epochs.
TrainResult train(const PairSet& train_pairs, const EmbeddingTable& audio,
                  const EmbeddingTable& text, const TrainConfig& cfg, const PairSet& val_pairs,
                  const TrainHooks& hooks = {});

struct Checkpoint {
  ProjectionModel model;
  TrainConfig config;
  std::string train_regime;
  int best_epoch = 0;
};

/// Header line followed by one JSON document.
std::string encode_checkpoint(const Checkpoint& ck, std::string_view header = {});
Checkpoint decode_checkpoint(std::string_view text, const std::string& source);

/// epoch, train_loss, val_loss, lr
std::string write_history(const std::vector<EpochRecord>& h, std::string_view prefix = {});

}  // namespace grel
