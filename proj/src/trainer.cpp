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

#include "grel/trainer.hpp"

#include <cmath>
#include <limits>
#include <set>

#include "grel/error.hpp"
#include "grel/optim.hpp"
#include "json.hpp"

namespace grel {

void TrainConfig::validate() const {
  if (batch_size < 1) throw InvalidArgument("batch_size must be >= 1");
  if (!(lr0 > 0.0)) throw InvalidArgument("lr0 must be positive");
  if (!(plateau_factor > 0.0 && plateau_factor < 1.0)) {
    throw InvalidArgument("plateau_factor must lie in (0,1)");
  }
  if (plateau_patience < 1 || early_stop_patience < 1) {
    throw InvalidArgument("patience values must be >= 1");
  }
  if (!(tau > 0.0)) throw InvalidArgument("tau must be positive");
  if (max_epochs < 1) throw InvalidArgument("max_epochs must be >= 1");
  if (embed_dim < 1) throw InvalidArgument("embed_dim must be >= 1");
}

std::vector<std::vector<std::size_t>> make_batches(const std::vector<AudioCaptionPair>& pairs,
                                                   std::size_t batch_size, Rng& rng) {
  std::vector<std::size_t> pending(pairs.size());
  for (std::size_t i = 0; i < pending.size(); ++i) pending[i] = i;
  rng.shuffle(pending);

  std::vector<std::vector<std::size_t>> batches;
  while (!pending.empty()) {
    std::vector<std::size_t> batch;
    std::vector<std::size_t> deferred;
    std::set<std::string_view> clips, captions;
    for (std::size_t idx : pending) {
      const auto& [clip, cap] = pairs[idx];
      if (batch.size() < batch_size && !clips.contains(clip) && !captions.contains(cap)) {
        batch.push_back(idx);
        clips.insert(clip);
        captions.insert(cap);
      } else {
        deferred.push_back(idx);
      }
    }
    batches.push_back(std::move(batch));
    pending = std::move(deferred);
  }
  return batches;
}

namespace {

void split_ids(const std::vector<AudioCaptionPair>& pairs, const std::vector<std::size_t>& batch,
               std::vector<std::string>& clips, std::vector<std::string>& caps) {
  clips.clear();
  caps.clear();
  for (std::size_t i : batch) {
    clips.push_back(pairs[i].first);
    caps.push_back(pairs[i].second);
  }
}

void check_coverage(const PairSet& ps, const EmbeddingTable& audio, const EmbeddingTable& text) {
  for (const auto& [clip, cap] : ps.positives) {
    if (!audio.contains(clip)) {
      throw DataError("coverage gap: no audio features for clip '" + clip + "'");
    }
    if (!text.contains(cap)) {
      throw DataError("coverage gap: no text features for caption '" + cap + "'");
    }
  }
}

}  // namespace

double mean_loss(const ProjectionModel& model, const std::vector<AudioCaptionPair>& pairs,
                 const std::vector<std::vector<std::size_t>>& batches, const EmbeddingTable& audio,
                 const EmbeddingTable& text, Exec ex) {
  double total = 0.0;
  std::size_t n = 0;
  std::vector<std::string> clips, caps;
  for (const auto& b : batches) {
    split_ids(pairs, b, clips, caps);
    total += batch_loss(model, audio.gather(clips), text.gather(caps), ex) *
             static_cast<double>(b.size());
    n += b.size();
  }
  return n ? total / static_cast<double>(n) : 0.0;
}

TrainResult train(const PairSet& train_pairs, const EmbeddingTable& audio,
                  const EmbeddingTable& text, const TrainConfig& cfg, const PairSet& val_pairs,
                  const TrainHooks& hooks) {
  cfg.validate();
  if (train_pairs.positives.empty()) throw InvalidArgument("training pair set is empty");
  if (val_pairs.positives.empty()) throw InvalidArgument("validation pair set is empty");
  check_coverage(train_pairs, audio, text);
  check_coverage(val_pairs, audio, text);

  const std::vector<AudioCaptionPair> train_list(train_pairs.positives.begin(),
                                                 train_pairs.positives.end());
  const std::vector<AudioCaptionPair> val_list(val_pairs.positives.begin(),
                                               val_pairs.positives.end());
  Rng val_rng(derive_seed(cfg.seed, "val-batches"));
  const auto val_batches = make_batches(val_list, cfg.batch_size, val_rng);

  TrainResult res;
  ProjectionModel model = ProjectionModel::init(audio.dim(), text.dim(), cfg.embed_dim, cfg.tau,
                                                derive_seed(cfg.seed, "init"));
  res.initial_val_loss = mean_loss(model, val_list, val_batches, audio, text, cfg.exec);
  res.model = model;

  Adam adam;
  PlateauSchedule schedule(cfg.lr0, cfg.plateau_factor, cfg.plateau_patience);
  EarlyStopping stopper(cfg.early_stop_patience);
  double best_val = std::numeric_limits<double>::infinity();
  std::vector<std::string> clips, caps;

  for (int epoch = 1; epoch <= cfg.max_epochs; ++epoch) {
    const double lr = schedule.lr();
    Rng rng(derive_seed(cfg.seed, "epoch:" + std::to_string(epoch)));
    const auto batches = make_batches(train_list, cfg.batch_size, rng);
    double train_total = 0.0;
    for (const auto& b : batches) {
      split_ids(train_list, b, clips, caps);
      const BatchResult r =
          infonce_gradients(model, audio.gather(clips), text.gather(caps), cfg.exec);
      adam.step(model.blocks(), r.grad.blocks(), lr);
      train_total += r.loss * static_cast<double>(b.size());
    }
    double val = mean_loss(model, val_list, val_batches, audio, text, cfg.exec);
    if (hooks.val_loss_override) val = hooks.val_loss_override(epoch, val);

    res.history.push_back(
        {epoch, train_total / static_cast<double>(train_list.size()), val, lr});
    if (val < best_val) {
      best_val = val;
      res.model = model;
      res.best_epoch = epoch;
    }
    schedule.step(val);
    if (stopper.step(val)) {
      res.early_stopped = true;
      break;
    }
  }
  return res;
}

namespace {

nlohmann::ordered_json matrix_json(const Matrix& m) {
  nlohmann::ordered_json j;
  j["rows"] = m.rows;
  j["cols"] = m.cols;
  j["data"] = m.data;
  return j;
}

Matrix matrix_from_json(const nlohmann::json& j) {
  Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
  m.data = j.at("data").get<std::vector<double>>();
  if (m.data.size() != m.rows * m.cols) throw ParseError("checkpoint matrix has wrong size");
  return m;
}

}  // namespace

std::string encode_checkpoint(const Checkpoint& ck, std::string_view header) {
  nlohmann::ordered_json j;
  j["format"] = "grel-projection/1";
  j["train_regime"] = ck.train_regime;
  j["best_epoch"] = ck.best_epoch;
  j["tau"] = ck.model.tau;
  nlohmann::ordered_json cfg;
  cfg["batch_size"] = ck.config.batch_size;
  cfg["lr0"] = ck.config.lr0;
  cfg["plateau_factor"] = ck.config.plateau_factor;
  cfg["plateau_patience"] = ck.config.plateau_patience;
  cfg["early_stop_patience"] = ck.config.early_stop_patience;
  cfg["tau"] = ck.config.tau;
  cfg["seed"] = ck.config.seed;
  cfg["max_epochs"] = ck.config.max_epochs;
  cfg["embed_dim"] = ck.config.embed_dim;
  j["config"] = cfg;
  j["w_audio"] = matrix_json(ck.model.w_audio);
  j["b_audio"] = ck.model.b_audio;
  j["w_text"] = matrix_json(ck.model.w_text);
  j["b_text"] = ck.model.b_text;
  return std::string(header) + j.dump() + "\n";
}

Checkpoint decode_checkpoint(std::string_view text, const std::string& source) {
  std::size_t pos = 0;
  while (pos < text.size() && text[pos] == '#') {
    auto nl = text.find('\n', pos);
    pos = nl == text.npos ? text.size() : nl + 1;
  }
  Checkpoint ck;
  try {
    const auto j = nlohmann::json::parse(text.substr(pos));
    if (j.at("format") != "grel-projection/1") throw ParseError(source + ": unknown format");
    ck.train_regime = j.at("train_regime").get<std::string>();
    ck.best_epoch = j.at("best_epoch").get<int>();
    const auto& c = j.at("config");
    ck.config.batch_size = c.at("batch_size").get<std::size_t>();
    ck.config.lr0 = c.at("lr0").get<double>();
    ck.config.plateau_factor = c.at("plateau_factor").get<double>();
    ck.config.plateau_patience = c.at("plateau_patience").get<int>();
    ck.config.early_stop_patience = c.at("early_stop_patience").get<int>();
    ck.config.tau = c.at("tau").get<double>();
    ck.config.seed = c.at("seed").get<std::uint64_t>();
    ck.config.max_epochs = c.at("max_epochs").get<int>();
    ck.config.embed_dim = c.at("embed_dim").get<std::size_t>();
    ck.model.tau = j.at("tau").get<double>();
    ck.model.w_audio = matrix_from_json(j.at("w_audio"));
    ck.model.b_audio = j.at("b_audio").get<std::vector<double>>();
    ck.model.w_text = matrix_from_json(j.at("w_text"));
    ck.model.b_text = j.at("b_text").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(source + ": bad checkpoint: " + e.what());
  }
  const auto& m = ck.model;
  if (m.b_audio.size() != m.w_audio.rows || m.b_text.size() != m.w_text.rows ||
      m.w_audio.rows != m.w_text.rows || !(m.tau > 0.0)) {
    throw ParseError(source + ": inconsistent checkpoint shapes");
  }
  for (auto block : m.blocks()) {
    for (double v : block) {
      if (!std::isfinite(v)) throw ParseError(source + ": non-finite parameter");
    }
  }
  return ck;
}

std::string write_history(const std::vector<EpochRecord>& h, std::string_view prefix) {
  TableWriter w({"epoch", "train_loss", "val_loss", "lr"});
  for (const auto& e : h) {
    w.add_row({std::to_string(e.epoch), format_double(e.train_loss), format_double(e.val_loss),
               format_double(e.lr)});
  }
  return w.str(prefix);
}

}  // namespace grel
