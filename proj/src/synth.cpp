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

#include "grel/synth.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

namespace {

std::string short_name(Split s) {
  switch (s) {
    case Split::development: return "dev";
    case Split::validation: return "val";
    case Split::evaluation: return "eva";
  }
  return "x";
}

std::vector<double> gaussian(Rng& rng, std::size_t n) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.normal();
  return v;
}

std::vector<double> mix(const Matrix& m, const std::vector<double>& z, double noise, Rng& rng) {
  std::vector<double> out(m.rows);
  for (std::size_t i = 0; i < m.rows; ++i) {
    double s = 0.0;
    for (std::size_t k = 0; k < m.cols; ++k) s += m(i, k) * z[k];
    out[i] = s + noise * rng.normal();
  }
  return out;
}

double cosine(const std::vector<double>& a, const std::vector<double>& b) {
  double ab = 0.0, aa = 0.0, bb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ab += a[i] * b[i];
    aa += a[i] * a[i];
    bb += b[i] * b[i];
  }
  return ab / std::sqrt(aa * bb);
}

}  // namespace

SynthData make_synthetic_corpus(const SynthParams& p, std::uint64_t seed) {
  if (p.captions_per_clip < 1 || p.captions_per_clip > kMaxCaptionsPerClip) {
    throw InvalidArgument("captions_per_clip must be in [1,5]");
  }
  if (p.selected_per_split > p.clips_per_split) {
    throw InvalidArgument("cannot select more captions than there are clips");
  }
  Rng mix_rng(derive_seed(seed, "synth:mix"));
  Matrix audio_mix(p.audio_dim, p.latent_dim), text_mix(p.text_dim, p.latent_dim);
  const double scale = 1.0 / std::sqrt(static_cast<double>(p.latent_dim));
  for (double& v : audio_mix.data) v = scale * mix_rng.normal();
  for (double& v : text_mix.data) v = scale * mix_rng.normal();

  std::vector<AudioClip> clips;
  std::vector<CaptionItem> captions;
  SimilarityTable sim;
  SynthData out;
  out.audio = EmbeddingTable(p.audio_dim);
  out.text = EmbeddingTable(p.text_dim);

  for (Split split : p.splits) {
    Rng rng(derive_seed(seed, "synth:" + std::string(to_string(split))));
    std::vector<std::string> clip_ids;
    std::vector<std::vector<double>> latents;
    std::vector<std::pair<std::string, std::vector<double>>> selected;  // caption, latent
    for (std::size_t i = 0; i < p.clips_per_split; ++i) {
      char name[64];
      std::snprintf(name, sizeof(name), "%s-a%04zu", short_name(split).c_str(), i);
      AudioClip clip{name, split, rng.uniform(15.0, 30.0), ""};
      auto z = gaussian(rng, p.latent_dim);
      out.audio.add(clip.clip_id, mix(audio_mix, z, p.feature_noise, rng));
      for (std::size_t c = 0; c < p.captions_per_clip; ++c) {
        CaptionItem cap;
        cap.caption_id = clip.clip_id + "-c" + std::to_string(c + 1);
        cap.split = split;
        cap.source_clip_id = clip.clip_id;
        cap.text = "synthetic caption " + std::to_string(c + 1) + " of " + clip.clip_id;
        auto zc = z;
        for (double& v : zc) v += p.caption_noise * rng.normal();
        out.text.add(cap.caption_id, mix(text_mix, zc, p.feature_noise, rng));
        if (c == 0 && i < p.selected_per_split) selected.emplace_back(cap.caption_id, zc);
        captions.push_back(std::move(cap));
      }
      clip_ids.push_back(clip.clip_id);
      latents.push_back(std::move(z));
      clips.push_back(std::move(clip));
    }
    for (const auto& [cap_id, zc] : selected) {
      auto& row = sim[cap_id];
      for (std::size_t i = 0; i < clip_ids.size(); ++i) {
        row[clip_ids[i]] = cosine(zc, latents[i]) + p.similarity_noise * rng.normal();
      }
      out.selected_captions.push_back(cap_id);
    }
  }
  std::sort(out.selected_captions.begin(), out.selected_captions.end());
  out.catalog = Catalog(std::move(clips), std::move(captions), std::move(sim));
  return out;
}

}  // namespace grel
