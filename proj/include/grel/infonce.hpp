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
#include <span>
#include <string>
#include <vector>

#include "grel/matrix.hpp"

namespace grel {

/// Two affine heads mapping precomputed audio / text features into a shared
/// embedding space, plus the softmax temperature.
struct ProjectionModel {
  Matrix w_audio;  // e x d_a
  std::vector<double> b_audio;
  Matrix w_text;  // e x d_t
  std::vector<double> b_text;
  double tau = 0.07;

  std::size_t embed_dim() const { return w_audio.rows; }
  std::size_t audio_dim() const { return w_audio.cols; }
  std::size_t text_dim() const { return w_text.cols; }

  /// Glorot-uniform weights, zero biases.
  static ProjectionModel init(std::size_t audio_dim, std::size_t text_dim, std::size_t embed_dim,
                              double tau, std::uint64_t seed);

  /// Parameter blocks in a fixed order: w_audio, b_audio, w_text, b_text.
  std::vector<std::span<double>> blocks();
  std::vector<std::span<const double>> blocks() const;
  std::size_t parameter_count() const;

  Matrix project_audio(const Matrix& x, Exec ex) const;
  Matrix project_text(const Matrix& x, Exec ex) const;
};

/// Same layout as ProjectionModel::blocks().
struct ModelGrad {
  Matrix w_audio;
  std::vector<double> b_audio;
  Matrix w_text;
  std::vector<double> b_text;

  std::vector<std::span<const double>> blocks() const;
};

/// Symmetric InfoNCE over an M x M cosine matrix:
///   L = -(1/M) sum_i [ log softmax_row(Z/tau)_ii + log softmax_col(Z/tau)_ii ]
/// Log-sum-exp uses max subtraction. Throws InvalidArgument for a non-square
/// or empty Z, or tau <= 0.
double infonce_loss(const Matrix& z, double tau);

struct LossAndGrad {
  double loss = 0.0;
  Matrix dz;  // dL/dZ
};

/// dL/dz_ij = (P_ij + Q_ij - 2 delta_ij) / (M tau), P/Q the row/column softmaxes.
LossAndGrad infonce_loss_and_grad(const Matrix& z, double tau);

struct BatchResult {
  double loss = 0.0;
  ModelGrad grad;
};

/// Loss of a batch of M paired feature rows (row i of each is a positive
/// pair, every other combination a negative).
double batch_loss(const ProjectionModel& model, const Matrix& audio, const Matrix& text,
                  Exec ex = Exec::parallel);

/// Loss plus exact gradients w.r.t. both heads, chained through the softmax,
/// the cosine normalization and the affine maps.
BatchResult infonce_gradients(const ProjectionModel& model, const Matrix& audio,
                              const Matrix& text, Exec ex = Exec::parallel);

}  // namespace grel
