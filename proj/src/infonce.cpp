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

#include "grel/infonce.hpp"

#include <algorithm>
#include <cmath>

#include "grel/error.hpp"
#include "grel/util.hpp"

namespace grel {

ProjectionModel ProjectionModel::init(std::size_t audio_dim, std::size_t text_dim,
                                      std::size_t embed_dim, double tau, std::uint64_t seed) {
  if (audio_dim == 0 || text_dim == 0 || embed_dim == 0) {
    throw InvalidArgument("projection dimensions must be positive");
  }
  if (!(tau > 0.0)) throw InvalidArgument("temperature must be positive");
  ProjectionModel m;
  m.tau = tau;
  m.w_audio = Matrix(embed_dim, audio_dim);
  m.w_text = Matrix(embed_dim, text_dim);
  m.b_audio.assign(embed_dim, 0.0);
  m.b_text.assign(embed_dim, 0.0);
  Rng ra(derive_seed(seed, "init:audio"));
  const double la = std::sqrt(6.0 / static_cast<double>(audio_dim + embed_dim));
  for (double& v : m.w_audio.data) v = ra.uniform(-la, la);
  Rng rt(derive_seed(seed, "init:text"));
  const double lt = std::sqrt(6.0 / static_cast<double>(text_dim + embed_dim));
  for (double& v : m.w_text.data) v = rt.uniform(-lt, lt);
  return m;
}

std::vector<std::span<double>> ProjectionModel::blocks() {
  return {w_audio.data, b_audio, w_text.data, b_text};
}

std::vector<std::span<const double>> ProjectionModel::blocks() const {
  return {w_audio.data, b_audio, w_text.data, b_text};
}

std::size_t ProjectionModel::parameter_count() const {
  return w_audio.data.size() + b_audio.size() + w_text.data.size() + b_text.size();
}

Matrix ProjectionModel::project_audio(const Matrix& x, Exec ex) const {
  return kernels::affine(x, w_audio, b_audio, ex);
}

Matrix ProjectionModel::project_text(const Matrix& x, Exec ex) const {
  return kernels::affine(x, w_text, b_text, ex);
}

std::vector<std::span<const double>> ModelGrad::blocks() const {
  return {w_audio.data, b_audio, w_text.data, b_text};
}

namespace {

void check_square(const Matrix& z, double tau) {
  if (z.rows != z.cols) throw InvalidArgument("similarity matrix must be square");
  if (z.rows == 0) throw InvalidArgument("similarity matrix is empty");
  if (!(tau > 0.0)) throw InvalidArgument("temperature must be positive");
}

}  // namespace

LossAndGrad infonce_loss_and_grad(const Matrix& z, double tau) {
  check_square(z, tau);
  const std::size_t m = z.rows;
  const double inv_tau = 1.0 / tau;

  // Row softmax P and column softmax Q of Z / tau.
  Matrix p(m, m), q(m, m);
  double loss = 0.0;
  for (std::size_t i = 0; i < m; ++i) {
    double mx = z(i, 0) * inv_tau;
    for (std::size_t j = 1; j < m; ++j) mx = std::max(mx, z(i, j) * inv_tau);
    double s = 0.0;
    for (std::size_t j = 0; j < m; ++j) s += std::exp(z(i, j) * inv_tau - mx);
    const double lse = mx + std::log(s);
    for (std::size_t j = 0; j < m; ++j) p(i, j) = std::exp(z(i, j) * inv_tau - lse);
    loss += lse - z(i, i) * inv_tau;
  }
  for (std::size_t j = 0; j < m; ++j) {
    double mx = z(0, j) * inv_tau;
    for (std::size_t i = 1; i < m; ++i) mx = std::max(mx, z(i, j) * inv_tau);
    double s = 0.0;
    for (std::size_t i = 0; i < m; ++i) s += std::exp(z(i, j) * inv_tau - mx);
    const double lse = mx + std::log(s);
    for (std::size_t i = 0; i < m; ++i) q(i, j) = std::exp(z(i, j) * inv_tau - lse);
    loss += lse - z(j, j) * inv_tau;
  }

  LossAndGrad out;
  out.loss = loss / static_cast<double>(m);
  out.dz = Matrix(m, m);
  const double scale = inv_tau / static_cast<double>(m);
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < m; ++j) {
      out.dz(i, j) = scale * (p(i, j) + q(i, j) - (i == j ? 2.0 : 0.0));
    }
  }
  return out;
}

double infonce_loss(const Matrix& z, double tau) { return infonce_loss_and_grad(z, tau).loss; }

double batch_loss(const ProjectionModel& model, const Matrix& audio, const Matrix& text,
                  Exec ex) {
  if (audio.rows != text.rows) throw InvalidArgument("audio/text batch sizes differ");
  const Matrix a = model.project_audio(audio, ex);
  const Matrix t = model.project_text(text, ex);
  return infonce_loss(kernels::cosine_matrix(a, t, ex), model.tau);
}

namespace {

// Backprop through row normalization: for u = y / |y|,
//   dL/dy = (g - u (u . g)) / |y|
Matrix normalize_backward(const Matrix& unit, const std::vector<double>& norms, const Matrix& g) {
  Matrix dy(g.rows, g.cols);
  for (std::size_t i = 0; i < g.rows; ++i) {
    double dot = 0.0;
    for (std::size_t k = 0; k < g.cols; ++k) dot += unit(i, k) * g(i, k);
    for (std::size_t k = 0; k < g.cols; ++k) {
      dy(i, k) = (g(i, k) - unit(i, k) * dot) / norms[i];
    }
  }
  return dy;
}

std::vector<double> column_sums(const Matrix& m) {
  std::vector<double> s(m.cols, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) {
    for (std::size_t k = 0; k < m.cols; ++k) s[k] += m(i, k);
  }
  return s;
}

}  // namespace

BatchResult infonce_gradients(const ProjectionModel& model, const Matrix& audio,
                              const Matrix& text, Exec ex) {
  if (audio.rows != text.rows) throw InvalidArgument("audio/text batch sizes differ");
  Matrix a_unit = model.project_audio(audio, ex);
  Matrix t_unit = model.project_text(text, ex);
  const auto a_norm = kernels::normalize_rows(a_unit, ex);
  const auto t_norm = kernels::normalize_rows(t_unit, ex);
  const Matrix z = kernels::matmul_nt(a_unit, t_unit, ex);
  const LossAndGrad lg = infonce_loss_and_grad(z, model.tau);

  // z = A_unit T_unit^T  =>  dA_unit = dZ T_unit,  dT_unit = dZ^T A_unit
  const Matrix d_a_unit = kernels::matmul_nn(lg.dz, t_unit, ex);
  const Matrix d_t_unit = kernels::matmul_tn(lg.dz, a_unit, ex);
  const Matrix d_a = normalize_backward(a_unit, a_norm, d_a_unit);
  const Matrix d_t = normalize_backward(t_unit, t_norm, d_t_unit);

  BatchResult r;
  r.loss = lg.loss;
  r.grad.w_audio = kernels::matmul_tn(d_a, audio, ex);
  r.grad.b_audio = column_sums(d_a);
  r.grad.w_text = kernels::matmul_tn(d_t, text, ex);
  r.grad.b_text = column_sums(d_t);
  return r;
}

}  // namespace grel
