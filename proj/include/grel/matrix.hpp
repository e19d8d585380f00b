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

#include <cstddef>
#include <span>
#include <vector>

namespace grel {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  std::span<double> row(std::size_t i) { return {data.data() + i * cols, cols}; }
  std::span<const double> row(std::size_t i) const { return {data.data() + i * cols, cols}; }

  Matrix transposed() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;
};

/// Which implementation of a kernel to run. `serial` is the plain reference
/// loop nest; `parallel` distributes output rows over OpenMP threads. Both
/// accumulate every output element in the same order, so results are
/// bit-identical.
enum class Exec { serial, parallel };

namespace kernels {

/// Y = X W^T + b     X: n x d, W: e x d, b: e  ->  Y: n x e
Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> b, Exec ex);
/// C = A B^T         A: n x e, B: m x e  ->  n x m
Matrix matmul_nt(const Matrix& a, const Matrix& b, Exec ex);
/// C = A B           A: n x m, B: m x e  ->  n x e
Matrix matmul_nn(const Matrix& a, const Matrix& b, Exec ex);
/// C = A^T B         A: n x m, B: n x e  ->  m x e
Matrix matmul_tn(const Matrix& a, const Matrix& b, Exec ex);

/// Unit-normalizes each row and returns the original norms. Throws
/// InvalidArgument on a zero-norm row.
std::vector<double> normalize_rows(Matrix& m, Exec ex);

/// z_ij = <a_i, t_j> / (|a_i| |t_j|)
Matrix cosine_matrix(const Matrix& a, const Matrix& t, Exec ex);

}  // namespace kernels
}  // namespace grel
