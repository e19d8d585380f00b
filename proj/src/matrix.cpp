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

#include "grel/matrix.hpp"

#include <cmath>
#include <string>

#include "grel/error.hpp"

namespace grel {

Matrix Matrix::transposed() const {
  Matrix t(cols, rows);
  for (std::size_t i = 0; i < rows; ++i) {
    for (std::size_t j = 0; j < cols; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

namespace kernels {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw InvalidArgument(std::string("shape mismatch: ") + what);
}

using Index = std::ptrdiff_t;

}  // namespace

Matrix affine(const Matrix& x, const Matrix& w, std::span<const double> b, Exec ex) {
  require(x.cols == w.cols && b.size() == w.rows, "affine");
  Matrix y(x.rows, w.rows);
  const Index n = static_cast<Index>(x.rows);
  const std::size_t e = w.rows, d = w.cols;
  if (ex == Exec::serial) {
    for (Index i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < e; ++j) {
        double s = b[j];
        for (std::size_t k = 0; k < d; ++k) s += x(i, k) * w(j, k);
        y(i, j) = s;
      }
    }
    return y;
  }
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const double* xi = &x.data[i * d];
    double* yi = &y.data[i * e];
    for (std::size_t j = 0; j < e; ++j) {
      const double* wj = &w.data[j * d];
      double s = b[j];
      for (std::size_t k = 0; k < d; ++k) s += xi[k] * wj[k];
      yi[j] = s;
    }
  }
  return y;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b, Exec ex) {
  require(a.cols == b.cols, "matmul_nt");
  Matrix c(a.rows, b.rows);
  const Index n = static_cast<Index>(a.rows);
  const std::size_t m = b.rows, e = a.cols;
  if (ex == Exec::serial) {
    for (Index i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < m; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < e; ++k) s += a(i, k) * b(j, k);
        c(i, j) = s;
      }
    }
    return c;
  }
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    const double* ai = &a.data[i * e];
    for (std::size_t j = 0; j < m; ++j) {
      const double* bj = &b.data[j * e];
      double s = 0.0;
      for (std::size_t k = 0; k < e; ++k) s += ai[k] * bj[k];
      c.data[i * m + j] = s;
    }
  }
  return c;
}

Matrix matmul_nn(const Matrix& a, const Matrix& b, Exec ex) {
  require(a.cols == b.rows, "matmul_nn");
  Matrix c(a.rows, b.cols);
  const Index n = static_cast<Index>(a.rows);
  const std::size_t m = a.cols, e = b.cols;
  if (ex == Exec::serial) {
    for (Index i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < e; ++j) {
        double s = 0.0;
        for (std::size_t k = 0; k < m; ++k) s += a(i, k) * b(k, j);
        c(i, j) = s;
      }
    }
    return c;
  }
#pragma omp parallel for schedule(static)
  for (Index i = 0; i < n; ++i) {
    double* ci = &c.data[i * e];
    // k-outer keeps b's rows contiguous; each c(i, j) still sums k = 0..m-1.
    for (std::size_t k = 0; k < m; ++k) {
      const double aik = a.data[i * m + k];
      const double* bk = &b.data[k * e];
      for (std::size_t j = 0; j < e; ++j) ci[j] += aik * bk[j];
    }
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b, Exec ex) {
  require(a.rows == b.rows, "matmul_tn");
  Matrix c(a.cols, b.cols);
  const std::size_t n = a.rows, e = b.cols;
  const Index m = static_cast<Index>(a.cols);
  if (ex == Exec::serial) {
    for (Index j = 0; j < m; ++j) {
      for (std::size_t k = 0; k < e; ++k) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += a(i, j) * b(i, k);
        c(j, k) = s;
      }
    }
    return c;
  }
#pragma omp parallel for schedule(static)
  for (Index j = 0; j < m; ++j) {
    double* cj = &c.data[j * e];
    for (std::size_t i = 0; i < n; ++i) {
      const double aij = a.data[i * a.cols + j];
      const double* bi = &b.data[i * e];
      for (std::size_t k = 0; k < e; ++k) cj[k] += aij * bi[k];
    }
  }
  return c;
}

std::vector<double> normalize_rows(Matrix& m, Exec ex) {
  std::vector<double> norms(m.rows);
  const Index n = static_cast<Index>(m.rows);
  bool zero = false;
#pragma omp parallel for schedule(static) if (ex == Exec::parallel) reduction(|| : zero)
  for (Index i = 0; i < n; ++i) {
    auto r = m.row(static_cast<std::size_t>(i));
    double s = 0.0;
    for (double v : r) s += v * v;
    const double norm = std::sqrt(s);
    norms[i] = norm;
    if (!(norm > 0.0) || !std::isfinite(norm)) {
      zero = true;
      continue;
    }
    for (double& v : r) v /= norm;
  }
  if (zero) throw InvalidArgument("zero-norm (or non-finite) row in cosine similarity");
  return norms;
}

Matrix cosine_matrix(const Matrix& a, const Matrix& t, Exec ex) {
  Matrix an = a;
  Matrix tn = t;
  normalize_rows(an, ex);
  normalize_rows(tn, ex);
  return matmul_nt(an, tn, ex);
}

}  // namespace kernels
}  // namespace grel
