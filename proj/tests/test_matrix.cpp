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

#include <gtest/gtest.h>

#include <cmath>

#include "grel/error.hpp"
#include "grel/matrix.hpp"
#include "grel/util.hpp"

namespace grel {
namespace {

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  Rng rng(seed);
  Matrix m(r, c);
  for (double& x : m.data) x = rng.uniform(-1.0, 1.0);
  return m;
}

// Triple loop written against the definition, long double accumulation.
Matrix naive_nt(const Matrix& a, const Matrix& b) {
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    for (std::size_t j = 0; j < b.rows; ++j) {
      long double s = 0;
      for (std::size_t k = 0; k < a.cols; ++k) s += (long double)a(i, k) * b(j, k);
      c(i, j) = static_cast<double>(s);
    }
  }
  return c;
}

void expect_close(const Matrix& a, const Matrix& b, double tol) {
  ASSERT_EQ(a.rows, b.rows);
  ASSERT_EQ(a.cols, b.cols);
  for (std::size_t i = 0; i < a.data.size(); ++i) EXPECT_NEAR(a.data[i], b.data[i], tol) << i;
}

TEST(Kernels, MatchNaiveOracle) {
  auto a = random_matrix(13, 7, 1);
  auto b = random_matrix(9, 7, 2);
  auto c = random_matrix(9, 4, 3);
  auto d = random_matrix(13, 4, 4);
  expect_close(kernels::matmul_nt(a, b, Exec::serial), naive_nt(a, b), 1e-12);
  expect_close(kernels::matmul_nn(naive_nt(a, b), c, Exec::serial),
               naive_nt(naive_nt(a, b), c.transposed()), 1e-12);
  expect_close(kernels::matmul_tn(a, d, Exec::serial), naive_nt(a.transposed(), d.transposed()),
               1e-12);

  std::vector<double> bias{0.5, -1.0, 2.0, 0.0, 3.0, 1.0, -2.0, 0.25, 4.0};
  auto y = kernels::affine(a, b, bias, Exec::serial);
  auto ref = naive_nt(a, b);
  for (std::size_t i = 0; i < ref.rows; ++i) {
    for (std::size_t j = 0; j < ref.cols; ++j) ref(i, j) += bias[j];
  }
  expect_close(y, ref, 1e-12);
}

TEST(Kernels, SerialAndParallelAreBitIdentical) {
  auto a = random_matrix(64, 33, 5);
  auto b = random_matrix(48, 33, 6);
  auto c = random_matrix(48, 17, 7);
  std::vector<double> bias(48, 0.3);
  EXPECT_EQ(kernels::matmul_nt(a, b, Exec::serial), kernels::matmul_nt(a, b, Exec::parallel));
  auto ab = kernels::matmul_nt(a, b, Exec::serial);
  EXPECT_EQ(kernels::matmul_nn(ab, c, Exec::serial), kernels::matmul_nn(ab, c, Exec::parallel));
  EXPECT_EQ(kernels::matmul_tn(ab, a, Exec::serial), kernels::matmul_tn(ab, a, Exec::parallel));
  EXPECT_EQ(kernels::affine(a, b, bias, Exec::serial), kernels::affine(a, b, bias, Exec::parallel));
  EXPECT_EQ(kernels::cosine_matrix(a, b, Exec::serial),
            kernels::cosine_matrix(a, b, Exec::parallel));
  auto s = a, p = a;
  EXPECT_EQ(kernels::normalize_rows(s, Exec::serial), kernels::normalize_rows(p, Exec::parallel));
  EXPECT_EQ(s, p);
}

TEST(Kernels, CosineIdentityAndNegation) {
  auto a = random_matrix(6, 5, 8);
  auto z = kernels::cosine_matrix(a, a, Exec::serial);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(z(i, i), 1.0, 1e-12);
  Matrix neg = a;
  for (double& x : neg.data) x = -x;
  auto zn = kernels::cosine_matrix(a, neg, Exec::serial);
  for (std::size_t i = 0; i < 6; ++i) EXPECT_NEAR(zn(i, i), -1.0, 1e-12);
  for (double v : z.data) {
    EXPECT_LE(v, 1.0 + 1e-12);
    EXPECT_GE(v, -1.0 - 1e-12);
  }
  // Scaling a row never changes its cosines.
  Matrix scaled = a;
  for (double& x : scaled.row(2)) x *= 7.5;
  auto zs = kernels::cosine_matrix(scaled, a, Exec::serial);
  for (std::size_t j = 0; j < 6; ++j) EXPECT_NEAR(zs(2, j), z(2, j), 1e-12);
}

TEST(Kernels, NormalizeRowsReturnsNorms) {
  Matrix m(2, 2);
  m(0, 0) = 3;
  m(0, 1) = 4;
  m(1, 1) = -2;
  auto n = kernels::normalize_rows(m, Exec::serial);
  EXPECT_EQ(n, (std::vector<double>{5, 2}));
  EXPECT_DOUBLE_EQ(m(0, 0), 0.6);
  EXPECT_DOUBLE_EQ(m(1, 1), -1.0);
}

TEST(Kernels, ShapeAndZeroNormErrors) {
  Matrix z(2, 3);
  EXPECT_THROW(kernels::normalize_rows(z, Exec::serial), InvalidArgument);
  EXPECT_THROW(kernels::cosine_matrix(Matrix(2, 3, 1.0), Matrix(2, 3), Exec::parallel),
               InvalidArgument);
  EXPECT_THROW(kernels::matmul_nt(Matrix(2, 3), Matrix(2, 4), Exec::serial), InvalidArgument);
  EXPECT_THROW(kernels::matmul_nn(Matrix(2, 3), Matrix(2, 4), Exec::serial), InvalidArgument);
  EXPECT_THROW(kernels::matmul_tn(Matrix(2, 3), Matrix(3, 4), Exec::serial), InvalidArgument);
  std::vector<double> b(3);
  EXPECT_THROW(kernels::affine(Matrix(2, 3), Matrix(2, 3), b, Exec::serial), InvalidArgument);
}

TEST(MatrixType, TransposeTwiceIsIdentity) {
  auto a = random_matrix(3, 5, 9);
  auto t = a.transposed();
  EXPECT_EQ(t.rows, 5u);
  EXPECT_EQ(t(4, 2), a(2, 4));
  EXPECT_EQ(t.transposed(), a);
}

}  // namespace
}  // namespace grel
