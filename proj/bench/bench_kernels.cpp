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

// Serial reference against the OpenMP kernels. Arg(0) is serial, Arg(1) parallel.

#include <benchmark/benchmark.h>

#include <string>
#include <vector>

#include "grel/eval.hpp"
#include "grel/infonce.hpp"
#include "grel/matrix.hpp"
#include "grel/util.hpp"

namespace {

using grel::Exec;
using grel::Matrix;

Matrix random_matrix(std::size_t r, std::size_t c, std::uint64_t seed) {
  grel::Rng rng(seed);
  Matrix m(r, c);
  for (double& x : m.data) x = rng.normal();
  return m;
}

Exec exec_of(const benchmark::State& st) { return st.range(0) ? Exec::parallel : Exec::serial; }

void BM_MatmulNT(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(1));
  Matrix a = random_matrix(n, 128, 1), b = random_matrix(n, 128, 2);
  for (auto _ : st) benchmark::DoNotOptimize(grel::kernels::matmul_nt(a, b, exec_of(st)));
  st.SetItemsProcessed(st.iterations() * n * n);
}
BENCHMARK(BM_MatmulNT)->ArgsProduct({{0, 1}, {64, 256, 512}});

void BM_Affine(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(1));
  Matrix x = random_matrix(n, 512, 3), w = random_matrix(128, 512, 4);
  std::vector<double> b(128, 0.1);
  for (auto _ : st) benchmark::DoNotOptimize(grel::kernels::affine(x, w, b, exec_of(st)));
}
BENCHMARK(BM_Affine)->ArgsProduct({{0, 1}, {64, 512}});

void BM_CosineMatrix(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(1));
  Matrix a = random_matrix(n, 128, 5), t = random_matrix(n, 128, 6);
  for (auto _ : st) benchmark::DoNotOptimize(grel::kernels::cosine_matrix(a, t, exec_of(st)));
}
BENCHMARK(BM_CosineMatrix)->ArgsProduct({{0, 1}, {128, 512}});

void BM_InfoNceGradients(benchmark::State& st) {
  const auto m = static_cast<std::size_t>(st.range(1));
  auto model = grel::ProjectionModel::init(256, 192, 128, 0.07, 7);
  Matrix audio = random_matrix(m, 256, 8), text = random_matrix(m, 192, 9);
  for (auto _ : st) {
    benchmark::DoNotOptimize(grel::infonce_gradients(model, audio, text, exec_of(st)));
  }
}
BENCHMARK(BM_InfoNceGradients)->ArgsProduct({{0, 1}, {32, 128}});

void BM_RankAll(benchmark::State& st) {
  const auto n = static_cast<std::size_t>(st.range(1));
  grel::EmbeddingTable audio(64), text(48);
  grel::Rng rng(10);
  std::vector<std::string> caps, clips;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<double> a(64), t(48);
    for (double& x : a) x = rng.normal();
    for (double& x : t) x = rng.normal();
    clips.push_back("clip" + std::to_string(i));
    caps.push_back("cap" + std::to_string(i));
    audio.add(clips.back(), a);
    text.add(caps.back(), t);
  }
  auto model = grel::ProjectionModel::init(64, 48, 32, 0.07, 11);
  for (auto _ : st) {
    benchmark::DoNotOptimize(grel::rank_all(model, caps, clips, audio, text, exec_of(st)));
  }
}
BENCHMARK(BM_RankAll)->ArgsProduct({{0, 1}, {200, 1000}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
