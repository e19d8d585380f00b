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
#include "grel/optim.hpp"

namespace grel {
namespace {

TEST(Adam, FirstStepMovesByLrTimesSign) {
  std::vector<double> p{1.0, -2.0, 0.5};
  std::vector<double> g{0.3, -4.0, 1e-3};
  Adam adam;
  adam.step({std::span<double>(p)}, {std::span<const double>(g)}, 0.01);
  // Bias correction makes m_hat = g and v_hat = g^2 on step one.
  EXPECT_NEAR(p[0], 1.0 - 0.01 * 0.3 / (0.3 + 1e-8), 1e-15);
  EXPECT_NEAR(p[1], -2.0 + 0.01 * 4.0 / (4.0 + 1e-8), 1e-15);
  EXPECT_NEAR(p[2], 0.5 - 0.01 * 1e-3 / (1e-3 + 1e-8), 1e-15);
  EXPECT_EQ(adam.steps(), 1u);
}

TEST(Adam, MatchesHandRolledRecurrence) {
  std::vector<double> p{0.7};
  Adam adam;
  double m = 0, v = 0, ref = 0.7;
  for (int t = 1; t <= 20; ++t) {
    std::vector<double> g{std::sin(t) + 2 * p[0]};
    double gr = std::sin(t) + 2 * ref;
    m = 0.9 * m + 0.1 * gr;
    v = 0.999 * v + 0.001 * gr * gr;
    ref -= 0.05 * (m / (1 - std::pow(0.9, t))) / (std::sqrt(v / (1 - std::pow(0.999, t))) + 1e-8);
    adam.step({std::span<double>(p)}, {std::span<const double>(g)}, 0.05);
    EXPECT_NEAR(p[0], ref, 1e-14) << t;
  }
}

TEST(Adam, MinimizesAQuadratic) {
  std::vector<double> p{3.0, -5.0};
  Adam adam;
  for (int t = 0; t < 3000; ++t) {
    std::vector<double> g{2 * (p[0] - 1), 2 * (p[1] + 2)};
    adam.step({std::span<double>(p)}, {std::span<const double>(g)}, 0.01);
  }
  EXPECT_NEAR(p[0], 1.0, 1e-2);
  EXPECT_NEAR(p[1], -2.0, 1e-2);
}

TEST(Adam, BlockMismatchesThrow) {
  std::vector<double> p{1, 2}, g{1};
  Adam adam;
  EXPECT_THROW(adam.step({std::span<double>(p)}, {std::span<const double>(g)}, 0.1),
               InvalidArgument);
  EXPECT_THROW(adam.step({std::span<double>(p)}, {}, 0.1), InvalidArgument);
}

TEST(PlateauSchedule, FlatForFiveEpochsDropsOnce) {
  PlateauSchedule s(1e-3, 0.1, 5);
  EXPECT_FALSE(s.step(1.0));
  int drops = 0;
  for (int e = 0; e < 5; ++e) drops += s.step(1.0);
  EXPECT_EQ(drops, 1);
  EXPECT_DOUBLE_EQ(s.lr(), 1e-4);
  // The counter restarts: four more flat epochs do nothing.
  for (int e = 0; e < 4; ++e) EXPECT_FALSE(s.step(1.0));
  EXPECT_EQ(s.reductions(), 1);
  EXPECT_TRUE(s.step(1.0));
  EXPECT_DOUBLE_EQ(s.lr(), 1e-5);
}

TEST(PlateauSchedule, StrictImprovementResetsTheCounter) {
  PlateauSchedule s(1e-3, 0.1, 3);
  for (double l : {5.0, 5.0, 5.0, 4.9, 5.0, 4.9}) EXPECT_FALSE(s.step(l)) << l;
  EXPECT_TRUE(s.step(4.9));
}

TEST(PlateauSchedule, RejectsBadConfig) {
  EXPECT_THROW(PlateauSchedule(0, 0.1, 5), InvalidArgument);
  EXPECT_THROW(PlateauSchedule(1e-3, 1.0, 5), InvalidArgument);
  EXPECT_THROW(PlateauSchedule(1e-3, 0.1, 0), InvalidArgument);
}

TEST(EarlyStopping, FlatForTenEpochsStops) {
  EarlyStopping es(10);
  EXPECT_FALSE(es.step(2.0));
  EXPECT_TRUE(es.improved());
  for (int e = 0; e < 9; ++e) EXPECT_FALSE(es.step(2.0)) << e;
  EXPECT_TRUE(es.step(2.0));
  EXPECT_FALSE(es.improved());
  EXPECT_EQ(es.best(), 2.0);
}

TEST(EarlyStopping, ImprovementKeepsItAlive) {
  EarlyStopping es(2);
  EXPECT_FALSE(es.step(3));
  EXPECT_FALSE(es.step(4));
  EXPECT_FALSE(es.step(2));
  EXPECT_FALSE(es.step(2));
  EXPECT_TRUE(es.step(2.5));
  EXPECT_THROW(EarlyStopping(0), InvalidArgument);
}

}  // namespace
}  // namespace grel
