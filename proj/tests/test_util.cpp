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
#include <map>
#include <set>

#include "grel/error.hpp"
#include "grel/util.hpp"
#include "test_support.hpp"

namespace grel {
namespace {

TEST(Hashing, Fnv1aReferenceVectors) {
  EXPECT_EQ(fnv1a64(""), 0xcbf29ce484222325ULL);
  EXPECT_EQ(fnv1a64("a"), 0xaf63dc4c8601ec8cULL);
  EXPECT_EQ(fnv1a64("foobar"), 0x85944171f73967e8ULL);
}

TEST(Hashing, SplitMixReferenceValue) {
  // First output of the reference splitmix64 generator seeded with 0.
  EXPECT_EQ(splitmix64(0), 0xe220a8397b1dcdafULL);
}

TEST(Hashing, DerivedSeedsDependOnKeyAndSeed) {
  EXPECT_EQ(derive_seed(7, "x"), derive_seed(7, "x"));
  EXPECT_NE(derive_seed(7, "x"), derive_seed(7, "y"));
  EXPECT_NE(derive_seed(7, "x"), derive_seed(8, "x"));
}

TEST(Rng, SameSeedSameStream) {
  Rng a(99), b(99);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(a.next(), b.next());
}

TEST(Rng, BelowStaysInRangeAndCoversIt) {
  Rng r(1);
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 2000; ++i) {
    auto x = r.below(7);
    ASSERT_LT(x, 7u);
    seen.insert(x);
  }
  EXPECT_EQ(seen.size(), 7u);
}

TEST(Rng, BetweenIsInclusive) {
  Rng r(2);
  int lo = 100, hi = -100;
  for (int i = 0; i < 5000; ++i) {
    int x = r.between(0, 3);
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
  EXPECT_EQ(lo, 0);
  EXPECT_EQ(hi, 3);
}

TEST(Rng, UniformAndNormalMoments) {
  Rng r(3);
  const int n = 200000;
  double su = 0, sn = 0, snn = 0;
  for (int i = 0; i < n; ++i) {
    double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    su += u;
    double z = r.normal();
    sn += z;
    snn += z * z;
  }
  EXPECT_NEAR(su / n, 0.5, 0.01);
  EXPECT_NEAR(sn / n, 0.0, 0.01);
  EXPECT_NEAR(snn / n, 1.0, 0.02);
}

TEST(Rng, ShuffleIsAPermutation) {
  Rng r(4);
  std::vector<int> v(50);
  for (int i = 0; i < 50; ++i) v[i] = i;
  auto w = v;
  r.shuffle(w);
  EXPECT_NE(v, w);
  std::sort(w.begin(), w.end());
  EXPECT_EQ(v, w);
}

TEST(FormatDouble, RoundTripsExactly) {
  Rng r(5);
  for (int i = 0; i < 1000; ++i) {
    double x = (r.uniform() - 0.5) * std::pow(10.0, r.between(-20, 20));
    EXPECT_EQ(std::stod(format_double(x)), x);
  }
  EXPECT_EQ(format_double(0.5), "0.5");
  EXPECT_EQ(format_double(72.0), "72");
}

TEST(Files, AtomicWriteReplacesContent) {
  testing::TempDir dir;
  auto p = dir.write("a.txt", "one");
  write_file_atomic(p, "two");
  EXPECT_EQ(read_file(p), "two");
  EXPECT_THROW(read_file(dir.file("missing.txt")), DataError);
}

TEST(ArtifactHeader, LineCarriesToolSeedAndDigests) {
  ArtifactHeader h;
  h.stage = "qc";
  h.seed = 42;
  h.add_input("answers.tsv", "abc");
  std::string line = h.line();
  EXPECT_EQ(line.rfind(kHeaderPrefix, 0), 0u);
  EXPECT_NE(line.find("\"tool\":\"grel/0.1.0\""), std::string::npos);
  EXPECT_NE(line.find("\"seed\":42"), std::string::npos);
  EXPECT_NE(line.find(digest_hex("abc")), std::string::npos);
  EXPECT_EQ(line.back(), '\n');
}

TEST(ArtifactHeader, FileInputsUseBasenameAndContentDigest) {
  testing::TempDir dir;
  auto p = dir.write("in.tsv", "x\ty\n");
  ArtifactHeader h;
  h.add_input_file(p);
  ASSERT_EQ(h.inputs.size(), 1u);
  EXPECT_EQ(h.inputs[0].first, "in.tsv");
  EXPECT_EQ(h.inputs[0].second, digest_hex("x\ty\n"));
}

}  // namespace
}  // namespace grel
