// Copyright 2026 The metaformer-kit Authors
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

#include "metaformer/random.hpp"

using namespace metaformer;

TEST(Random, MatchesSplitMix64Reference)
{
  // Reference outputs of SplitMix64 seeded with 0.
  CounterRng rng(0);
  EXPECT_EQ(rng.next_u64(), 0xE220A8397B1DCDAFULL);
  EXPECT_EQ(rng.next_u64(), 0x6E789E6AA1B965F4ULL);
  EXPECT_EQ(rng.next_u64(), 0x06C45D188009454FULL);
}

TEST(Random, SameKeySameStream)
{
  CounterRng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    const auto va = a.next_u64();
    EXPECT_EQ(va, b.next_u64());
    EXPECT_NE(va, c.next_u64());
  }
}

TEST(Random, UniformRange)
{
  CounterRng rng(1);
  for (int i = 0; i < 100000; ++i) {
    const double u = rng.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    const float f = rng.uniform_float();
    ASSERT_GE(f, 0.0f);
    ASSERT_LT(f, 1.0f);
  }
}

TEST(Random, NormalMoments)
{
  CounterRng rng(2);
  const int n = 1'000'000;
  double s1 = 0, s2 = 0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s1 += x;
    s2 += x * x;
  }
  EXPECT_NEAR(s1 / n, 0.0, 5e-3);
  EXPECT_NEAR(s2 / n, 1.0, 5e-3);
}

TEST(Random, TruncatedNormalBounds)
{
  CounterRng rng(3);
  const double sigma = 0.02;
  double s2 = 0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.truncated_normal(sigma);
    ASSERT_LE(std::abs(x), 2 * sigma);
    s2 += x * x;
  }
  // variance of N(0, 1) truncated to [-2, 2] is 0.7737
  EXPECT_NEAR(s2 / n / (sigma * sigma), 0.7737, 0.01);
}

TEST(Random, DerivedSeedsDiffer)
{
  EXPECT_NE(derive_seed(0, "stem"), derive_seed(0, "stem.bias"));
  EXPECT_NE(derive_seed(0, "stem"), derive_seed(1, "stem"));
  EXPECT_EQ(derive_seed(7, "head.fc"), derive_seed(7, "head.fc"));
}
