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

#include "oracles.hpp"

using namespace metaformer;

TEST(Oracles, NaiveConvIdentityKernel)
{
  const Tensor x = oracle::random_tensor({2, 4, 5, 6}, 1);
  Tensor w({4, 4, 1, 1});
  for (std::size_t c = 0; c < 4; ++c) w(c, c, 0, 0) = 1.0f;
  EXPECT_EQ(oracle::naive_conv2d(x, w, 1, 0, 1).value, x);
}

TEST(Oracles, NaiveMatmulSmallExample)
{
  const Tensor a({2, 2}, {1, 2, 3, 4}), b({2, 2}, {5, 6, 7, 8});
  EXPECT_EQ(oracle::naive_matmul(a, b).value, Tensor({2, 2}, {19, 22, 43, 50}));
}

TEST(Oracles, NaiveAttentionSingleToken)
{
  const std::size_t c = 6;
  const Tensor x = oracle::random_tensor({1, c}, 2);
  const Tensor wq = oracle::random_tensor({c, c}, 3), wk = oracle::random_tensor({c, c}, 4);
  const Tensor wv = oracle::random_tensor({c, c}, 5), wo = oracle::random_tensor({c, c}, 6);
  const Tensor want =
    oracle::naive_matmul(oracle::naive_matmul(x, wv).value, wo).value;
  EXPECT_LE(max_abs_diff(oracle::naive_attention(x, wq, wk, wv, wo, 3).value, want), 1e-6);
}

TEST(Oracles, LongDoubleGeluAgainstKnownValues)
{
  EXPECT_NEAR(static_cast<double>(oracle::gelu(1.0L)), 0.8411919906082768, 1e-15);
  EXPECT_NEAR(static_cast<double>(oracle::gelu(-1.0L)), -0.15880800939172324, 1e-15);
}

TEST(Oracles, ClosedFormParamsExamples)
{
  const auto id = oracle::closed_form_params(named_config("IdentityFormer-S12"));
  EXPECT_NEAR(id.learnable / 1e6, 11.9, 0.05);
  EXPECT_EQ(id.frozen, 0u);
  EXPECT_NEAR(oracle::closed_form_params(named_config("ConvFormer-S18")).learnable / 1e6, 27.0,
              0.5);
  EXPECT_EQ(oracle::closed_form_params(named_config("RandFormer-M48")).frozen,
            24u * 196 * 196 + 8u * 49 * 49);
}

TEST(Oracles, ClosedFormIdentityBlock)
{
  // Identity stage of width C, one block: 8C^2 + 2C + two StarReLU scalars.
  ModelConfig c;
  c.name = "one";
  c.channels = {64};
  c.depths = {1};
  c.mixers = {MixerSpec::identity()};
  c.scaling = {ScalingSpec::none()};
  c.num_classes = 10;
  const auto stem = 3u * 64 * 49 + 64;
  const auto head = 2u * 64 + 64 * 10 + 10;
  EXPECT_EQ(oracle::closed_form_params(c).learnable, stem + 8u * 64 * 64 + 2 * 64 + 2 + head);
}
