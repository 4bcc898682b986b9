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

#ifndef METAFORMER_TESTS__ORACLES_HPP_
#define METAFORMER_TESTS__ORACLES_HPP_

// Brute-force references for the test suite. Only the tensor container and
// config types are borrowed from the library; every kernel here is a direct
// loop over the definition with double accumulation.

#include <cstdint>
#include <string>

#include "metaformer/models.hpp"

namespace oracle
{

using metaformer::Tensor;

struct OracleResult
{
  Tensor value;
  std::string method;
};

/// a [M, K] x b [K, N]
OracleResult naive_matmul(const Tensor & a, const Tensor & b);

/// x [..., K] x w [K, N] + bias
OracleResult naive_linear(const Tensor & x, const Tensor & w, const Tensor * bias = nullptr);

/// x [B, Cin, H, W], w [Cout, Cin/groups, k, k], zero padding
OracleResult naive_conv2d(const Tensor & x, const Tensor & w, std::size_t stride,
                          std::size_t padding, std::size_t groups, const Tensor * bias = nullptr);

/// count_include_pad = false
OracleResult naive_avgpool(const Tensor & x, std::size_t k, std::size_t stride,
                           std::size_t padding);

/// Normalize over the last axis.
OracleResult naive_layernorm(const Tensor & x, const Tensor & gamma, const Tensor * beta,
                             double eps);

OracleResult naive_softmax(const Tensor & x);

/// x [N, C] single sample; projections stored [C, C] as x W.
OracleResult naive_attention(const Tensor & x, const Tensor & wq, const Tensor & wk,
                             const Tensor & wv, const Tensor & wo, std::size_t head_dim);

/// x [N, C]; y[n, c] = sum_m W[n, m] x[m, c]
OracleResult naive_random_mix(const Tensor & x, const Tensor & w);

/// Depthwise-separable mixer on one sample x [H, W, C].
OracleResult naive_sepconv(const Tensor & x, const Tensor & pw1, double act_scale,
                           double act_bias, const Tensor & dw, const Tensor & pw2);

/// Uniform [-scale, scale) entries from std::mt19937_64.
Tensor random_tensor(const metaformer::Shape & shape, std::uint64_t seed, double scale = 1.0);

long double gelu(long double x);
long double gelu_derivative(long double x);
long double star_relu(long double x, long double s, long double b);

struct ClosedFormCount
{
  std::uint64_t learnable = 0;
  std::uint64_t frozen = 0;
};

/// Parameter totals from per-layer algebra, without building tensors.
ClosedFormCount closed_form_params(const metaformer::ModelConfig & config);

/// MAC total from per-layer algebra at a square input.
std::uint64_t closed_form_macs(const metaformer::ModelConfig & config, std::size_t resolution);

/// Scalar activation applications per sample at a square input.
std::uint64_t closed_form_activation_units(const metaformer::ModelConfig & config,
                                           std::size_t resolution);

}  // namespace oracle

#endif  // METAFORMER_TESTS__ORACLES_HPP_
