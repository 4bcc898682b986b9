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

#ifndef METAFORMER__BLOCK_HPP_
#define METAFORMER__BLOCK_HPP_

#include <optional>
#include <string>

#include "metaformer/mixers.hpp"

namespace metaformer
{

enum class ScalingKind
{
  None,
  LayerScale,   ///< x + lambda_l * f(norm(x))
  ResScale,     ///< lambda_r * x + f(norm(x))
  BranchScale,  ///< lambda_r * x + lambda_l * f(norm(x))
};

struct ScalingSpec
{
  ScalingKind kind = ScalingKind::None;
  float init_layer = 1e-5f;
  float init_res = 1.0f;

  static ScalingSpec none() { return {}; }
  static ScalingSpec layer_scale(float init = 1e-5f) { return {ScalingKind::LayerScale, init, 1.0f}; }
  static ScalingSpec res_scale(float init = 1.0f) { return {ScalingKind::ResScale, 1e-5f, init}; }
  static ScalingSpec branch_scale(float init_layer = 1e-5f, float init_res = 1.0f)
  {
    return {ScalingKind::BranchScale, init_layer, init_res};
  }

  bool has_layer_scale() const
  {
    return kind == ScalingKind::LayerScale || kind == ScalingKind::BranchScale;
  }
  bool has_res_scale() const
  {
    return kind == ScalingKind::ResScale || kind == ScalingKind::BranchScale;
  }
};

std::string to_string(ScalingKind kind);
ScalingKind parse_scaling_kind(const std::string & name);

enum class BiasPolicy
{
  Disabled,
  Enabled,
};

struct BlockConfig
{
  std::size_t channels = 64;
  MixerSpec mixer;
  ActivationSpec activation;
  ScalingSpec scaling;
  BiasPolicy bias = BiasPolicy::Disabled;
  std::size_t mlp_ratio = 4;
};

struct BlockParams
{
  NormLayer norm1;
  MixerParams mixer;
  NormLayer norm2;
  LinearLayer mlp_w1;  ///< [C, ratio * C]
  ActivationParams mlp_act;
  LinearLayer mlp_w2;  ///< [ratio * C, C]
  std::optional<Tensor> layer_scale1, layer_scale2;
  std::optional<Tensor> res_scale1, res_scale2;
};

/// Parameter skeleton: norms at identity, scaling vectors at their init
/// values, StarReLU scalars at the standardizing constants, all weights zero.
BlockParams make_block(const BlockConfig & config);

/// X' = s(X, TokenMixer(Norm1(X))), X'' = s(X', act(Norm2(X') W1) W2) where s
/// combines skip and branch according to the scaling vectors present.
/// x is [B, H, W, C].
Tensor block_forward(const Tensor & x, const BlockParams & params);

struct ParamCount
{
  std::uint64_t learnable = 0;
  std::uint64_t frozen = 0;

  ParamCount & operator+=(const ParamCount & o)
  {
    learnable += o.learnable;
    frozen += o.frozen;
    return *this;
  }
  friend bool operator==(const ParamCount &, const ParamCount &) = default;
};

/// Exact counts of the tensors make_block would store.
ParamCount block_param_count(const BlockConfig & config);

template <MaybeConstOf<BlockParams> B, typename V>
void visit_parameters(B & block, const std::string & name, V && visit)
{
  visit_parameters(block.norm1, name + ".norm1", visit);
  if (block.layer_scale1) visit(name + ".layer_scale1", *block.layer_scale1, ParamKind::LayerScale);
  if (block.res_scale1) visit(name + ".res_scale1", *block.res_scale1, ParamKind::ResScale);
  visit_parameters(block.mixer, name + ".mixer", visit);
  visit_parameters(block.norm2, name + ".norm2", visit);
  visit_parameters(block.mlp_w1, name + ".mlp.w1", visit);
  visit_parameters(block.mlp_act, name + ".star", visit);
  visit_parameters(block.mlp_w2, name + ".mlp.w2", visit);
  if (block.layer_scale2) visit(name + ".layer_scale2", *block.layer_scale2, ParamKind::LayerScale);
  if (block.res_scale2) visit(name + ".res_scale2", *block.res_scale2, ParamKind::ResScale);
}

}  // namespace metaformer

#endif  // METAFORMER__BLOCK_HPP_
