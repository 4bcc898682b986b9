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

#include "metaformer/block.hpp"

#include <algorithm>
#include <cctype>

namespace metaformer
{

std::string to_string(ScalingKind kind)
{
  switch (kind) {
    case ScalingKind::None:
      return "none";
    case ScalingKind::LayerScale:
      return "layerscale";
    case ScalingKind::ResScale:
      return "resscale";
    case ScalingKind::BranchScale:
      return "branchscale";
  }
  return "?";
}

ScalingKind parse_scaling_kind(const std::string & name)
{
  std::string key;
  for (unsigned char c : name) {
    if (c != '_' && c != '-') key += static_cast<char>(std::tolower(c));
  }
  if (key == "none") return ScalingKind::None;
  if (key == "layerscale") return ScalingKind::LayerScale;
  if (key == "resscale") return ScalingKind::ResScale;
  if (key == "branchscale") return ScalingKind::BranchScale;
  throw LookupError(
    "unknown scaling '" + name + "'; valid: none, layerscale, resscale, branchscale");
}

BlockParams make_block(const BlockConfig & config)
{
  const std::size_t c = config.channels;
  if (c == 0) throw ConfigError("block channels must be >= 1");
  if (config.mlp_ratio == 0) throw ConfigError("MLP ratio must be >= 1");
  const bool biases = config.bias == BiasPolicy::Enabled;
  BlockParams p;
  p.norm1 = NormLayer::identity(c, biases);
  p.mixer = make_mixer(config.mixer, c, biases, config.activation);
  p.norm2 = NormLayer::identity(c, biases);
  p.mlp_w1 = LinearLayer::zeros(c, config.mlp_ratio * c, biases);
  p.mlp_act = ActivationParams::make(config.activation);
  p.mlp_w2 = LinearLayer::zeros(config.mlp_ratio * c, c, biases);
  if (config.scaling.has_layer_scale()) {
    p.layer_scale1 = Tensor({c}, config.scaling.init_layer);
    p.layer_scale2 = Tensor({c}, config.scaling.init_layer);
  }
  if (config.scaling.has_res_scale()) {
    p.res_scale1 = Tensor({c}, config.scaling.init_res);
    p.res_scale2 = Tensor({c}, config.scaling.init_res);
  }
  return p;
}

namespace
{

Tensor residual(const Tensor & skip, const Tensor & branch, const std::optional<Tensor> & res_scale,
                const std::optional<Tensor> & layer_scale)
{
  const Tensor s = res_scale ? scale_lastdim(skip, *res_scale) : skip;
  return s + (layer_scale ? scale_lastdim(branch, *layer_scale) : branch);
}

}  // namespace

Tensor block_forward(const Tensor & x, const BlockParams & params)
{
  if (x.rank() != 4 || x.dim(3) != params.norm1.weight.size()) {
    throw DimensionError(
      "block_forward: input " + shape_string(x.shape()) + " does not match block channels " +
      std::to_string(params.norm1.weight.size()));
  }
  const Tensor mixed = apply_mixer(params.mixer, apply(params.norm1, x));
  const Tensor x1 = residual(x, mixed, params.res_scale1, params.layer_scale1);
  const Tensor hidden = apply(params.mlp_act, apply(params.mlp_w1, apply(params.norm2, x1)));
  return residual(x1, apply(params.mlp_w2, hidden), params.res_scale2, params.layer_scale2);
}

ParamCount block_param_count(const BlockConfig & config)
{
  const BlockParams p = make_block(config);
  ParamCount count;
  visit_parameters(p, "block", [&](const std::string &, const Tensor & t, ParamKind kind) {
    (is_frozen(kind) ? count.frozen : count.learnable) += t.size();
  });
  return count;
}

}  // namespace metaformer
