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

#ifndef METAFORMER__MODELS_HPP_
#define METAFORMER__MODELS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metaformer/block.hpp"

namespace metaformer
{

enum class HeadKind
{
  FC,   ///< norm -> linear
  MLP,  ///< norm -> linear(4C) -> act -> norm -> linear
};

std::string to_string(HeadKind kind);
HeadKind parse_head_kind(const std::string & name);

/// Hierarchical MetaFormer description. Per-stage vectors must have equal
/// length; named configurations have four stages.
struct ModelConfig
{
  std::string name;
  std::vector<std::size_t> channels;
  std::vector<std::size_t> depths;
  std::vector<MixerSpec> mixers;
  HeadKind head = HeadKind::FC;
  std::size_t num_classes = 1000;
  std::size_t default_resolution = 224;

  /// Per stage; empty means none/none/ResScale/ResScale for four stages.
  std::vector<ScalingSpec> scaling;
  ActivationSpec activation = ActivationSpec::star_relu();
  BiasPolicy block_bias = BiasPolicy::Disabled;
  std::size_t mlp_ratio = 4;
  std::size_t head_mlp_ratio = 4;
  std::size_t in_channels = 3;

  std::size_t num_stages() const { return channels.size(); }
  ScalingSpec stage_scaling(std::size_t stage) const;
  /// Input side length must be a multiple of this (32 for four stages).
  std::size_t resolution_multiple() const;
  void validate() const;
};

/// IdentityFormer / RandFormer / PoolFormerV2 x {S12, S24, S36, M36, M48} and
/// ConvFormer / CAFormer x {S18, S36, M36, B36}.
ModelConfig named_config(const std::string & name);
std::vector<std::string> named_config_names();

/// Models listed in the basic-mixer and conv/attention size tables.
std::vector<std::string> basic_mixer_table_models();
std::vector<std::string> conv_attention_table_models();

/// JSON form: name, channels, depths, mixers, head, num_classes,
/// default_resolution; optional activation, scaling, block_biases.
ModelConfig parse_model_config_json(const std::string & text);
std::string model_config_to_json(const ModelConfig & config);

enum class InitMode
{
  Random,       ///< truncated-normal weights, random-mixing matrices generated
  ZeroWeights,  ///< skeleton only: weights and random matrices zero
};

struct BuildOptions
{
  std::uint64_t seed = 0;
  InitMode init = InitMode::Random;
  /// Resolution that fixes random-mixing token counts; default_resolution when unset.
  std::optional<std::size_t> resolution;
  /// Largest stage token count allowed for random mixing.
  std::size_t max_random_tokens = 1024;
};

inline constexpr double kInitStd = 0.02;

struct Stage
{
  std::optional<ConvLayer> downsample;  ///< absent for the first stage
  std::vector<BlockParams> blocks;
};

struct HeadParams
{
  HeadKind kind = HeadKind::FC;
  NormLayer norm;
  LinearLayer fc1;
  // MLP head only
  std::optional<ActivationParams> act;
  std::optional<NormLayer> hidden_norm;
  std::optional<LinearLayer> fc2;
};

/// Immutable assembly built from a ModelConfig. Stages and head are present
/// iff the config has at least one stage.
struct Model
{
  ModelConfig config;
  std::size_t built_resolution = 224;
  std::optional<ConvLayer> stem;
  std::vector<Stage> stages;
  std::optional<HeadParams> head;

  bool has_random_mixing() const;
  /// Spatial side length of each stage at the given input resolution.
  std::vector<std::size_t> stage_sizes(std::size_t resolution) const;
  std::vector<std::size_t> stage_token_counts(std::size_t resolution) const;
  std::vector<std::size_t> stage_token_counts() const { return stage_token_counts(built_resolution); }
  std::vector<MixerKind> stage_mixers() const;
};

Model build_model(const ModelConfig & config, const BuildOptions & options = {});

/// Checks input geometry against the model. Throws DimensionError.
void check_input(const Model & model, std::size_t height, std::size_t width);

/// Image batch [B, 3, H, W] -> logits [B, num_classes].
Tensor forward(const Model & model, const Tensor & images);

/// Pooled features [B, C4] before the head.
Tensor forward_features(const Model & model, const Tensor & images);

Tensor apply_head(const HeadParams & head, const Tensor & pooled);

template <MaybeConstOf<HeadParams> H, typename V>
void visit_parameters(H & head, const std::string & name, V && visit)
{
  visit_parameters(head.norm, name + ".norm", visit);
  if (head.kind == HeadKind::FC) {
    visit_parameters(head.fc1, name + ".fc", visit);
    return;
  }
  visit_parameters(head.fc1, name + ".fc1", visit);
  if (head.act) visit_parameters(*head.act, name + ".star", visit);
  if (head.hidden_norm) visit_parameters(*head.hidden_norm, name + ".hidden_norm", visit);
  if (head.fc2) visit_parameters(*head.fc2, name + ".fc2", visit);
}

/// Visits every stored tensor in checkpoint order with its canonical name.
template <MaybeConstOf<Model> M, typename V>
void visit_parameters(M & model, V && visit)
{
  if (model.stem) visit_parameters(*model.stem, "stem", visit);
  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    auto & stage = model.stages[i];
    if (stage.downsample) {
      visit_parameters(*stage.downsample, "downsample" + std::to_string(i), visit);
    }
    for (std::size_t j = 0; j < stage.blocks.size(); ++j) {
      visit_parameters(
        stage.blocks[j], "stage" + std::to_string(i) + ".block" + std::to_string(j), visit);
    }
  }
  if (model.head) visit_parameters(*model.head, "head", visit);
}

}  // namespace metaformer

#endif  // METAFORMER__MODELS_HPP_
