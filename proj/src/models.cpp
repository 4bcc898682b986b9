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

#include "metaformer/models.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <map>

#include "json.hpp"
#include "metaformer/random.hpp"

namespace metaformer
{

std::string to_string(HeadKind kind) { return kind == HeadKind::FC ? "FC" : "MLP"; }

HeadKind parse_head_kind(const std::string & name)
{
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return static_cast<char>(std::toupper(c));
  });
  if (key == "FC") return HeadKind::FC;
  if (key == "MLP") return HeadKind::MLP;
  throw LookupError("unknown head '" + name + "'; valid: FC, MLP");
}

ScalingSpec ModelConfig::stage_scaling(std::size_t stage) const
{
  if (!scaling.empty()) return scaling.at(stage);
  // ResScale on the last two stages.
  return stage + 2 >= num_stages() ? ScalingSpec::res_scale() : ScalingSpec::none();
}

std::size_t ModelConfig::resolution_multiple() const
{
  return num_stages() == 0 ? 1 : std::size_t{4} << (num_stages() - 1);
}

void ModelConfig::validate() const
{
  const std::size_t n = num_stages();
  if (depths.size() != n || mixers.size() != n) {
    throw ConfigError(
      "config '" + name + "': channels, depths and mixers must have one entry per stage");
  }
  if (!scaling.empty() && scaling.size() != n) {
    throw ConfigError("config '" + name + "': scaling must be empty or have one entry per stage");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (channels[i] == 0) throw ConfigError("config '" + name + "': channels must be >= 1");
    if (depths[i] == 0) throw ConfigError("config '" + name + "': depths must be >= 1");
    if (i > 0 && channels[i] < channels[i - 1]) {
      throw ConfigError("config '" + name + "': channels must be nondecreasing across stages");
    }
    mixers[i].validate();
  }
  activation.validate();
  if (num_classes == 0) throw ConfigError("config '" + name + "': num_classes must be >= 1");
  if (in_channels == 0) throw ConfigError("config '" + name + "': in_channels must be >= 1");
  if (mlp_ratio == 0 || head_mlp_ratio == 0) {
    throw ConfigError("config '" + name + "': MLP ratios must be >= 1");
  }
  if (n > 0 && (default_resolution == 0 || default_resolution % resolution_multiple() != 0)) {
    throw ConfigError(
      "config '" + name + "': default_resolution must be a positive multiple of " +
      std::to_string(resolution_multiple()));
  }
}

// ---------------------------------------------------------------------------
// Named configurations

namespace
{

struct SizeSpec
{
  std::vector<std::size_t> channels;
  std::vector<std::size_t> depths;
};

const std::vector<std::pair<std::string, SizeSpec>> & basic_sizes()
{
  static const std::vector<std::pair<std::string, SizeSpec>> sizes = {
    {"S12", {{64, 128, 320, 512}, {2, 2, 6, 2}}},
    {"S24", {{64, 128, 320, 512}, {4, 4, 12, 4}}},
    {"S36", {{64, 128, 320, 512}, {6, 6, 18, 6}}},
    {"M36", {{96, 192, 384, 768}, {6, 6, 18, 6}}},
    {"M48", {{96, 192, 384, 768}, {8, 8, 24, 8}}},
  };
  return sizes;
}

const std::vector<std::pair<std::string, SizeSpec>> & conv_sizes()
{
  static const std::vector<std::pair<std::string, SizeSpec>> sizes = {
    {"S18", {{64, 128, 320, 512}, {3, 3, 9, 3}}},
    {"S36", {{64, 128, 320, 512}, {3, 12, 18, 3}}},
    {"M36", {{96, 192, 384, 576}, {3, 12, 18, 3}}},
    {"B36", {{128, 256, 512, 768}, {3, 12, 18, 3}}},
  };
  return sizes;
}

struct Family
{
  std::string name;
  std::array<MixerSpec, 4> mixers;
  HeadKind head;
  bool conv_sizes;
};

const std::vector<Family> & families()
{
  using M = MixerSpec;
  static const std::vector<Family> fams = {
    {"IdentityFormer", {M::identity(), M::identity(), M::identity(), M::identity()}, HeadKind::FC,
     false},
    {"RandFormer", {M::identity(), M::identity(), M::random_mixing(), M::random_mixing()},
     HeadKind::FC, false},
    {"PoolFormerV2", {M::pooling(), M::pooling(), M::pooling(), M::pooling()}, HeadKind::FC, false},
    {"ConvFormer", {M::sepconv(), M::sepconv(), M::sepconv(), M::sepconv()}, HeadKind::MLP, true},
    {"CAFormer", {M::sepconv(), M::sepconv(), M::attention(), M::attention()}, HeadKind::MLP,
     true},
  };
  return fams;
}

}  // namespace

std::vector<std::string> named_config_names()
{
  std::vector<std::string> names;
  for (const auto & fam : families()) {
    for (const auto & [size, _] : fam.conv_sizes ? conv_sizes() : basic_sizes()) {
      names.push_back(fam.name + "-" + size);
    }
  }
  return names;
}

std::vector<std::string> basic_mixer_table_models()
{
  std::vector<std::string> names;
  for (const auto & [size, _] : basic_sizes()) {
    for (const char * fam : {"IdentityFormer", "RandFormer", "PoolFormerV2"}) {
      names.push_back(std::string(fam) + "-" + size);
    }
  }
  return names;
}

std::vector<std::string> conv_attention_table_models()
{
  std::vector<std::string> names;
  for (const auto & [size, _] : conv_sizes()) {
    for (const char * fam : {"ConvFormer", "CAFormer"}) {
      names.push_back(std::string(fam) + "-" + size);
    }
  }
  return names;
}

ModelConfig named_config(const std::string & name)
{
  for (const auto & fam : families()) {
    for (const auto & [size, spec] : fam.conv_sizes ? conv_sizes() : basic_sizes()) {
      if (fam.name + "-" + size != name) continue;
      ModelConfig cfg;
      cfg.name = name;
      cfg.channels = spec.channels;
      cfg.depths = spec.depths;
      cfg.mixers.assign(fam.mixers.begin(), fam.mixers.end());
      cfg.head = fam.head;
      return cfg;
    }
  }
  std::string valid;
  for (const auto & n : named_config_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw LookupError("unknown model '" + name + "'; valid names: " + valid);
}

// ---------------------------------------------------------------------------
// JSON

ModelConfig parse_model_config_json(const std::string & text)
{
  using nlohmann::json;
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception & e) {
    throw ConfigError(std::string("invalid model config JSON: ") + e.what());
  }
  try {
    ModelConfig cfg;
    cfg.name = j.at("name").get<std::string>();
    cfg.channels = j.at("channels").get<std::vector<std::size_t>>();
    cfg.depths = j.at("depths").get<std::vector<std::size_t>>();
    for (const auto & m : j.at("mixers")) {
      MixerSpec spec;
      if (m.is_string()) {
        spec.kind = parse_mixer_kind(m.get<std::string>());
      } else {
        spec.kind = parse_mixer_kind(m.at("kind").get<std::string>());
        spec.pool_window = m.value("window", spec.pool_window);
        spec.kernel_size = m.value("kernel_size", spec.kernel_size);
        spec.expansion = m.value("expansion", spec.expansion);
        spec.head_dim = m.value("head_dim", spec.head_dim);
        spec.num_tokens = m.value("num_tokens", spec.num_tokens);
        spec.seed = m.value("seed", spec.seed);
      }
      cfg.mixers.push_back(spec);
    }
    cfg.head = parse_head_kind(j.at("head").get<std::string>());
    cfg.num_classes = j.at("num_classes").get<std::size_t>();
    cfg.default_resolution = j.at("default_resolution").get<std::size_t>();
    if (j.contains("activation")) {
      cfg.activation = parse_activation(j["activation"].get<std::string>());
    }
    if (j.contains("scaling")) {
      for (const auto & s : j["scaling"]) {
        ScalingSpec spec;
        spec.kind = parse_scaling_kind(s.get<std::string>());
        cfg.scaling.push_back(spec);
      }
    }
    if (j.contains("block_biases")) {
      cfg.block_bias = j["block_biases"].get<bool>() ? BiasPolicy::Enabled : BiasPolicy::Disabled;
    }
    cfg.validate();
    return cfg;
  } catch (const json::exception & e) {
    throw ConfigError(std::string("invalid model config: ") + e.what());
  }
}

std::string model_config_to_json(const ModelConfig & config)
{
  using nlohmann::ordered_json;
  ordered_json j;
  j["name"] = config.name;
  j["channels"] = config.channels;
  j["depths"] = config.depths;
  ordered_json mixers = ordered_json::array();
  const MixerSpec defaults;
  for (const auto & m : config.mixers) {
    if (m.pool_window == defaults.pool_window && m.kernel_size == defaults.kernel_size &&
        m.expansion == defaults.expansion && m.head_dim == defaults.head_dim &&
        m.num_tokens == defaults.num_tokens && m.seed == defaults.seed) {
      mixers.push_back(short_name(m.kind));
      continue;
    }
    ordered_json o;
    o["kind"] = short_name(m.kind);
    o["window"] = m.pool_window;
    o["kernel_size"] = m.kernel_size;
    o["expansion"] = m.expansion;
    o["head_dim"] = m.head_dim;
    o["num_tokens"] = m.num_tokens;
    o["seed"] = m.seed;
    mixers.push_back(o);
  }
  j["mixers"] = mixers;
  j["head"] = to_string(config.head);
  j["num_classes"] = config.num_classes;
  j["default_resolution"] = config.default_resolution;
  j["activation"] = to_string(config.activation);
  ordered_json scaling = ordered_json::array();
  for (std::size_t i = 0; i < config.num_stages(); ++i) {
    scaling.push_back(to_string(config.stage_scaling(i).kind));
  }
  j["scaling"] = scaling;
  j["block_biases"] = config.block_bias == BiasPolicy::Enabled;
  return j.dump(2);
}

// ---------------------------------------------------------------------------
// Model

bool Model::has_random_mixing() const
{
  return std::any_of(config.mixers.begin(), config.mixers.end(), [](const MixerSpec & m) {
    return m.kind == MixerKind::RandomMixing;
  });
}

std::vector<std::size_t> Model::stage_sizes(std::size_t resolution) const
{
  std::vector<std::size_t> sizes;
  std::size_t s = resolution / 4;
  for (std::size_t i = 0; i < config.num_stages(); ++i) {
    sizes.push_back(s);
    s /= 2;
  }
  return sizes;
}

std::vector<std::size_t> Model::stage_token_counts(std::size_t resolution) const
{
  auto sizes = stage_sizes(resolution);
  for (auto & s : sizes) s *= s;
  return sizes;
}

std::vector<MixerKind> Model::stage_mixers() const
{
  std::vector<MixerKind> kinds;
  for (const auto & m : config.mixers) kinds.push_back(m.kind);
  return kinds;
}

namespace
{

ConvLayer make_conv(std::size_t in, std::size_t out, std::size_t k, std::size_t stride,
                    std::size_t pad)
{
  return {Tensor({out, in, k, k}), Tensor({out}), {stride, pad, 1}};
}

void initialize_weights(Model & model, std::uint64_t seed)
{
  visit_parameters(model, [seed](const std::string & name, Tensor & t, ParamKind kind) {
    if (kind != ParamKind::Weight) return;
    CounterRng rng(derive_seed(seed, name));
    for (auto & v : t.data()) v = static_cast<float>(rng.truncated_normal(kInitStd));
  });
}

}  // namespace

Model build_model(const ModelConfig & config, const BuildOptions & options)
{
  config.validate();
  Model model;
  model.config = config;
  model.built_resolution = options.resolution.value_or(config.default_resolution);
  const std::size_t n = config.num_stages();
  if (n == 0) return model;

  const std::size_t res = model.built_resolution;
  if (res == 0 || res % config.resolution_multiple() != 0) {
    throw DimensionError(
      "resolution " + std::to_string(res) + " is not a multiple of " +
      std::to_string(config.resolution_multiple()));
  }
  const auto tokens = model.stage_token_counts(res);

  model.stem = make_conv(config.in_channels, config.channels[0], 7, 4, 2);
  for (std::size_t i = 0; i < n; ++i) {
    Stage stage;
    if (i > 0) stage.downsample = make_conv(config.channels[i - 1], config.channels[i], 3, 2, 1);
    for (std::size_t j = 0; j < config.depths[i]; ++j) {
      BlockConfig bc{config.channels[i], config.mixers[i], config.activation,
                     config.stage_scaling(i), config.block_bias, config.mlp_ratio};
      const std::string name = "stage" + std::to_string(i) + ".block" + std::to_string(j);
      if (bc.mixer.kind == MixerKind::RandomMixing) {
        if (bc.mixer.num_tokens != 0 && bc.mixer.num_tokens != tokens[i]) {
          throw ConfigError(
            "random mixing in stage " + std::to_string(i) + " declares " +
            std::to_string(bc.mixer.num_tokens) + " tokens but the stage has " +
            std::to_string(tokens[i]) + " at resolution " + std::to_string(res));
        }
        if (tokens[i] > options.max_random_tokens) {
          throw ConfigError(
            "random mixing in stage " + std::to_string(i) + " would mix " +
            std::to_string(tokens[i]) + " tokens, above the cap of " +
            std::to_string(options.max_random_tokens) + " (quadratic cost)");
        }
        bc.mixer.num_tokens = tokens[i];
        bc.mixer.seed = derive_seed(options.seed ^ config.mixers[i].seed, name + ".mixer");
      }
      BlockParams block = make_block(bc);
      if (options.init == InitMode::Random) {
        if (auto * rm = std::get_if<RandomMixingMatrix>(&block.mixer)) {
          *rm = RandomMixingMatrix::generate(bc.mixer.num_tokens, bc.mixer.seed);
        }
      }
      stage.blocks.push_back(std::move(block));
    }
    model.stages.push_back(std::move(stage));
  }

  const std::size_t c = config.channels.back();
  HeadParams head;
  head.kind = config.head;
  head.norm = NormLayer::identity(c, true);
  if (config.head == HeadKind::FC) {
    head.fc1 = LinearLayer::zeros(c, config.num_classes, true);
  } else {
    const std::size_t hidden = config.head_mlp_ratio * c;
    head.fc1 = LinearLayer::zeros(c, hidden, true);
    head.act = ActivationParams::make(config.activation);
    head.hidden_norm = NormLayer::identity(hidden, true);
    head.fc2 = LinearLayer::zeros(hidden, config.num_classes, true);
  }
  model.head = std::move(head);

  if (options.init == InitMode::Random) initialize_weights(model, options.seed);
  return model;
}

void check_input(const Model & model, std::size_t height, std::size_t width)
{
  if (model.config.num_stages() == 0) throw DimensionError("model has no stages");
  const std::size_t mult = model.config.resolution_multiple();
  if (height == 0 || width == 0 || height % mult != 0 || width % mult != 0) {
    throw DimensionError(
      "input " + std::to_string(height) + "x" + std::to_string(width) +
      " must have sides divisible by " + std::to_string(mult));
  }
  if (model.has_random_mixing() &&
      (height != model.built_resolution || width != model.built_resolution)) {
    throw DimensionError(
      "model '" + model.config.name + "' uses random mixing with token counts fixed at " +
      std::to_string(model.built_resolution) + "x" + std::to_string(model.built_resolution) +
      " input; got " + std::to_string(height) + "x" + std::to_string(width));
  }
}

Tensor forward_features(const Model & model, const Tensor & images)
{
  if (images.rank() != 4 || images.dim(1) != model.config.in_channels) {
    throw DimensionError(
      "forward: expected [B, " + std::to_string(model.config.in_channels) +
      ", H, W] input, got " + shape_string(images.shape()));
  }
  check_input(model, images.dim(2), images.dim(3));
  Tensor x = nchw_to_nhwc(apply(*model.stem, images));
  for (const auto & stage : model.stages) {
    if (stage.downsample) x = nchw_to_nhwc(apply(*stage.downsample, nhwc_to_nchw(x)));
    for (const auto & block : stage.blocks) x = block_forward(x, block);
  }
  return global_avg_pool(nhwc_to_nchw(x));
}

Tensor apply_head(const HeadParams & head, const Tensor & pooled)
{
  Tensor x = apply(head.fc1, apply(head.norm, pooled));
  if (head.kind == HeadKind::MLP) x = apply(*head.fc2, apply(*head.hidden_norm, apply(*head.act, x)));
  return x;
}

Tensor forward(const Model & model, const Tensor & images)
{
  const Tensor pooled = forward_features(model, images);
  return apply_head(*model.head, pooled);
}

}  // namespace metaformer
