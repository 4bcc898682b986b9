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

#ifndef METAFORMER__LAYERS_HPP_
#define METAFORMER__LAYERS_HPP_

#include <concepts>
#include <optional>
#include <string>
#include <type_traits>

#include "metaformer/activations.hpp"
#include "metaformer/tensor.hpp"

namespace metaformer
{

/// Role of a stored tensor. Drives initialization and learnable/frozen accounting.
enum class ParamKind
{
  Weight,
  Bias,
  NormWeight,
  NormBias,
  LayerScale,
  ResScale,
  ActivationScale,
  ActivationBias,
  RandomMatrix,
};

constexpr bool is_frozen(ParamKind kind) noexcept { return kind == ParamKind::RandomMatrix; }

template <typename T, typename U>
concept MaybeConstOf = std::same_as<std::remove_const_t<T>, U>;

/// y = x W + b with W stored [in, out].
struct LinearLayer
{
  Tensor weight;
  std::optional<Tensor> bias;

  static LinearLayer zeros(std::size_t in, std::size_t out, bool with_bias)
  {
    LinearLayer l{Tensor({in, out}), std::nullopt};
    if (with_bias) l.bias = Tensor({out});
    return l;
  }
  std::size_t in_features() const { return weight.dim(0); }
  std::size_t out_features() const { return weight.dim(1); }
};

inline Tensor apply(const LinearLayer & layer, const Tensor & x)
{
  return linear(x, layer.weight, layer.bias ? &*layer.bias : nullptr);
}

struct NormLayer
{
  Tensor weight;
  std::optional<Tensor> bias;

  static NormLayer identity(std::size_t channels, bool with_bias)
  {
    NormLayer n{Tensor::ones({channels}), std::nullopt};
    if (with_bias) n.bias = Tensor({channels});
    return n;
  }
};

inline Tensor apply(const NormLayer & norm, const Tensor & x)
{
  return layernorm(x, norm.weight, norm.bias ? &*norm.bias : nullptr);
}

/// Convolution stored as [Cout, Cin/groups, k, k].
struct ConvLayer
{
  Tensor weight;
  std::optional<Tensor> bias;
  Conv2dGeometry geometry;

  std::size_t kernel_size() const { return weight.dim(2); }
  std::size_t out_channels() const { return weight.dim(0); }
  std::size_t in_channels() const { return weight.dim(1) * geometry.groups; }
};

inline Tensor apply(const ConvLayer & conv, const Tensor & x)
{
  return conv2d(x, conv.weight, conv.geometry, conv.bias ? &*conv.bias : nullptr);
}

/// One activation site. Learnable StarReLU scalars live in `scale`/`bias`
/// as shape-[1] tensors; frozen ones are read from `spec`.
struct ActivationParams
{
  ActivationSpec spec;
  std::optional<Tensor> scale;
  std::optional<Tensor> bias;

  static ActivationParams make(const ActivationSpec & spec)
  {
    spec.validate();
    ActivationParams p{spec, std::nullopt, std::nullopt};
    if (spec.learnable_scale()) p.scale = Tensor({1}, spec.scale);
    if (spec.learnable_bias()) p.bias = Tensor({1}, spec.bias);
    return p;
  }

  ActivationSpec effective() const
  {
    ActivationSpec s = spec;
    if (scale) s.scale = (*scale)[0];
    if (bias) s.bias = (*bias)[0];
    return s;
  }
};

inline Tensor apply(const ActivationParams & act, const Tensor & x)
{
  return apply_activation(x, act.effective());
}

template <MaybeConstOf<LinearLayer> L, typename V>
void visit_parameters(L & layer, const std::string & name, V && visit)
{
  visit(name, layer.weight, ParamKind::Weight);
  if (layer.bias) visit(name + ".bias", *layer.bias, ParamKind::Bias);
}

template <MaybeConstOf<ConvLayer> L, typename V>
void visit_parameters(L & layer, const std::string & name, V && visit)
{
  visit(name, layer.weight, ParamKind::Weight);
  if (layer.bias) visit(name + ".bias", *layer.bias, ParamKind::Bias);
}

template <MaybeConstOf<NormLayer> L, typename V>
void visit_parameters(L & layer, const std::string & name, V && visit)
{
  visit(name, layer.weight, ParamKind::NormWeight);
  if (layer.bias) visit(name + ".bias", *layer.bias, ParamKind::NormBias);
}

template <MaybeConstOf<ActivationParams> A, typename V>
void visit_parameters(A & act, const std::string & name, V && visit)
{
  if (act.scale) visit(name + ".s", *act.scale, ParamKind::ActivationScale);
  if (act.bias) visit(name + ".b", *act.bias, ParamKind::ActivationBias);
}

}  // namespace metaformer

#endif  // METAFORMER__LAYERS_HPP_
