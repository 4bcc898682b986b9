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

#include "metaformer/mixers.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "metaformer/random.hpp"

namespace metaformer
{

void MixerSpec::validate() const
{
  switch (kind) {
    case MixerKind::Identity:
    case MixerKind::RandomMixing:
      break;
    case MixerKind::Pooling:
      if (pool_window == 0 || pool_window % 2 == 0) {
        throw ConfigError("pooling window must be odd, got " + std::to_string(pool_window));
      }
      break;
    case MixerKind::SepConv:
      if (kernel_size == 0 || kernel_size % 2 == 0) {
        throw ConfigError("separable conv kernel must be odd, got " + std::to_string(kernel_size));
      }
      if (expansion < 1) throw ConfigError("separable conv expansion ratio must be >= 1");
      break;
    case MixerKind::Attention:
      if (head_dim == 0) throw ConfigError("attention head_dim must be >= 1");
      break;
  }
}

std::string short_name(MixerKind kind)
{
  switch (kind) {
    case MixerKind::Identity:
      return "Id";
    case MixerKind::RandomMixing:
      return "Rand";
    case MixerKind::Pooling:
      return "Pool";
    case MixerKind::SepConv:
      return "Conv";
    case MixerKind::Attention:
      return "Attn";
  }
  return "?";
}

MixerKind parse_mixer_kind(const std::string & name)
{
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return static_cast<char>(std::tolower(c));
  });
  if (key == "id" || key == "identity") return MixerKind::Identity;
  if (key == "rand" || key == "random" || key == "random_mixing") return MixerKind::RandomMixing;
  if (key == "pool" || key == "pooling") return MixerKind::Pooling;
  if (key == "conv" || key == "sepconv") return MixerKind::SepConv;
  if (key == "attn" || key == "attention") return MixerKind::Attention;
  throw LookupError(
    "unknown token mixer '" + name + "'; valid: Id, Rand, Pool, Conv, Attn");
}

RandomMixingMatrix RandomMixingMatrix::generate(std::size_t num_tokens, std::uint64_t seed)
{
  if (num_tokens == 0) throw ConfigError("random mixing needs at least one token");
  CounterRng rng(seed);
  Tensor raw({num_tokens, num_tokens});
  for (auto & v : raw.data()) v = rng.uniform_float();
  return {softmax_lastdim(raw), seed};
}

MixerKind mixer_kind(const MixerParams & params)
{
  return std::visit(
    [](const auto & p) {
      using P = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<P, IdentityParams>) return MixerKind::Identity;
      if constexpr (std::is_same_v<P, RandomMixingMatrix>) return MixerKind::RandomMixing;
      if constexpr (std::is_same_v<P, PoolingParams>) return MixerKind::Pooling;
      if constexpr (std::is_same_v<P, SepConvParams>) return MixerKind::SepConv;
      if constexpr (std::is_same_v<P, AttentionParams>) return MixerKind::Attention;
    },
    params);
}

MixerParams make_mixer(const MixerSpec & spec, std::size_t channels, bool biases,
                       const ActivationSpec & act)
{
  spec.validate();
  switch (spec.kind) {
    case MixerKind::Identity:
      return IdentityParams{};
    case MixerKind::RandomMixing: {
      if (spec.num_tokens == 0) throw ConfigError("random mixing token count not resolved");
      return RandomMixingMatrix{Tensor({spec.num_tokens, spec.num_tokens}), spec.seed};
    }
    case MixerKind::Pooling:
      return PoolingParams{spec.pool_window};
    case MixerKind::SepConv: {
      const std::size_t mid = spec.expansion * channels;
      SepConvParams p;
      p.pw1 = LinearLayer::zeros(channels, mid, biases);
      p.act = ActivationParams::make(act);
      p.dw.weight = Tensor({mid, 1, spec.kernel_size, spec.kernel_size});
      if (biases) p.dw.bias = Tensor({mid});
      p.dw.geometry = {1, spec.kernel_size / 2, mid};
      p.pw2 = LinearLayer::zeros(mid, channels, biases);
      return p;
    }
    case MixerKind::Attention: {
      if (channels % spec.head_dim != 0) {
        throw ConfigError(
          "attention channels " + std::to_string(channels) + " not divisible by head_dim " +
          std::to_string(spec.head_dim));
      }
      AttentionParams p;
      p.q = LinearLayer::zeros(channels, channels, biases);
      p.k = LinearLayer::zeros(channels, channels, biases);
      p.v = LinearLayer::zeros(channels, channels, biases);
      p.o = LinearLayer::zeros(channels, channels, biases);
      p.head_dim = spec.head_dim;
      return p;
    }
  }
  throw ConfigError("unknown mixer kind");
}

// ---------------------------------------------------------------------------

Tensor identity_mixer(const Tensor & x) { return x; }

Tensor random_mixer(const Tensor & x, const RandomMixingMatrix & m)
{
  if (x.rank() != 3) {
    throw DimensionError("random_mixer: expected [B, N, C] input, got " + shape_string(x.shape()));
  }
  const std::size_t batch = x.dim(0), n = x.dim(1), c = x.dim(2);
  if (n != m.num_tokens()) {
    throw DimensionError(
      "random_mixer: input has " + std::to_string(n) + " tokens but the mixing matrix expects " +
      std::to_string(m.num_tokens()));
  }
  Tensor out(x.shape());
  const auto w = detail::as_matrix(m.weights.raw(), n, n);
  for (std::size_t b = 0; b < batch; ++b) {
    const std::size_t off = b * n * c;
    detail::as_matrix(out.raw() + off, n, c).noalias() =
      w * detail::aligned_copy(x.raw() + off, n, c);
  }
  return out;
}

Tensor pooling_mixer(const Tensor & x, std::size_t window)
{
  if (window == 0 || window % 2 == 0) {
    throw ConfigError("pooling window must be odd, got " + std::to_string(window));
  }
  return avgpool2d(x, window, 1, window / 2) - x;
}

Tensor sepconv_mixer(const Tensor & x, const SepConvParams & params)
{
  if (x.rank() != 4 || x.dim(3) != params.pw1.in_features()) {
    throw DimensionError(
      "sepconv_mixer: input " + shape_string(x.shape()) + " does not match pointwise weight " +
      shape_string(params.pw1.weight.shape()));
  }
  Tensor h = apply(params.act, apply(params.pw1, x));
  h = nchw_to_nhwc(apply(params.dw, nhwc_to_nchw(h)));
  return apply(params.pw2, h);
}

namespace
{

struct Projections
{
  Tensor q, k, v;
};

Projections project(const Tensor & x, const AttentionParams & p)
{
  if (x.rank() != 3 || x.dim(2) != p.q.in_features()) {
    throw DimensionError(
      "attention_mixer: input " + shape_string(x.shape()) + " does not match projection " +
      shape_string(p.q.weight.shape()));
  }
  if (p.head_dim == 0 || x.dim(2) % p.head_dim != 0) {
    throw ConfigError(
      "attention channels " + std::to_string(x.dim(2)) + " not divisible by head_dim " +
      std::to_string(p.head_dim));
  }
  return {apply(p.q, x), apply(p.k, x), apply(p.v, x)};
}

RowMatrix<float> head_slice(const Tensor & t, std::size_t b, std::size_t head, std::size_t d)
{
  const std::size_t n = t.dim(1), c = t.dim(2);
  const float * base = t.raw() + b * n * c + head * d;
  using Stride = Eigen::OuterStride<>;
  return Eigen::Map<const RowMatrix<float>, 0, Stride>(
    base, static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d),
    Stride(static_cast<Eigen::Index>(c)));
}

// Softmax(Q K^T / sqrt(d)) for one sample and head, rows in place.
RowMatrix<float> head_weights(const Projections & pr, std::size_t b, std::size_t head,
                              std::size_t d)
{
  const RowMatrix<float> qh = head_slice(pr.q, b, head, d);
  const RowMatrix<float> kh = head_slice(pr.k, b, head, d);
  RowMatrix<float> s = qh * kh.transpose();
  s *= static_cast<float>(1.0 / std::sqrt(static_cast<double>(d)));
  const std::size_t n = static_cast<std::size_t>(s.rows());
  for (std::size_t i = 0; i < n; ++i) {
    auto row = s.row(static_cast<Eigen::Index>(i));
    const float mx = row.maxCoeff();
    double sum = 0.0;
    for (Eigen::Index j = 0; j < row.size(); ++j) {
      row(j) = static_cast<float>(std::exp(static_cast<double>(row(j) - mx)));
      sum += row(j);
    }
    row /= static_cast<float>(sum);
  }
  return s;
}

}  // namespace

Tensor attention_mixer(const Tensor & x, const AttentionParams & params)
{
  const Projections pr = project(x, params);
  const std::size_t batch = x.dim(0), n = x.dim(1), c = x.dim(2), d = params.head_dim;
  Tensor mixed(x.shape());
  using Stride = Eigen::OuterStride<>;
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t h = 0; h < c / d; ++h) {
      const RowMatrix<float> weights = head_weights(pr, b, h, d);
      const RowMatrix<float> vh = head_slice(pr.v, b, h, d);
      Eigen::Map<RowMatrix<float>, 0, Stride>(
        mixed.raw() + b * n * c + h * d, static_cast<Eigen::Index>(n),
        static_cast<Eigen::Index>(d), Stride(static_cast<Eigen::Index>(c))) = weights * vh;
    }
  }
  return apply(params.o, mixed);
}

Tensor attention_weights(const Tensor & x, const AttentionParams & params)
{
  const Projections pr = project(x, params);
  const std::size_t batch = x.dim(0), n = x.dim(1), d = params.head_dim;
  const std::size_t heads = x.dim(2) / d;
  Tensor out({batch, heads, n, n});
  for (std::size_t b = 0; b < batch; ++b) {
    for (std::size_t h = 0; h < heads; ++h) {
      detail::as_matrix(out.raw() + (b * heads + h) * n * n, n, n) = head_weights(pr, b, h, d);
    }
  }
  return out;
}

Tensor apply_mixer(const MixerParams & params, const Tensor & x)
{
  if (x.rank() != 4) {
    throw DimensionError("apply_mixer: expected [B, H, W, C] input, got " + shape_string(x.shape()));
  }
  const Shape seq = {x.dim(0), x.dim(1) * x.dim(2), x.dim(3)};
  return std::visit(
    [&](const auto & p) -> Tensor {
      using P = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<P, IdentityParams>) {
        return identity_mixer(x);
      } else if constexpr (std::is_same_v<P, RandomMixingMatrix>) {
        return random_mixer(x.reshaped(seq), p).reshaped(x.shape());
      } else if constexpr (std::is_same_v<P, PoolingParams>) {
        return nchw_to_nhwc(pooling_mixer(nhwc_to_nchw(x), p.window));
      } else if constexpr (std::is_same_v<P, SepConvParams>) {
        return sepconv_mixer(x, p);
      } else {
        return attention_mixer(x.reshaped(seq), p).reshaped(x.shape());
      }
    },
    params);
}

}  // namespace metaformer
