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

#ifndef METAFORMER__MIXERS_HPP_
#define METAFORMER__MIXERS_HPP_

#include <cstdint>
#include <string>
#include <variant>

#include "metaformer/layers.hpp"

namespace metaformer
{

enum class MixerKind
{
  Identity,
  RandomMixing,
  Pooling,
  SepConv,
  Attention,
};

/// Token mixer selection plus the parameters of that kind.
struct MixerSpec
{
  MixerKind kind = MixerKind::Identity;
  std::size_t pool_window = 3;
  std::size_t kernel_size = 7;
  std::size_t expansion = 2;
  std::size_t head_dim = 32;
  /// Random mixing only. 0 means "take the stage's token count at build time".
  std::size_t num_tokens = 0;
  std::uint64_t seed = 0;

  static MixerSpec identity() { return {}; }
  static MixerSpec random_mixing(std::size_t tokens = 0, std::uint64_t seed = 0)
  {
    MixerSpec s;
    s.kind = MixerKind::RandomMixing;
    s.num_tokens = tokens;
    s.seed = seed;
    return s;
  }
  static MixerSpec pooling(std::size_t window = 3)
  {
    MixerSpec s;
    s.kind = MixerKind::Pooling;
    s.pool_window = window;
    return s;
  }
  static MixerSpec sepconv(std::size_t kernel = 7, std::size_t expansion = 2)
  {
    MixerSpec s;
    s.kind = MixerKind::SepConv;
    s.kernel_size = kernel;
    s.expansion = expansion;
    return s;
  }
  static MixerSpec attention(std::size_t head_dim = 32)
  {
    MixerSpec s;
    s.kind = MixerKind::Attention;
    s.head_dim = head_dim;
    return s;
  }

  /// Throws ConfigError on even pooling window/kernel, zero expansion, etc.
  void validate() const;
};

/// "Id", "Rand", "Pool", "Conv", "Attn".
std::string short_name(MixerKind kind);
/// Accepts the short names and identity/random/pooling/sepconv/attention.
MixerKind parse_mixer_kind(const std::string & name);

/// Frozen row-stochastic N x N matrix: row-wise softmax of U[0, 1) entries.
struct RandomMixingMatrix
{
  Tensor weights;
  std::uint64_t seed = 0;

  static RandomMixingMatrix generate(std::size_t num_tokens, std::uint64_t seed);
  std::size_t num_tokens() const { return weights.dim(0); }
};

struct IdentityParams
{
};

struct PoolingParams
{
  std::size_t window = 3;
};

/// pointwise expand -> act -> depthwise k x k -> pointwise project.
struct SepConvParams
{
  LinearLayer pw1;  ///< [C, rC]
  ActivationParams act;
  ConvLayer dw;     ///< [rC, 1, k, k], groups = rC
  LinearLayer pw2;  ///< [rC, C]
};

/// Multi-head scaled dot-product self-attention, projections stored [in, out].
struct AttentionParams
{
  LinearLayer q, k, v, o;
  std::size_t head_dim = 32;

  std::size_t num_heads() const { return q.out_features() / head_dim; }
};

using MixerParams =
  std::variant<IdentityParams, RandomMixingMatrix, PoolingParams, SepConvParams, AttentionParams>;

MixerKind mixer_kind(const MixerParams & params);

/// Parameter skeleton with deterministic constants filled in and weights zero.
/// Random-mixing matrices are zero until initialized.
MixerParams make_mixer(const MixerSpec & spec, std::size_t channels, bool biases,
                       const ActivationSpec & act);

// ---------------------------------------------------------------------------

Tensor identity_mixer(const Tensor & x);

/// out[b, i, c] = sum_j W[i, j] x[b, j, c]; x is [B, N, C].
Tensor random_mixer(const Tensor & x, const RandomMixingMatrix & m);

/// avgpool(k = window, stride 1, pad window / 2) - x; x is [B, C, H, W].
Tensor pooling_mixer(const Tensor & x, std::size_t window);

/// x is [B, H, W, C].
Tensor sepconv_mixer(const Tensor & x, const SepConvParams & params);

/// x is [B, N, C].
Tensor attention_mixer(const Tensor & x, const AttentionParams & params);

/// Softmax attention weights [B, heads, N, N] for inspection and tests.
Tensor attention_weights(const Tensor & x, const AttentionParams & params);

/// Dispatches on the variant; x is [B, H, W, C] and so is the result.
Tensor apply_mixer(const MixerParams & params, const Tensor & x);

template <MaybeConstOf<MixerParams> M, typename V>
void visit_parameters(M & mixer, const std::string & name, V && visit)
{
  std::visit(
    [&](auto & p) {
      using P = std::remove_cvref_t<decltype(p)>;
      if constexpr (std::is_same_v<P, RandomMixingMatrix>) {
        visit("frozen." + name + ".random_matrix", p.weights, ParamKind::RandomMatrix);
      } else if constexpr (std::is_same_v<P, SepConvParams>) {
        visit_parameters(p.pw1, name + ".pw1", visit);
        visit_parameters(p.act, name + ".star", visit);
        visit_parameters(p.dw, name + ".dw", visit);
        visit_parameters(p.pw2, name + ".pw2", visit);
      } else if constexpr (std::is_same_v<P, AttentionParams>) {
        visit_parameters(p.q, name + ".wq", visit);
        visit_parameters(p.k, name + ".wk", visit);
        visit_parameters(p.v, name + ".wv", visit);
        visit_parameters(p.o, name + ".wo", visit);
      }
    },
    mixer);
}

}  // namespace metaformer

#endif  // METAFORMER__MIXERS_HPP_
