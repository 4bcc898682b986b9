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

// Acceptance gate: one PASS/FAIL line per criterion, tolerances fixed below.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <map>
#include <algorithm>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include "metaformer/analysis.hpp"
#include "metaformer/checkpoint.hpp"
#include "oracles.hpp"

using namespace metaformer;

namespace
{

constexpr double kParamTol = 0.01;
constexpr double kMacTol = 0.03;
constexpr std::size_t kMomentSamples = 10'000'000;
constexpr double kSqMeanTol = 0.005;
constexpr double kSqVarTol = 0.02;
constexpr double kStarMomentTol = 0.01;
constexpr double kGradStep = 1e-3;
constexpr std::size_t kGradPoints = 1000;
constexpr double kGradTol = 1e-3;
constexpr int kOracleCases = 200;
constexpr double kOracleTol = 1e-5;
constexpr double kResScaleTol = 1e-6;
constexpr double kEquivarianceTol = 1e-5;
constexpr double kStochasticTol = 1e-6;
constexpr std::size_t kAblationResolution = 32;

struct Outcome
{
  bool pass = true;
  std::string detail;

  void fail(const std::string & why)
  {
    pass = false;
    detail += (detail.empty() ? "" : "; ") + why;
  }
  void note(const std::string & what) { detail += (detail.empty() ? "" : "; ") + what; }
};

std::string fmt(const char * format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

Model skeleton(const std::string & name, std::size_t resolution = 224)
{
  BuildOptions opts;
  opts.init = InitMode::ZeroWeights;
  opts.resolution = resolution;
  return build_model(named_config(name), opts);
}

double rel_err(double value, double target) { return std::abs(value - target) / std::abs(target); }

// 1 -------------------------------------------------------------------------
Outcome basic_mixer_params()
{
  Outcome o;
  double worst = 0;
  for (const auto & name : basic_mixer_table_models()) {
    const auto & ref = reference_size(name);
    const ParamCount n = count_params(skeleton(name));
    const double p = n.learnable / 1e6;
    worst = std::max(worst, rel_err(p, ref.params_m));
    if (rel_err(p, ref.params_m) > kParamTol) {
      o.fail(fmt("%s %.3fM vs %.1fM", name.c_str(), p, ref.params_m));
    }
    if (ref.frozen_m) {
      const double f = n.frozen / 1e6;
      if (std::round(f * 10) / 10 != *ref.frozen_m) {
        o.fail(fmt("%s frozen %.3fM vs %.1fM", name.c_str(), f, *ref.frozen_m));
      } else {
        o.note(fmt("%s frozen %.3fM", name.c_str(), f));
      }
    }
  }
  o.note(fmt("15 models, worst param error %.2f%%", 100 * worst));
  return o;
}

// 2 -------------------------------------------------------------------------
Outcome conv_attention_params()
{
  Outcome o;
  for (const auto & name : conv_attention_table_models()) {
    const auto & ref = reference_size(name);
    const double p = count_params(skeleton(name)).learnable / 1e6;
    const double e = (p - ref.params_m) / ref.params_m;
    const std::string line = fmt("%s %.3fM vs %.0fM (%+.2f%%)", name.c_str(), p, ref.params_m, 100 * e);
    if (std::abs(e) > kParamTol) {
      o.fail(line);
    } else {
      o.note(line);
    }
  }
  return o;
}

// 3 -------------------------------------------------------------------------
Outcome mac_reproduction()
{
  Outcome o;
  const struct
  {
    const char * name;
    std::size_t res;
    double gmacs;
  } cases[] = {{"IdentityFormer-S12", 224, 1.8}, {"ConvFormer-S18", 224, 3.9},
               {"CAFormer-S18", 224, 4.1},       {"CAFormer-B36", 224, 23.2},
               {"ConvFormer-S18", 384, 11.6},    {"CAFormer-M36", 384, 42.0}};
  for (const auto & c : cases) {
    const double g = count_macs(skeleton(c.name, c.res), c.res) / 1e9;
    const std::string line = fmt("%s@%zu %.3fG vs %.1fG", c.name, c.res, g, c.gmacs);
    if (rel_err(g, c.gmacs) > kMacTol) {
      o.fail(line);
    } else {
      o.note(line);
    }
  }
  return o;
}

// 4 -------------------------------------------------------------------------
Outcome activation_statistics()
{
  Outcome o;
  const auto sq = squared_relu_moments(kMomentSamples, 0);
  const auto star = activation_output_moments(
    kMomentSamples, 0, ActivationSpec::star_relu(StarVariant::FrozenScaleBias));
  auto check = [&](const char * what, double v, double target, double tol) {
    const std::string line = fmt("%s %.5f (target %.2f +- %.3f)", what, v, target, tol);
    if (std::abs(v - target) > tol) {
      o.fail(line);
    } else {
      o.note(line);
    }
  };
  check("squared-relu mean", sq.mean, 0.5, kSqMeanTol);
  check("squared-relu var", sq.variance, 1.25, kSqVarTol);
  check("starrelu mean", star.mean, 0.0, kStarMomentTol);
  check("starrelu var", star.variance, 1.0, kStarMomentTol);
  return o;
}

// 5 -------------------------------------------------------------------------
Outcome activation_flops()
{
  Outcome o;
  const auto gelu = ActivationSpec::gelu();
  const auto star = ActivationSpec::star_relu();
  for (const auto & name : named_config_names()) {
    const Model m = skeleton(name);
    const std::uint64_t g = count_activation_flops(m, 224, gelu);
    if (count_activation_flops(m, 224, star) * 14 != g * 4) o.fail(name + " starrelu/gelu != 4/14");
    for (auto v : {StarVariant::LearnableScale, StarVariant::LearnableBias, StarVariant::FrozenScale,
                   StarVariant::FrozenBias}) {
      if (count_activation_flops(m, 224, ActivationSpec::star_relu(v)) * 14 != g * 3) {
        o.fail(name + " " + to_string(v) + " != 3/14");
      }
    }
  }
  o.note(fmt("23 models; StarReLU/GELU = 4/14 (%.1f%% fewer), single-scalar = 3/14",
             100.0 * (1 - 4.0 / 14)));
  return o;
}

// 6 -------------------------------------------------------------------------
Outcome derivatives()
{
  Outcome o;
  double worst = 0;
  for (const auto & name : activation_names()) {
    const auto r = gradcheck(parse_activation(name), kGradPoints, kGradStep, 0);
    worst = std::max(worst, r.max_relative_error);
    if (r.max_relative_error >= kGradTol) {
      o.fail(fmt("%s %.3e at x=%.4f", name.c_str(), r.max_relative_error, r.worst_x));
    }
  }
  o.note(fmt("%zu activations x %zu points, worst relative error %.3e", activation_names().size(),
             kGradPoints, worst));
  return o;
}

// 7 -------------------------------------------------------------------------
Tensor slice(const Tensor & x, std::size_t b)
{
  Shape s(x.shape().begin() + 1, x.shape().end());
  Tensor out(s);
  std::copy_n(x.raw() + b * out.size(), out.size(), out.raw());
  return out;
}

Outcome oracle_equivalence()
{
  Outcome o;
  std::mt19937_64 gen(2024);
  auto pick = [&](std::size_t lo, std::size_t hi) {
    return std::uniform_int_distribution<std::size_t>(lo, hi)(gen);
  };
  std::uint64_t seed = 1;
  std::map<std::string, double> worst;
  auto record = [&](const std::string & kernel, double err) {
    worst[kernel] = std::max(worst[kernel], err);
  };

  for (int c = 0; c < kOracleCases; ++c) {
    {
      const std::size_t m = pick(1, 32), k = pick(1, 32), n = pick(1, 32);
      const Tensor a = oracle::random_tensor({m, k}, seed++), b = oracle::random_tensor({k, n}, seed++);
      record("matmul", max_abs_diff(matmul(a, b), oracle::naive_matmul(a, b).value));
    }
    {
      const std::size_t k = pick(1, 32), n = pick(1, 32);
      const Tensor x = oracle::random_tensor({pick(1, 3), pick(1, 16), k}, seed++);
      const Tensor w = oracle::random_tensor({k, n}, seed++), b = oracle::random_tensor({n}, seed++);
      record("linear", max_abs_diff(linear(x, w, &b), oracle::naive_linear(x, w, &b).value));
    }
    {
      const std::size_t groups = (c % 2) ? pick(2, 4) : 1;
      const std::size_t cin = groups * pick(1, 4), cout = groups * pick(1, 4);
      const std::size_t k = 2 * pick(1, 3) - 1, stride = pick(1, 3), pad = pick(0, k / 2);
      const Tensor x = oracle::random_tensor({pick(1, 2), cin, pick(k, 12), pick(k, 12)}, seed++);
      const Tensor w = oracle::random_tensor({cout, cin / groups, k, k}, seed++);
      const Tensor b = oracle::random_tensor({cout}, seed++);
      record("conv2d", max_abs_diff(conv2d(x, w, {stride, pad, groups}, &b),
                                    oracle::naive_conv2d(x, w, stride, pad, groups, &b).value));
    }
    {
      const std::size_t ch = pick(1, 8), k = 2 * pick(1, 4) - 1;
      const Tensor x = oracle::random_tensor({1, ch, pick(k, 12), pick(k, 12)}, seed++);
      const Tensor w = oracle::random_tensor({ch, 1, k, k}, seed++);
      record("depthwise conv2d", max_abs_diff(conv2d(x, w, {1, k / 2, ch}),
                                              oracle::naive_conv2d(x, w, 1, k / 2, ch).value));
    }
    {
      const std::size_t k = 2 * pick(1, 2) + 1;
      const Tensor x = oracle::random_tensor({pick(1, 2), pick(1, 5), pick(k, 10), pick(k, 10)}, seed++);
      record("avgpool", max_abs_diff(avgpool2d(x, k, 1, k / 2), oracle::naive_avgpool(x, k, 1, k / 2).value));
    }
    {
      const std::size_t ch = pick(2, 32);
      const Tensor x = oracle::random_tensor({pick(1, 16), ch}, seed++, 3.0);
      const Tensor g = oracle::random_tensor({ch}, seed++), b = oracle::random_tensor({ch}, seed++);
      record("layernorm", max_abs_diff(layernorm(x, g, &b),
                                       oracle::naive_layernorm(x, g, &b, kLayerNormEps).value));
    }
    {
      const Tensor x = oracle::random_tensor({pick(1, 8), pick(1, 32)}, seed++, 10.0);
      record("softmax", max_abs_diff(softmax_lastdim(x), oracle::naive_softmax(x).value));
    }
    {
      const std::size_t hd = pick(1, 8), ch = hd * pick(1, 4), n = pick(1, 32);
      auto p = std::get<AttentionParams>(
        make_mixer(MixerSpec::attention(hd), ch, false, ActivationSpec::star_relu()));
      for (LinearLayer * l : {&p.q, &p.k, &p.v, &p.o}) l->weight = oracle::random_tensor({ch, ch}, seed++, 0.5);
      const Tensor x = oracle::random_tensor({1, n, ch}, seed++);
      record("attention", max_abs_diff(slice(attention_mixer(x, p), 0),
                                       oracle::naive_attention(slice(x, 0), p.q.weight, p.k.weight,
                                                               p.v.weight, p.o.weight, hd).value));
    }
    {
      const std::size_t n = pick(1, 32), ch = pick(1, 16);
      const auto m = RandomMixingMatrix::generate(n, seed++);
      const Tensor x = oracle::random_tensor({1, n, ch}, seed++);
      record("random mixing", max_abs_diff(slice(random_mixer(x, m), 0),
                                           oracle::naive_random_mix(slice(x, 0), m.weights).value));
    }
    {
      const std::size_t side = pick(1, 8), ch = pick(1, 8);
      auto p = std::get<SepConvParams>(make_mixer(MixerSpec::sepconv(), ch, false,
                                                  ActivationSpec::star_relu(StarVariant::FrozenScaleBias)));
      p.pw1.weight = oracle::random_tensor(p.pw1.weight.shape(), seed++, 0.5);
      p.dw.weight = oracle::random_tensor(p.dw.weight.shape(), seed++, 0.5);
      p.pw2.weight = oracle::random_tensor(p.pw2.weight.shape(), seed++, 0.5);
      const Tensor x = oracle::random_tensor({1, side, side, ch}, seed++);
      record("sepconv", max_abs_diff(slice(sepconv_mixer(x, p), 0),
                                     oracle::naive_sepconv(slice(x, 0), p.pw1.weight, kStarScale,
                                                           kStarBias, p.dw.weight, p.pw2.weight).value));
    }
  }
  std::string kernels;
  for (const auto & [kernel, err] : worst) {
    if (err > kOracleTol) o.fail(fmt("%s max error %.2e", kernel.c_str(), err));
    kernels += (kernels.empty() ? "" : ", ") + kernel + fmt(" %.1e", err);
  }
  o.note(fmt("%d cases per kernel: ", kOracleCases) + kernels);

  std::size_t exact = 0;
  for (const auto & name : named_config_names()) {
    const ParamCount n = count_params(skeleton(name));
    const auto cf = oracle::closed_form_params(named_config(name));
    if (n.learnable != cf.learnable || n.frozen != cf.frozen) {
      o.fail(fmt("%s counted %llu/%llu closed form %llu/%llu", name.c_str(),
                 (unsigned long long)n.learnable, (unsigned long long)n.frozen,
                 (unsigned long long)cf.learnable, (unsigned long long)cf.frozen));
    } else {
      ++exact;
    }
  }
  o.note(fmt("closed-form params exact for %zu/23 models", exact));
  return o;
}

// 8 -------------------------------------------------------------------------
void randomize_block(BlockParams & p, std::uint64_t seed)
{
  visit_parameters(p, "b", [&](const std::string &, Tensor & t, ParamKind kind) {
    if (kind != ParamKind::RandomMatrix) t = oracle::random_tensor(t.shape(), seed++, 0.2);
  });
}

bool same_bits(const Model & a, const Model & b)
{
  std::vector<const Tensor *> ta, tb;
  visit_parameters(a, [&](const std::string &, const Tensor & t, ParamKind) { ta.push_back(&t); });
  visit_parameters(b, [&](const std::string &, const Tensor & t, ParamKind) { tb.push_back(&t); });
  if (ta.size() != tb.size()) return false;
  for (std::size_t i = 0; i < ta.size(); ++i) {
    if (ta[i]->shape() != tb[i]->shape() ||
        std::memcmp(ta[i]->raw(), tb[i]->raw(), ta[i]->size() * sizeof(float)) != 0) {
      return false;
    }
  }
  return true;
}

Outcome structural_invariants()
{
  Outcome o;
  const MixerSpec mixers[] = {MixerSpec::identity(), MixerSpec::random_mixing(16),
                              MixerSpec::pooling(), MixerSpec::sepconv(), MixerSpec::attention(8)};
  const Tensor x = oracle::random_tensor({2, 4, 4, 16}, 1, 2.0);

  // identity-degenerate block
  for (const auto & m : mixers) {
    BlockParams p = make_block({16, m, ActivationSpec::star_relu(), ScalingSpec::none()});
    visit_parameters(p, "b", [](const std::string &, Tensor & t, ParamKind) { t = Tensor(t.shape()); });
    if (!(block_forward(x, p) == x)) o.fail("identity-degenerate block not exact for " + short_name(m.kind));
  }
  o.note("zeroed blocks exact identity for all 5 mixers");

  // ResScale at init
  double res_err = 0;
  for (const auto & m : mixers) {
    BlockParams plain = make_block({16, m, ActivationSpec::star_relu(), ScalingSpec::none()});
    randomize_block(plain, 100);
    if (auto * rm = std::get_if<RandomMixingMatrix>(&plain.mixer)) *rm = RandomMixingMatrix::generate(16, 3);
    BlockParams res = plain;
    res.res_scale1 = Tensor::ones({16});
    res.res_scale2 = Tensor::ones({16});
    const BlockParams fresh = make_block({16, m, ActivationSpec::star_relu(), ScalingSpec::res_scale()});
    if (!(*fresh.res_scale1 == *res.res_scale1)) o.fail("ResScale does not initialize to ones");
    res_err = std::max(res_err, max_abs_diff(block_forward(x, plain), block_forward(x, res)));
  }
  if (res_err > kResScaleTol) o.fail(fmt("ResScale-at-init deviation %.2e", res_err));
  o.note(fmt("ResScale-at-init max deviation %.1e", res_err));

  // attention permutation equivariance
  {
    const std::size_t n = 16, c = 32;
    auto p = std::get<AttentionParams>(make_mixer(MixerSpec::attention(8), c, false, ActivationSpec::star_relu()));
    std::uint64_t seed = 7;
    for (LinearLayer * l : {&p.q, &p.k, &p.v, &p.o}) l->weight = oracle::random_tensor({c, c}, seed++, 0.5);
    const Tensor t = oracle::random_tensor({1, n, c}, 9);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), std::mt19937_64(5));
    Tensor tp({1, n, c});
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < c; ++j) tp(0, i, j) = t(0, perm[i], j);
    const Tensor y = attention_mixer(t, p), yp = attention_mixer(tp, p);
    double err = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < c; ++j) err = std::max(err, double(std::abs(yp(0, i, j) - y(0, perm[i], j))));
    if (err > kEquivarianceTol) o.fail(fmt("attention equivariance error %.2e", err));
    o.note(fmt("attention permutation error %.1e", err));
  }

  // random mixing rows
  {
    double err = 0;
    std::size_t matrices = 0;
    for (const char * name : {"RandFormer-S12", "RandFormer-M48"}) {
      const Model m = build_model(named_config(name), {.seed = 3});
      visit_parameters(m, [&](const std::string &, const Tensor & t, ParamKind kind) {
        if (kind != ParamKind::RandomMatrix) return;
        ++matrices;
        for (std::size_t i = 0; i < t.dim(0); ++i) {
          double total = 0;
          for (std::size_t j = 0; j < t.dim(1); ++j) total += t(i, j);
          err = std::max(err, std::abs(total - 1.0));
        }
      });
    }
    if (err > kStochasticTol) o.fail(fmt("random mixing row sum error %.2e", err));
    o.note(fmt("%zu random matrices, row-sum error %.1e", matrices, err));
  }

  // checkpoint round trip
  for (const char * name : {"CAFormer-S18", "RandFormer-S12", "PoolFormerV2-S12", "ConvFormer-S18"}) {
    const ModelConfig cfg = named_config(name);
    const Model m = build_model(cfg, {.seed = 11});
    std::stringstream ss;
    save_checkpoint(m, ss);
    const Model back = load_checkpoint(cfg, ss);
    if (!same_bits(m, back)) o.fail(std::string("round trip differs for ") + name);
  }
  {
    ModelConfig cfg = named_config("CAFormer-S18");
    cfg.default_resolution = 64;
    const Model m = build_model(cfg, {.seed = 12});
    std::stringstream ss;
    save_checkpoint(m, ss);
    const Model back = load_checkpoint(cfg, ss);
    const Tensor img = oracle::random_tensor({2, 3, 64, 64}, 13);
    const Tensor a = forward(m, img), b = forward(back, img);
    if (std::memcmp(a.raw(), b.raw(), a.size() * sizeof(float)) != 0) o.fail("reloaded logits differ");
  }
  o.note("save/load bit-exact (parameters and logits)");
  return o;
}

// 9 -------------------------------------------------------------------------
struct Variant
{
  std::string label;
  ActivationSpec activation;
  ScalingKind scaling;
  BiasPolicy bias;
};

ModelConfig ablate(ModelConfig c, const Variant & v)
{
  c.activation = v.activation;
  const ScalingSpec s{v.scaling};
  c.scaling = {ScalingSpec::none(), ScalingSpec::none(), s, s};
  c.block_bias = v.bias;
  c.name += " [" + v.label + "]";
  return c;
}

bool runs_finite(const ModelConfig & c, std::uint64_t seed, std::string & why)
{
  try {
    BuildOptions opts;
    opts.seed = seed;
    opts.resolution = kAblationResolution;
    const Model m = build_model(c, opts);
    const Tensor logits = forward(m, oracle::random_tensor({1, 3, kAblationResolution, kAblationResolution}, seed));
    if (!all_finite(logits)) {
      why = c.name + " produced non-finite logits";
      return false;
    }
    return true;
  } catch (const std::exception & e) {
    why = c.name + ": " + e.what();
    return false;
  }
}

Outcome ablation_constructibility()
{
  Outcome o;
  const auto star = ActivationSpec::star_relu;
  const Variant base{"baseline", star(StarVariant::LearnableScaleBias), ScalingKind::ResScale,
                     BiasPolicy::Disabled};
  std::vector<Variant> rows = {base};
  auto with = [&](std::string label, auto edit) {
    Variant v = base;
    v.label = std::move(label);
    edit(v);
    rows.push_back(v);
  };
  with("relu", [](Variant & v) { v.activation = ActivationSpec::relu(); });
  with("squared-relu", [](Variant & v) { v.activation = ActivationSpec::squared_relu(); });
  with("gelu", [](Variant & v) { v.activation = ActivationSpec::gelu(); });
  for (auto sv : {StarVariant::LearnableScale, StarVariant::LearnableBias, StarVariant::FrozenScaleBias,
                  StarVariant::FrozenScale, StarVariant::FrozenBias}) {
    with(to_string(sv), [&](Variant & v) { v.activation = star(sv); });
  }
  with("scaling none", [](Variant & v) { v.scaling = ScalingKind::None; });
  with("layerscale", [](Variant & v) { v.scaling = ScalingKind::LayerScale; });
  with("branchscale", [](Variant & v) { v.scaling = ScalingKind::BranchScale; });
  with("biases on", [](Variant & v) { v.bias = BiasPolicy::Enabled; });

  std::size_t ok = 0, total = 0;
  std::string why;
  for (const char * name : {"ConvFormer-S18", "CAFormer-S18"}) {
    for (const auto & v : rows) {
      ++total;
      if (runs_finite(ablate(named_config(name), v), total, why)) {
        ++ok;
      } else {
        o.fail(why);
      }
    }
  }
  o.note(fmt("ablation rows %zu/%zu on both S18 models at %zux%zu", ok, total, kAblationResolution,
             kAblationResolution));

  // Full cross-product on narrow models with the same stage structure.
  std::size_t grid_ok = 0, grid_total = 0;
  const ScalingKind scalings[] = {ScalingKind::None, ScalingKind::LayerScale, ScalingKind::ResScale,
                                  ScalingKind::BranchScale};
  for (const char * name : {"ConvFormer-S18", "CAFormer-S18"}) {
    ModelConfig narrow = named_config(name);
    narrow.channels = {16, 32, 64, 128};
    for (auto & m : narrow.mixers) m.head_dim = 16;
    for (const auto & act : activation_names()) {
      for (auto s : scalings) {
        for (auto bias : {BiasPolicy::Disabled, BiasPolicy::Enabled}) {
          ++grid_total;
          const Variant v{act + "/" + to_string(s) + (bias == BiasPolicy::Enabled ? "/bias" : ""),
                          parse_activation(act), s, bias};
          if (runs_finite(ablate(narrow, v), grid_total, why)) {
            ++grid_ok;
          } else {
            o.fail(why);
          }
        }
      }
    }
  }
  o.note(fmt("full grid %zu/%zu (10 activations x 4 scalings x 2 bias x 2 models, narrow widths)",
             grid_ok, grid_total));
  o.note("ImageNet accuracies are not reproduced at desk scale");
  return o;
}

}  // namespace

int main()
{
  const struct
  {
    int id;
    const char * title;
    std::function<Outcome()> run;
  } criteria[] = {
    {1, "basic-mixer model parameters", basic_mixer_params},
    {2, "conv/attention model parameters", conv_attention_params},
    {3, "MAC counts", mac_reproduction},
    {4, "StarReLU statistics", activation_statistics},
    {5, "activation FLOP ratios", activation_flops},
    {6, "derivative verification", derivatives},
    {7, "oracle equivalence", oracle_equivalence},
    {8, "structural invariants", structural_invariants},
    {9, "ablation constructibility", ablation_constructibility},
  };

  int failed = 0;
  for (const auto & c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception & e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::cout << (o.pass ? "PASS" : "FAIL") << " criterion " << c.id << " (" << c.title << ", "
              << fmt("%.1fs", secs) << "): " << o.detail << std::endl;
    failed += o.pass ? 0 : 1;
  }
  std::cout << (9 - failed) << "/9 criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
