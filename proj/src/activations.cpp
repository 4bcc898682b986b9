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

#include "metaformer/activations.hpp"

#include <algorithm>
#include <map>

#include "metaformer/random.hpp"

namespace metaformer
{

ActivationSpec ActivationSpec::star_relu(StarVariant variant)
{
  ActivationSpec spec{ActivationKind::StarReLU, variant, kStarScale, kStarBias};
  switch (variant) {
    case StarVariant::LearnableScaleBias:
    case StarVariant::FrozenScaleBias:
      break;
    case StarVariant::LearnableScale:
    case StarVariant::FrozenScale:
      spec.bias = 0.0f;
      break;
    case StarVariant::LearnableBias:
    case StarVariant::FrozenBias:
      spec.scale = 1.0f;
      break;
  }
  return spec;
}

bool ActivationSpec::uses_scale() const
{
  if (kind != ActivationKind::StarReLU || !star_variant) return false;
  return *star_variant != StarVariant::LearnableBias && *star_variant != StarVariant::FrozenBias;
}

bool ActivationSpec::uses_bias() const
{
  if (kind != ActivationKind::StarReLU || !star_variant) return false;
  return *star_variant != StarVariant::LearnableScale && *star_variant != StarVariant::FrozenScale;
}

bool ActivationSpec::learnable_scale() const
{
  return star_variant && (*star_variant == StarVariant::LearnableScaleBias ||
                          *star_variant == StarVariant::LearnableScale);
}

bool ActivationSpec::learnable_bias() const
{
  return star_variant && (*star_variant == StarVariant::LearnableScaleBias ||
                          *star_variant == StarVariant::LearnableBias);
}

void ActivationSpec::validate() const
{
  const bool star = kind == ActivationKind::StarReLU;
  if (star != star_variant.has_value()) {
    throw ConfigError(
      star ? "StarReLU activation requires a star variant"
           : "star variant given for non-StarReLU activation " + to_string(kind));
  }
}

std::uint64_t flops_per_unit(const ActivationSpec & spec)
{
  switch (spec.kind) {
    case ActivationKind::ReLU:
      return 1;
    case ActivationKind::GELU:
      return 14;
    case ActivationKind::SquaredReLU:
      return 2;
    case ActivationKind::StarReLU:
      return 2 + (spec.uses_scale() ? 1 : 0) + (spec.uses_bias() ? 1 : 0);
  }
  return 0;
}

std::string to_string(ActivationKind kind)
{
  switch (kind) {
    case ActivationKind::ReLU:
      return "ReLU";
    case ActivationKind::GELU:
      return "GELU";
    case ActivationKind::SquaredReLU:
      return "SquaredReLU";
    case ActivationKind::StarReLU:
      return "StarReLU";
  }
  return "?";
}

namespace
{

const std::vector<std::pair<std::string, ActivationSpec>> & activation_table()
{
  static const std::vector<std::pair<std::string, ActivationSpec>> table = {
    {"relu", ActivationSpec::relu()},
    {"gelu", ActivationSpec::gelu()},
    {"squared-relu", ActivationSpec::squared_relu()},
    {"starrelu", ActivationSpec::star_relu(StarVariant::LearnableScaleBias)},
    {"starrelu-learnable", ActivationSpec::star_relu(StarVariant::LearnableScaleBias)},
    {"starrelu-learnable-scale", ActivationSpec::star_relu(StarVariant::LearnableScale)},
    {"starrelu-learnable-bias", ActivationSpec::star_relu(StarVariant::LearnableBias)},
    {"starrelu-frozen", ActivationSpec::star_relu(StarVariant::FrozenScaleBias)},
    {"starrelu-frozen-scale", ActivationSpec::star_relu(StarVariant::FrozenScale)},
    {"starrelu-frozen-bias", ActivationSpec::star_relu(StarVariant::FrozenBias)},
  };
  return table;
}

}  // namespace

std::string to_string(StarVariant variant)
{
  switch (variant) {
    case StarVariant::LearnableScaleBias:
      return "learnable";
    case StarVariant::LearnableScale:
      return "learnable-scale";
    case StarVariant::LearnableBias:
      return "learnable-bias";
    case StarVariant::FrozenScaleBias:
      return "frozen";
    case StarVariant::FrozenScale:
      return "frozen-scale";
    case StarVariant::FrozenBias:
      return "frozen-bias";
  }
  return "?";
}

std::string to_string(const ActivationSpec & spec)
{
  switch (spec.kind) {
    case ActivationKind::ReLU:
      return "relu";
    case ActivationKind::GELU:
      return "gelu";
    case ActivationKind::SquaredReLU:
      return "squared-relu";
    case ActivationKind::StarReLU:
      return spec.star_variant ? "starrelu-" + to_string(*spec.star_variant) : "starrelu";
  }
  return "?";
}

ActivationSpec parse_activation(const std::string & name)
{
  std::string key = name;
  std::transform(key.begin(), key.end(), key.begin(), [](unsigned char c) {
    return c == '_' ? '-' : static_cast<char>(std::tolower(c));
  });
  if (key == "squaredrelu") key = "squared-relu";
  for (const auto & [n, spec] : activation_table()) {
    if (n == key) return spec;
  }
  std::string valid;
  for (const auto & n : activation_names()) valid += (valid.empty() ? "" : ", ") + n;
  throw LookupError("unknown activation '" + name + "'; valid: " + valid);
}

std::vector<std::string> activation_names()
{
  std::vector<std::string> names;
  for (const auto & entry : activation_table()) names.push_back(entry.first);
  return names;
}

// ---------------------------------------------------------------------------

namespace
{

// Running power sums in double. n <= 1e8 keeps the sums well within range.
struct PowerSums
{
  double s1 = 0, s2 = 0, s3 = 0, s4 = 0;
  void add(double y)
  {
    const double y2 = y * y;
    s1 += y;
    s2 += y2;
    s3 += y2 * y;
    s4 += y2 * y2;
  }
};

struct Summary
{
  double mean, variance, mean_stderr, variance_stderr;
};

Summary summarize(const PowerSums & p, std::size_t n)
{
  const double nd = static_cast<double>(n);
  const double m1 = p.s1 / nd, m2 = p.s2 / nd, m3 = p.s3 / nd, m4 = p.s4 / nd;
  const double var_pop = m2 - m1 * m1;
  const double central4 = m4 - 4 * m1 * m3 + 6 * m1 * m1 * m2 - 3 * m1 * m1 * m1 * m1;
  Summary s{};
  s.mean = m1;
  s.variance = var_pop * nd / (nd - 1.0);
  s.mean_stderr = std::sqrt(s.variance / nd);
  s.variance_stderr = std::sqrt(std::max(central4 - var_pop * var_pop, 0.0) / nd);
  return s;
}

void require_samples(std::size_t n)
{
  if (n < kMinMomentSamples) {
    throw ConfigError(
      "moment estimation needs at least " + std::to_string(kMinMomentSamples) + " samples, got " +
      std::to_string(n));
  }
}

}  // namespace

SquaredReluMoments squared_relu_moments(std::size_t n_samples, std::uint64_t seed)
{
  require_samples(n_samples);
  CounterRng rng(seed);
  PowerSums y_sums;
  double x4_sum = 0.0, x8_sum = 0.0;
  for (std::size_t i = 0; i < n_samples; ++i) {
    const double x = rng.normal();
    const double x2 = x * x;
    const double x4 = x2 * x2;
    x4_sum += x4;
    x8_sum += x4 * x4;
    y_sums.add(act::squared_relu(x));
  }
  const Summary s = summarize(y_sums, n_samples);
  const double nd = static_cast<double>(n_samples);
  SquaredReluMoments out;
  out.samples = n_samples;
  out.mean = s.mean;
  out.variance = s.variance;
  out.mean_stderr = s.mean_stderr;
  out.variance_stderr = s.variance_stderr;
  out.input_fourth_moment = x4_sum / nd;
  out.fourth_moment_stderr =
    std::sqrt(std::max(x8_sum / nd - out.input_fourth_moment * out.input_fourth_moment, 0.0) / nd);
  return out;
}

OutputMoments activation_output_moments(std::size_t n_samples, std::uint64_t seed,
                                         const ActivationSpec & spec)
{
  require_samples(n_samples);
  spec.validate();
  CounterRng rng(seed);
  PowerSums sums;
  for (std::size_t i = 0; i < n_samples; ++i) sums.add(act::apply(rng.normal(), spec));
  const Summary s = summarize(sums, n_samples);
  return {n_samples, s.mean, s.variance, s.mean_stderr, s.variance_stderr};
}

GradCheckReport gradcheck(const ActivationSpec & spec, std::size_t points, double step,
                          std::uint64_t seed)
{
  spec.validate();
  if (!(step > 0.0)) throw ConfigError("gradcheck step must be positive");
  CounterRng rng(seed);
  std::vector<double> xs;
  xs.reserve(points);
  while (xs.size() < points) {
    const double x = -4.0 + 8.0 * rng.uniform();
    if (std::abs(x) >= 0.01) xs.push_back(x);
  }
  const TensorD x({points}, xs);
  const TensorD analytic = activation_derivative(x, spec);
  const TensorD plus = apply_activation(map(x, [step](double v) { return v + step; }), spec);
  const TensorD minus = apply_activation(map(x, [step](double v) { return v - step; }), spec);

  GradCheckReport report{spec, points, step, 0.0, 0.0};
  for (std::size_t i = 0; i < points; ++i) {
    const double numeric = (plus[i] - minus[i]) / (2.0 * step);
    const double a = analytic[i];
    const double denom = std::max({std::abs(a), std::abs(numeric), 1e-2});
    const double rel = std::abs(a - numeric) / denom;
    if (rel > report.max_relative_error) {
      report.max_relative_error = rel;
      report.worst_x = x[i];
    }
  }
  return report;
}

}  // namespace metaformer
