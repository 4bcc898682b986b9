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

#ifndef METAFORMER__ACTIVATIONS_HPP_
#define METAFORMER__ACTIVATIONS_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "metaformer/tensor.hpp"

namespace metaformer
{

enum class ActivationKind
{
  ReLU,
  GELU,
  SquaredReLU,
  StarReLU,
};

/// s * relu(x)^2 + b variants. "Learnable" scalars are stored as model
/// parameters; "frozen" ones are fixed at the standardizing constants.
enum class StarVariant
{
  LearnableScaleBias,
  LearnableScale,
  LearnableBias,
  FrozenScaleBias,
  FrozenScale,
  FrozenBias,
};

/// 1 / sqrt(Var(relu(x)^2)) and -E(relu(x)^2) / sqrt(Var(relu(x)^2)) for x ~ N(0, 1).
inline constexpr float kStarScale = 0.894427190999916f;
inline constexpr float kStarBias = -0.447213595499958f;

struct ActivationSpec
{
  ActivationKind kind = ActivationKind::StarReLU;
  std::optional<StarVariant> star_variant = StarVariant::LearnableScaleBias;
  float scale = kStarScale;
  float bias = kStarBias;

  static ActivationSpec relu() { return {ActivationKind::ReLU, std::nullopt, 1.0f, 0.0f}; }
  static ActivationSpec gelu() { return {ActivationKind::GELU, std::nullopt, 1.0f, 0.0f}; }
  static ActivationSpec squared_relu()
  {
    return {ActivationKind::SquaredReLU, std::nullopt, 1.0f, 0.0f};
  }
  /// StarReLU with the scalars at their standardizing (or identity) values.
  static ActivationSpec star_relu(StarVariant variant = StarVariant::LearnableScaleBias);

  bool uses_scale() const;
  bool uses_bias() const;
  bool learnable_scale() const;
  bool learnable_bias() const;

  /// Throws ConfigError when star_variant presence disagrees with kind.
  void validate() const;

  friend bool operator==(const ActivationSpec &, const ActivationSpec &) = default;
};

/// Per-unit cost: ReLU 1, GELU 14 (tanh counted as 6), SquaredReLU 2,
/// StarReLU 4, or 3 when only one of s/b is applied.
std::uint64_t flops_per_unit(const ActivationSpec & spec);

std::string to_string(ActivationKind kind);
std::string to_string(StarVariant variant);
std::string to_string(const ActivationSpec & spec);

/// Accepts relu, gelu, squared-relu, starrelu and starrelu-<variant> with
/// variant in {learnable, learnable-scale, learnable-bias, frozen,
/// frozen-scale, frozen-bias}.
ActivationSpec parse_activation(const std::string & name);

std::vector<std::string> activation_names();

// ---------------------------------------------------------------------------
// Scalar forms

namespace act
{

inline constexpr double kGeluC = 0.7978845608028654;  // sqrt(2 / pi)
inline constexpr double kGeluA = 0.044715;

template <typename T>
T relu(T x)
{
  return x > T(0) ? x : T(0);
}

template <typename T>
T gelu(T x)
{
  const T u = static_cast<T>(kGeluC) * (x + static_cast<T>(kGeluA) * x * x * x);
  return T(0.5) * x * (T(1) + std::tanh(u));
}

template <typename T>
T gelu_derivative(T x)
{
  const T c = static_cast<T>(kGeluC);
  const T a = static_cast<T>(kGeluA);
  const T t = std::tanh(c * (x + a * x * x * x));
  return T(0.5) * (T(1) + t) + T(0.5) * x * (T(1) - t * t) * c * (T(1) + T(3) * a * x * x);
}

template <typename T>
T squared_relu(T x)
{
  const T r = relu(x);
  return r * r;
}

template <typename T>
T star_relu(T x, T scale, T bias)
{
  const T r = relu(x);
  return scale * r * r + bias;
}

template <typename T>
T apply(T x, const ActivationSpec & spec)
{
  switch (spec.kind) {
    case ActivationKind::ReLU:
      return relu(x);
    case ActivationKind::GELU:
      return gelu(x);
    case ActivationKind::SquaredReLU:
      return squared_relu(x);
    case ActivationKind::StarReLU:
      return star_relu(x, static_cast<T>(spec.scale), static_cast<T>(spec.bias));
  }
  return x;
}

/// Subgradient 0 at x = 0 for the ReLU family.
template <typename T>
T derivative(T x, const ActivationSpec & spec)
{
  switch (spec.kind) {
    case ActivationKind::ReLU:
      return x > T(0) ? T(1) : T(0);
    case ActivationKind::GELU:
      return gelu_derivative(x);
    case ActivationKind::SquaredReLU:
      return T(2) * relu(x);
    case ActivationKind::StarReLU:
      return T(2) * static_cast<T>(spec.scale) * relu(x);
  }
  return T(0);
}

}  // namespace act

// ---------------------------------------------------------------------------
// Tensor forms

template <typename Scalar>
BasicTensor<Scalar> relu(const BasicTensor<Scalar> & x)
{
  return map(x, [](Scalar v) { return act::relu(v); });
}

template <typename Scalar>
BasicTensor<Scalar> gelu(const BasicTensor<Scalar> & x)
{
  return map(x, [](Scalar v) { return act::gelu(v); });
}

template <typename Scalar>
BasicTensor<Scalar> squared_relu(const BasicTensor<Scalar> & x)
{
  return map(x, [](Scalar v) { return act::squared_relu(v); });
}

template <typename Scalar>
BasicTensor<Scalar> star_relu(const BasicTensor<Scalar> & x, const ActivationSpec & spec)
{
  if (spec.kind != ActivationKind::StarReLU) {
    throw ConfigError("star_relu called with activation " + to_string(spec));
  }
  const Scalar s = static_cast<Scalar>(spec.scale);
  const Scalar b = static_cast<Scalar>(spec.bias);
  return map(x, [s, b](Scalar v) { return act::star_relu(v, s, b); });
}

template <typename Scalar>
BasicTensor<Scalar> apply_activation(const BasicTensor<Scalar> & x, const ActivationSpec & spec)
{
  return map(x, [&spec](Scalar v) { return act::apply(v, spec); });
}

template <typename Scalar>
BasicTensor<Scalar> activation_derivative(const BasicTensor<Scalar> & x,
                                          const ActivationSpec & spec)
{
  return map(x, [&spec](Scalar v) { return act::derivative(v, spec); });
}

// ---------------------------------------------------------------------------
// Monte-Carlo moments for x ~ N(0, 1)

struct SquaredReluMoments
{
  std::size_t samples = 0;
  double mean = 0.0;              ///< E[relu(x)^2]
  double variance = 0.0;          ///< Var[relu(x)^2]
  double input_fourth_moment = 0.0;  ///< E[x^4]
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
  double fourth_moment_stderr = 0.0;
};

SquaredReluMoments squared_relu_moments(std::size_t n_samples, std::uint64_t seed);

struct OutputMoments
{
  std::size_t samples = 0;
  double mean = 0.0;
  double variance = 0.0;
  double mean_stderr = 0.0;
  double variance_stderr = 0.0;
};

/// Moments of act(x) for x ~ N(0, 1), same generator as squared_relu_moments.
OutputMoments activation_output_moments(std::size_t n_samples, std::uint64_t seed,
                                         const ActivationSpec & spec);

inline constexpr std::size_t kMinMomentSamples = 1'000'000;

// ---------------------------------------------------------------------------
// Finite-difference verification

struct GradCheckReport
{
  ActivationSpec spec;
  std::size_t points = 0;
  double step = 0.0;
  double max_relative_error = 0.0;
  double worst_x = 0.0;
};

/// Compares activation_derivative against central differences at `points`
/// uniform samples in [-4, 4] with |x| >= 0.01. Evaluated in double precision.
/// Relative error is |a - n| / max(|a|, |n|, 1e-2).
GradCheckReport gradcheck(const ActivationSpec & spec, std::size_t points, double step,
                          std::uint64_t seed);

}  // namespace metaformer

#endif  // METAFORMER__ACTIVATIONS_HPP_
