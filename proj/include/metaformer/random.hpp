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

#ifndef METAFORMER__RANDOM_HPP_
#define METAFORMER__RANDOM_HPP_

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string_view>

namespace metaformer
{

/// SplitMix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

/// FNV-1a, used to derive per-tensor seeds from parameter names.
constexpr std::uint64_t fnv1a(std::string_view s) noexcept
{
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001B3ULL;
  }
  return h;
}

constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) noexcept
{
  return mix64(seed ^ mix64(fnv1a(name)));
}

/// Counter-based generator: the i-th output (i = 0, 1, ...) is
/// mix64(key + (i + 1) * 0x9E3779B97F4A7C15). Identical on every platform.
class CounterRng
{
public:
  explicit constexpr CounterRng(std::uint64_t key) noexcept : key_(key) {}

  constexpr std::uint64_t next_u64() noexcept
  {
    ++counter_;
    return mix64(key_ + counter_ * 0x9E3779B97F4A7C15ULL);
  }

  /// [0, 1) with 53 random bits.
  constexpr double uniform() noexcept
  {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  /// [0, 1) with 24 random bits, exactly representable as float.
  constexpr float uniform_float() noexcept
  {
    return static_cast<float>(next_u64() >> 40) * 0x1.0p-24f;
  }

  /// Standard normal via the Box-Muller transform; draws come in pairs.
  double normal() noexcept
  {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double theta = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(theta);
    has_spare_ = true;
    return r * std::cos(theta);
  }

  /// Normal(0, sigma) restricted to [-2 sigma, 2 sigma] by rejection.
  double truncated_normal(double sigma) noexcept
  {
    for (;;) {
      const double z = normal();
      if (std::abs(z) <= 2.0) return z * sigma;
    }
  }

  constexpr std::uint64_t key() const noexcept { return key_; }
  constexpr std::uint64_t counter() const noexcept { return counter_; }

private:
  std::uint64_t key_;
  std::uint64_t counter_ = 0;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace metaformer

#endif  // METAFORMER__RANDOM_HPP_
