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

#ifndef METAFORMER__ANALYSIS_HPP_
#define METAFORMER__ANALYSIS_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "metaformer/models.hpp"

namespace metaformer
{

ParamCount count_params(const Model & model);

/// Cost of one component for a single sample.
struct ComponentCost
{
  std::string name;
  std::uint64_t params = 0;
  std::uint64_t frozen_params = 0;
  std::uint64_t macs = 0;
  /// Scalar activation applications (multiply by flops_per_unit for FLOPs).
  std::uint64_t activation_units = 0;
};

struct CostReport
{
  std::string model;
  std::size_t resolution = 0;
  ActivationSpec activation;
  std::uint64_t params = 0;
  std::uint64_t frozen_params = 0;
  std::uint64_t macs = 0;
  std::uint64_t activation_flops = 0;

  ComponentCost stem;
  std::vector<ComponentCost> downsamples;  ///< one per stage after the first
  std::vector<ComponentCost> stages;       ///< blocks only
  ComponentCost head;

  std::string to_text() const;
};

/// Convolutions (Cout * Cin/groups * k^2 * H' * W'), linear layers
/// (in * out per position), attention products (2 N^2 C) and random mixing
/// (N^2 C). Norms, activations, softmax, pooling and elementwise work are free.
/// `activation` overrides the model's activation for the FLOP column.
CostReport cost_report(const Model & model, std::size_t resolution,
                       const std::optional<ActivationSpec> & activation = std::nullopt);

std::uint64_t count_macs(const Model & model, std::size_t resolution);
std::uint64_t count_activation_units(const Model & model, std::size_t resolution);
std::uint64_t count_activation_flops(const Model & model, std::size_t resolution,
                                     const ActivationSpec & activation);

struct SizeRow
{
  std::string name;
  std::uint64_t params = 0;
  std::uint64_t frozen_params = 0;
  std::uint64_t macs = 0;
  std::size_t resolution = 0;
};

struct SizeTable
{
  std::vector<SizeRow> rows;

  std::string to_text() const;
  /// Header line then rows: name,params,frozen_params,macs,resolution
  std::string to_csv() const;
};

inline constexpr const char * kCsvHeader = "name,params,frozen_params,macs,resolution";
std::string csv_row(const SizeRow & row);

/// Builds each named model as a weightless skeleton at `resolution` and counts it.
SizeTable emit_size_table(const std::vector<std::string> & names, std::size_t resolution);

/// Published size figures for the named models (params in millions, MACs in G).
struct ReferenceSize
{
  std::string name;
  double params_m;
  std::optional<double> frozen_m;
  double macs_g_224;
  std::optional<double> macs_g_384;
  /// Decimal places the params figure was published with (1 or 0).
  int params_decimals;
};

const std::vector<ReferenceSize> & reference_sizes();
const ReferenceSize & reference_size(const std::string & name);

}  // namespace metaformer

#endif  // METAFORMER__ANALYSIS_HPP_
