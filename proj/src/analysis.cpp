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

#include "metaformer/analysis.hpp"

#include <algorithm>
#include <iomanip>
#include <sstream>

namespace metaformer
{

namespace
{

template <typename Component>
void add_params(const Component & c, const std::string & name, ComponentCost & cost)
{
  visit_parameters(c, name, [&cost](const std::string &, const Tensor & t, ParamKind kind) {
    (is_frozen(kind) ? cost.frozen_params : cost.params) += t.size();
  });
}

std::uint64_t conv_macs(const ConvLayer & conv, std::size_t out_h, std::size_t out_w)
{
  return static_cast<std::uint64_t>(conv.weight.size()) * out_h * out_w;
}

std::uint64_t linear_macs(const LinearLayer & l, std::uint64_t positions)
{
  return static_cast<std::uint64_t>(l.weight.size()) * positions;
}

// Random mixing needs the channel count and is handled by the caller.
std::uint64_t mixer_macs(const MixerParams & mixer, std::uint64_t tokens, std::size_t side)
{
  return std::visit(
    [&](const auto & p) -> std::uint64_t {
      using P = std::decay_t<decltype(p)>;
      if constexpr (std::is_same_v<P, SepConvParams>) {
        return linear_macs(p.pw1, tokens) + conv_macs(p.dw, side, side) +
               linear_macs(p.pw2, tokens);
      } else if constexpr (std::is_same_v<P, AttentionParams>) {
        const std::uint64_t c = p.q.in_features();
        return linear_macs(p.q, tokens) + linear_macs(p.k, tokens) + linear_macs(p.v, tokens) +
               linear_macs(p.o, tokens) + 2 * tokens * tokens * c;
      } else {
        return 0;
      }
    },
    mixer);
}

}  // namespace

ParamCount count_params(const Model & model)
{
  ParamCount count;
  visit_parameters(model, [&count](const std::string &, const Tensor & t, ParamKind kind) {
    (is_frozen(kind) ? count.frozen : count.learnable) += t.size();
  });
  return count;
}

CostReport cost_report(const Model & model, std::size_t resolution,
                       const std::optional<ActivationSpec> & activation)
{
  check_input(model, resolution, resolution);
  CostReport r;
  r.model = model.config.name;
  r.resolution = resolution;
  r.activation = activation.value_or(model.config.activation);

  const auto sides = model.stage_sizes(resolution);

  r.stem.name = "stem";
  add_params(*model.stem, "stem", r.stem);
  r.stem.macs = conv_macs(*model.stem, sides[0], sides[0]);

  for (std::size_t i = 0; i < model.stages.size(); ++i) {
    const Stage & stage = model.stages[i];
    const std::size_t side = sides[i];
    const std::uint64_t tokens = static_cast<std::uint64_t>(side) * side;
    if (stage.downsample) {
      ComponentCost ds;
      ds.name = "downsample" + std::to_string(i);
      add_params(*stage.downsample, ds.name, ds);
      ds.macs = conv_macs(*stage.downsample, side, side);
      r.downsamples.push_back(ds);
    }
    ComponentCost sc;
    sc.name = "stage" + std::to_string(i);
    for (std::size_t j = 0; j < stage.blocks.size(); ++j) {
      const BlockParams & b = stage.blocks[j];
      add_params(b, sc.name + ".block" + std::to_string(j), sc);
      sc.macs += linear_macs(b.mlp_w1, tokens) + linear_macs(b.mlp_w2, tokens);
      sc.activation_units += tokens * b.mlp_w1.out_features();
      sc.macs += mixer_macs(b.mixer, tokens, side);
      if (const auto * rm = std::get_if<RandomMixingMatrix>(&b.mixer)) {
        sc.macs += static_cast<std::uint64_t>(rm->weights.size()) * b.norm1.weight.size();
      }
      if (const auto * sep = std::get_if<SepConvParams>(&b.mixer)) {
        sc.activation_units += tokens * sep->pw1.out_features();
      }
    }
    r.stages.push_back(sc);
  }

  const HeadParams & head = *model.head;
  r.head.name = "head";
  add_params(head, "head", r.head);
  r.head.macs = linear_macs(head.fc1, 1) + (head.fc2 ? linear_macs(*head.fc2, 1) : 0);
  if (head.act) r.head.activation_units = head.fc1.out_features();

  std::uint64_t units = 0;
  auto accumulate = [&](const ComponentCost & c) {
    r.params += c.params;
    r.frozen_params += c.frozen_params;
    r.macs += c.macs;
    units += c.activation_units;
  };
  accumulate(r.stem);
  for (const auto & c : r.downsamples) accumulate(c);
  for (const auto & c : r.stages) accumulate(c);
  accumulate(r.head);
  r.activation_flops = units * flops_per_unit(r.activation);
  return r;
}

std::uint64_t count_macs(const Model & model, std::size_t resolution)
{
  return cost_report(model, resolution).macs;
}

std::uint64_t count_activation_units(const Model & model, std::size_t resolution)
{
  const CostReport r = cost_report(model, resolution, ActivationSpec::relu());
  return r.activation_flops;  // ReLU costs one FLOP per unit
}

std::uint64_t count_activation_flops(const Model & model, std::size_t resolution,
                                     const ActivationSpec & activation)
{
  activation.validate();
  return count_activation_units(model, resolution) * flops_per_unit(activation);
}

std::string CostReport::to_text() const
{
  std::ostringstream os;
  auto millions = [](std::uint64_t v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << static_cast<double>(v) / 1e6 << "M";
    return s.str();
  };
  auto giga = [](std::uint64_t v) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(3) << static_cast<double>(v) / 1e9 << "G";
    return s.str();
  };
  os << "model:            " << model << "\n"
     << "resolution:       " << resolution << "\n"
     << "params:           " << params << " (" << millions(params) << ")\n"
     << "frozen params:    " << frozen_params << " (" << millions(frozen_params) << ")\n"
     << "MACs:             " << macs << " (" << giga(macs) << ")\n"
     << "activation:       " << to_string(activation) << " (" << flops_per_unit(activation)
     << " FLOPs/unit)\n"
     << "activation FLOPs: " << activation_flops << "\n"
     << "breakdown:\n";
  auto line = [&os](const ComponentCost & c) {
    os << "  " << std::left << std::setw(12) << c.name << std::right << std::setw(12) << c.params
       << " params" << std::setw(10) << c.frozen_params << " frozen" << std::setw(14) << c.macs
       << " MACs\n";
  };
  line(stem);
  for (std::size_t i = 0; i < stages.size(); ++i) {
    if (i > 0 && i - 1 < downsamples.size()) line(downsamples[i - 1]);
    line(stages[i]);
  }
  line(head);
  return os.str();
}

std::string csv_row(const SizeRow & row)
{
  std::ostringstream os;
  os << row.name << ',' << row.params << ',' << row.frozen_params << ',' << row.macs << ','
     << row.resolution;
  return os.str();
}

std::string SizeTable::to_csv() const
{
  std::ostringstream os;
  os << kCsvHeader << '\n';
  for (const auto & row : rows) os << csv_row(row) << '\n';
  return os.str();
}

std::string SizeTable::to_text() const
{
  std::ostringstream os;
  std::size_t width = 5;
  for (const auto & row : rows) width = std::max(width, row.name.size());
  os << std::left << std::setw(static_cast<int>(width)) << "Model" << std::right << std::setw(12)
     << "Params (M)" << std::setw(12) << "Frozen (M)" << std::setw(11) << "MACs (G)" << std::setw(6)
     << "Res" << '\n';
  os << std::fixed;
  for (const auto & row : rows) {
    os << std::left << std::setw(static_cast<int>(width)) << row.name << std::right
       << std::setprecision(2) << std::setw(12) << static_cast<double>(row.params) / 1e6
       << std::setw(12) << static_cast<double>(row.frozen_params) / 1e6 << std::setw(11)
       << static_cast<double>(row.macs) / 1e9 << std::setw(6) << row.resolution << '\n';
  }
  return os.str();
}

SizeTable emit_size_table(const std::vector<std::string> & names, std::size_t resolution)
{
  SizeTable table;
  for (const auto & name : names) {
    BuildOptions opts;
    opts.init = InitMode::ZeroWeights;
    opts.resolution = resolution;
    const Model model = build_model(named_config(name), opts);
    const CostReport r = cost_report(model, resolution);
    table.rows.push_back({name, r.params, r.frozen_params, r.macs, resolution});
  }
  return table;
}

const std::vector<ReferenceSize> & reference_sizes()
{
  static const std::vector<ReferenceSize> refs = [] {
    std::vector<ReferenceSize> v;
    const struct
    {
      const char * size;
      double params, frozen, macs_id, macs_rand;
    } basic[] = {
      {"S12", 11.9, 0.2, 1.8, 1.9},  {"S24", 21.3, 0.5, 3.4, 3.5},   {"S36", 30.8, 0.7, 5.0, 5.2},
      {"M36", 56.1, 0.7, 8.8, 9.0},  {"M48", 73.3, 0.9, 11.5, 11.9},
    };
    for (const auto & b : basic) {
      v.push_back({std::string("IdentityFormer-") + b.size, b.params, std::nullopt, b.macs_id,
                   std::nullopt, 1});
      v.push_back({std::string("RandFormer-") + b.size, b.params, b.frozen, b.macs_rand,
                   std::nullopt, 1});
      v.push_back({std::string("PoolFormerV2-") + b.size, b.params, std::nullopt, b.macs_id,
                   std::nullopt, 1});
    }
    const struct
    {
      const char * name;
      double params, macs224, macs384;
    } conv[] = {
      {"ConvFormer-S18", 27, 3.9, 11.6},  {"CAFormer-S18", 26, 4.1, 13.4},
      {"ConvFormer-S36", 40, 7.6, 22.4},  {"CAFormer-S36", 39, 8.0, 26.0},
      {"ConvFormer-M36", 57, 12.8, 37.7}, {"CAFormer-M36", 56, 13.2, 42.0},
      {"ConvFormer-B36", 100, 22.6, 66.5}, {"CAFormer-B36", 99, 23.2, 72.2},
    };
    for (const auto & c : conv) {
      v.push_back({c.name, c.params, std::nullopt, c.macs224, c.macs384, 0});
    }
    return v;
  }();
  return refs;
}

const ReferenceSize & reference_size(const std::string & name)
{
  for (const auto & r : reference_sizes()) {
    if (r.name == name) return r;
  }
  throw LookupError("no published size figures for '" + name + "'");
}

}  // namespace metaformer
