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

#include "metaformer/selftest.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <sstream>

#include "metaformer/analysis.hpp"
#include "metaformer/checkpoint.hpp"

namespace metaformer
{

namespace
{

std::string fmt(const char * format, auto... args)
{
  char buf[256];
  std::snprintf(buf, sizeof(buf), format, args...);
  return buf;
}

bool within(double value, double target, double abs_tol) { return std::abs(value - target) <= abs_tol; }

bool within_rel(double value, double target, double rel_tol)
{
  return std::abs(value - target) <= rel_tol * std::abs(target);
}

}  // namespace

std::string CheckResult::line() const
{
  return std::string(passed ? "PASS " : "FAIL ") + name + ": " + detail;
}

std::vector<CheckResult> check_moments(const SelftestOptions & options)
{
  std::vector<CheckResult> out;
  const auto sq = squared_relu_moments(options.moment_samples, options.seed);
  out.push_back({"squared-relu mean", within(sq.mean, 0.5, 0.005),
                 fmt("%.5f (+-%.5f), expected 0.5 +- 0.005", sq.mean, sq.mean_stderr)});
  out.push_back({"squared-relu variance", within(sq.variance, 1.25, 0.02),
                 fmt("%.5f (+-%.5f), expected 1.25 +- 0.02", sq.variance, sq.variance_stderr)});
  const auto star = activation_output_moments(
    options.moment_samples, options.seed, ActivationSpec::star_relu(StarVariant::FrozenScaleBias));
  out.push_back({"starrelu mean", within(star.mean, 0.0, 0.01),
                 fmt("%.5f (+-%.5f), expected 0 +- 0.01", star.mean, star.mean_stderr)});
  out.push_back({"starrelu variance", within(star.variance, 1.0, 0.01),
                 fmt("%.5f (+-%.5f), expected 1 +- 0.01", star.variance, star.variance_stderr)});
  return out;
}

std::vector<CheckResult> check_gradients(const SelftestOptions & options)
{
  std::vector<CheckResult> out;
  for (const auto & name : activation_names()) {
    const auto report = gradcheck(parse_activation(name), options.gradcheck_points, 1e-3,
                                  options.seed);
    out.push_back({"gradcheck " + name, report.max_relative_error < kGradcheckTolerance,
                   fmt("max relative error %.3e at x=%.4f over %zu points",
                       report.max_relative_error, report.worst_x, report.points)});
  }
  return out;
}

std::vector<CheckResult> check_round_trip(const SelftestOptions & options)
{
  std::vector<CheckResult> out;
  for (const char * name : {"CAFormer-S18", "RandFormer-S12"}) {
    BuildOptions build;
    build.seed = options.seed;
    const ModelConfig config = named_config(name);
    const Model model = build_model(config, build);
    std::stringstream stream;
    save_checkpoint(model, stream);
    const Model loaded = load_checkpoint(config, stream, build);

    std::vector<const Tensor *> a, b;
    visit_parameters(model, [&a](const std::string &, const Tensor & t, ParamKind) { a.push_back(&t); });
    visit_parameters(loaded, [&b](const std::string &, const Tensor & t, ParamKind) { b.push_back(&t); });
    bool same = a.size() == b.size();
    for (std::size_t i = 0; same && i < a.size(); ++i) {
      same = a[i]->shape() == b[i]->shape() &&
             std::memcmp(a[i]->raw(), b[i]->raw(), a[i]->size() * sizeof(float)) == 0;
    }
    out.push_back({std::string("round-trip ") + name, same,
                   fmt("%zu tensors, %s", a.size(), same ? "bit-identical" : "differ")});
  }
  return out;
}

std::vector<CheckResult> check_size_tables()
{
  std::vector<CheckResult> out;
  for (const auto & ref : reference_sizes()) {
    BuildOptions build;
    build.init = InitMode::ZeroWeights;
    const Model model = build_model(named_config(ref.name), build);
    const CostReport r224 = cost_report(model, 224);
    const double params_m = static_cast<double>(r224.params) / 1e6;
    const double macs_g = static_cast<double>(r224.macs) / 1e9;
    bool ok = within_rel(params_m, ref.params_m, kParamTolerance) &&
              within_rel(macs_g, ref.macs_g_224, kMacTolerance);
    std::string detail =
      fmt("params %.3fM vs %.1fM, MACs %.3fG vs %.1fG", params_m, ref.params_m, macs_g, ref.macs_g_224);
    if (ref.frozen_m) {
      const double frozen_m = static_cast<double>(r224.frozen_params) / 1e6;
      ok = ok && within(std::round(frozen_m * 10) / 10, *ref.frozen_m, 1e-9);
      detail += fmt(", frozen %.3fM vs %.1fM", frozen_m, *ref.frozen_m);
    }
    if (ref.macs_g_384) {
      BuildOptions b384 = build;
      b384.resolution = 384;
      const double macs384 =
        static_cast<double>(count_macs(build_model(named_config(ref.name), b384), 384)) / 1e9;
      ok = ok && within_rel(macs384, *ref.macs_g_384, kMacTolerance);
      detail += fmt(", MACs@384 %.3fG vs %.1fG", macs384, *ref.macs_g_384);
    }
    out.push_back({"size " + ref.name, ok, detail});
  }
  return out;
}

std::vector<CheckResult> run_selftest(const SelftestOptions & options)
{
  std::vector<CheckResult> all;
  for (auto && group : {check_moments(options), check_gradients(options),
                        check_round_trip(options), check_size_tables()}) {
    all.insert(all.end(), group.begin(), group.end());
  }
  return all;
}

}  // namespace metaformer
