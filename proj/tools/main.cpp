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

#include <algorithm>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "metaformer/analysis.hpp"
#include "metaformer/checkpoint.hpp"
#include "metaformer/random.hpp"
#include "metaformer/selftest.hpp"
#include "metaformer/tensor_io.hpp"

namespace mf = metaformer;

namespace
{

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitUsage = 2;

struct ModelSource
{
  std::string name;
  std::string config_path;

  void add_to(CLI::App * cmd)
  {
    auto * m = cmd->add_option("--model", name, "Named configuration");
    auto * c = cmd->add_option("--config", config_path, "JSON model configuration file");
    m->excludes(c);
  }

  mf::ModelConfig resolve() const
  {
    if (!config_path.empty()) {
      std::ifstream is(config_path);
      if (!is) throw mf::IoError("cannot open '" + config_path + "'");
      std::stringstream text;
      text << is.rdbuf();
      return mf::parse_model_config_json(text.str());
    }
    if (name.empty()) throw mf::ConfigError("one of --model or --config is required");
    return mf::named_config(name);
  }
};

std::string join(const auto & items, const char * sep, auto && fmt)
{
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += fmt(items[i]);
  }
  return out;
}

int run_describe(const ModelSource & src)
{
  const mf::ModelConfig c = src.resolve();
  c.validate();
  auto num = [](std::size_t v) { return std::to_string(v); };
  std::cout << "model: " << c.name << "\n"
            << "stages: " << c.num_stages() << "\n"
            << "channels: C=(" << join(c.channels, ",", num) << ")\n"
            << "depths: L=(" << join(c.depths, ",", num) << ")\n"
            << "mixers: "
            << join(c.mixers, ", ", [](const mf::MixerSpec & m) { return mf::short_name(m.kind); })
            << "\n"
            << "scaling: ";
  for (std::size_t i = 0; i < c.num_stages(); ++i) {
    std::cout << (i ? ", " : "") << mf::to_string(c.stage_scaling(i).kind);
  }
  std::cout << "\n"
            << "activation: " << mf::to_string(c.activation) << "\n"
            << "head: " << mf::to_string(c.head) << "\n"
            << "classes: " << c.num_classes << "\n"
            << "default resolution: " << c.default_resolution << "\n";
  return kExitOk;
}

mf::Model build_at(const mf::ModelConfig & config, std::size_t resolution, mf::InitMode init,
                   std::uint64_t seed)
{
  mf::BuildOptions opts;
  opts.init = init;
  opts.seed = seed;
  opts.resolution = resolution;
  return mf::build_model(config, opts);
}

int run_count(const ModelSource & src, std::optional<std::size_t> resolution,
              const std::string & activation, bool csv)
{
  const mf::ModelConfig config = src.resolve();
  const std::size_t res = resolution.value_or(config.default_resolution);
  std::optional<mf::ActivationSpec> act;
  if (!activation.empty()) act = mf::parse_activation(activation);
  const mf::Model model = build_at(config, res, mf::InitMode::ZeroWeights, 0);
  const mf::CostReport report = mf::cost_report(model, res, act);
  if (csv) {
    std::cout << mf::kCsvHeader << "\n"
              << mf::csv_row({config.name, report.params, report.frozen_params, report.macs, res})
              << "\n";
  } else {
    std::cout << report.to_text();
  }
  return kExitOk;
}

struct ForwardArgs
{
  std::string input;
  std::optional<std::uint64_t> random_seed;
  std::string weights;
  std::optional<std::uint64_t> init_seed;
  bool zero_init = false;
  std::size_t topk = 5;
  std::size_t batch = 1;
  std::optional<std::size_t> resolution;
  std::string output = "logits.mft";
};

int run_forward(const ModelSource & src, const ForwardArgs & a)
{
  const mf::ModelConfig config = src.resolve();

  mf::Tensor images;
  if (!a.input.empty()) {
    images = mf::read_tensor_file(a.input);
    if (images.rank() != 4 || images.dim(1) != config.in_channels) {
      throw mf::DimensionError("input tensor must be [B, " + std::to_string(config.in_channels) +
                               ", H, W], got " + mf::shape_string(images.shape()));
    }
  } else {
    const std::size_t res = a.resolution.value_or(config.default_resolution);
    images = mf::Tensor({a.batch, config.in_channels, res, res});
    mf::CounterRng rng(*a.random_seed);
    for (float & v : images.data()) v = static_cast<float>(rng.normal());
  }

  mf::BuildOptions opts;
  opts.resolution = config.default_resolution;
  mf::Model model;
  if (!a.weights.empty()) {
    model = mf::load_checkpoint(config, std::filesystem::path(a.weights), opts);
  } else {
    opts.init = a.zero_init ? mf::InitMode::ZeroWeights : mf::InitMode::Random;
    opts.seed = a.init_seed.value_or(0);
    model = mf::build_model(config, opts);
  }

  const mf::Tensor logits = mf::forward(model, images);
  mf::write_tensor_file(a.output, logits);

  const std::size_t classes = logits.dim(1);
  const std::size_t k = std::min(a.topk, classes);
  for (std::size_t b = 0; b < logits.dim(0); ++b) {
    std::vector<std::size_t> idx(classes);
    std::iota(idx.begin(), idx.end(), 0);
    std::partial_sort(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(k), idx.end(),
                      [&](std::size_t x, std::size_t y) {
                        const float lx = logits(b, x), ly = logits(b, y);
                        return lx > ly || (lx == ly && x < y);
                      });
    std::cout << "sample " << b << ":";
    for (std::size_t i = 0; i < k; ++i) std::cout << " " << idx[i] << ":" << logits(b, idx[i]);
    std::cout << "\n";
  }
  std::cerr << "wrote " << mf::shape_string(logits.shape()) << " logits to " << a.output << "\n";
  return kExitOk;
}

int run_tables(const std::string & which, std::size_t resolution, bool csv)
{
  std::vector<std::string> names;
  if (which == "t3") {
    names = mf::basic_mixer_table_models();
  } else if (which == "t4") {
    names = mf::conv_attention_table_models();
  } else {
    throw mf::ConfigError("unknown table '" + which + "' (expected t3 or t4)");
  }
  const mf::SizeTable table = mf::emit_size_table(names, resolution);
  std::cout << (csv ? table.to_csv() : table.to_text());
  return kExitOk;
}

int run_star_stats(std::size_t samples, std::uint64_t seed)
{
  const auto sq = mf::squared_relu_moments(samples, seed);
  const auto star = mf::activation_output_moments(
    samples, seed, mf::ActivationSpec::star_relu(mf::StarVariant::FrozenScaleBias));
  std::cout << std::setprecision(6) << std::fixed << "samples: " << samples << "\n"
            << "seed: " << seed << "\n"
            << "squared-relu mean: " << sq.mean << " +- " << sq.mean_stderr << "\n"
            << "squared-relu variance: " << sq.variance << " +- " << sq.variance_stderr << "\n"
            << "input fourth moment: " << sq.input_fourth_moment << " +- "
            << sq.fourth_moment_stderr << "\n"
            << "starrelu mean: " << star.mean << " +- " << star.mean_stderr << "\n"
            << "starrelu variance: " << star.variance << " +- " << star.variance_stderr << "\n";
  return kExitOk;
}

int run_gradcheck(const std::string & activation, std::size_t points, double h, std::uint64_t seed)
{
  if (points < 100) throw mf::ConfigError("--points must be at least 100");
  if (!(h > 0.0)) throw mf::ConfigError("--h must be positive");
  const auto report = mf::gradcheck(mf::parse_activation(activation), points, h, seed);
  const bool pass = report.max_relative_error < mf::kGradcheckTolerance;
  std::cout << "activation: " << mf::to_string(report.spec) << "\n"
            << "points: " << report.points << "\n"
            << "step: " << report.step << "\n"
            << "max relative error: " << report.max_relative_error << " at x=" << report.worst_x
            << "\n"
            << (pass ? "PASS" : "FAIL") << "\n";
  return pass ? kExitOk : kExitInternal;
}

int run_selftest(std::size_t samples, std::uint64_t seed)
{
  mf::SelftestOptions opts;
  opts.moment_samples = samples;
  opts.seed = seed;
  std::size_t failed = 0;
  for (const auto & check : mf::run_selftest(opts)) {
    std::cout << check.line() << std::endl;
    failed += check.passed ? 0 : 1;
  }
  std::cerr << failed << " check(s) failed\n";
  return failed == 0 ? kExitOk : kExitInternal;
}

}  // namespace

int main(int argc, char ** argv)
{
  CLI::App app{"MetaFormer model toolkit"};
  app.require_subcommand(1);

  ModelSource describe_src, count_src, forward_src;

  auto * describe = app.add_subcommand("describe", "Print a model's stage layout");
  describe_src.add_to(describe);

  auto * count = app.add_subcommand("count", "Parameter, MAC and activation FLOP counts");
  count_src.add_to(count);
  std::optional<std::size_t> count_res;
  std::string count_act;
  bool count_csv = false;
  count->add_option("--resolution", count_res, "Input side length");
  count->add_option("--activation", count_act, "Activation used for the FLOP column");
  count->add_flag("--csv", count_csv, "Emit a CSV row");

  auto * forward = app.add_subcommand("forward", "Run inference and report top-k classes");
  forward_src.add_to(forward);
  ForwardArgs fwd;
  auto * in_file = forward->add_option("--input", fwd.input, "MFT1 image tensor [B,3,H,W]");
  auto * in_rand = forward->add_option("--random", fwd.random_seed, "Seed for N(0,1) input");
  in_file->excludes(in_rand);
  auto * w_file = forward->add_option("--weights", fwd.weights, "MFW1 checkpoint");
  auto * w_init = forward->add_option("--init", fwd.init_seed, "Seed for random initialization");
  auto * w_zero = forward->add_flag("--zero-init", fwd.zero_init, "All weights zero");
  w_file->excludes(w_init, w_zero);
  w_init->excludes(w_zero);
  forward->add_option("--topk", fwd.topk, "Classes to print per sample")->check(CLI::PositiveNumber);
  forward->add_option("--batch", fwd.batch, "Batch size for --random")->check(CLI::PositiveNumber);
  forward->add_option("--resolution", fwd.resolution, "Side length for --random");
  forward->add_option("--output", fwd.output, "Logits output file");

  auto * tables = app.add_subcommand("tables", "Size columns for a model table");
  std::string which;
  std::size_t table_res = 224;
  bool table_csv = false;
  tables->add_option("--which", which, "t3 or t4")->required();
  tables->add_option("--resolution", table_res, "Input side length");
  tables->add_flag("--csv", table_csv, "Emit CSV rows");

  auto * star = app.add_subcommand("star-stats", "Monte-Carlo activation moments");
  std::size_t samples = 10'000'000;
  std::uint64_t star_seed = 0;
  star->add_option("--samples", samples, "Number of N(0,1) samples")
    ->check(CLI::Range(mf::kMinMomentSamples, std::numeric_limits<std::size_t>::max()));
  star->add_option("--seed", star_seed, "Generator seed");

  auto * grad = app.add_subcommand("gradcheck", "Analytic vs finite-difference derivatives");
  std::string grad_act = "starrelu";
  std::size_t points = 1000;
  double h = 1e-3;
  std::uint64_t grad_seed = 0;
  grad->add_option("--activation", grad_act, "Activation name");
  grad->add_option("--points", points, "Sample points (>= 100)");
  grad->set_help_flag("--help", "Print this help message and exit");
  grad->add_option("--h", h, "Central-difference step");
  grad->add_option("--seed", grad_seed, "Generator seed");

  auto * self = app.add_subcommand("selftest", "Run the built-in verification checks");
  std::size_t self_samples = 10'000'000;
  std::uint64_t self_seed = 0;
  self->add_option("--samples", self_samples, "Monte-Carlo samples")
    ->check(CLI::Range(mf::kMinMomentSamples, std::numeric_limits<std::size_t>::max()));
  self->add_option("--seed", self_seed, "Generator seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp & e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp & e) {
    return app.exit(e);
  } catch (const CLI::ParseError & e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*describe) return run_describe(describe_src);
    if (*count) return run_count(count_src, count_res, count_act, count_csv);
    if (*forward) {
      if (fwd.input.empty() && !fwd.random_seed) {
        throw mf::ConfigError("forward needs --input FILE or --random SEED");
      }
      if (fwd.weights.empty() && !fwd.init_seed && !fwd.zero_init) {
        throw mf::ConfigError("forward needs --weights FILE, --init SEED or --zero-init");
      }
      return run_forward(forward_src, fwd);
    }
    if (*tables) return run_tables(which, table_res, table_csv);
    if (*star) return run_star_stats(samples, star_seed);
    if (*grad) return run_gradcheck(grad_act, points, h, grad_seed);
    if (*self) return run_selftest(self_samples, self_seed);
  } catch (const mf::Error & e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception & e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitUsage;
}
