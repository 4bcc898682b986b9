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

// Saves a checkpoint and an input in-process, runs `metaformer forward` on
// them through a JSON config, and compares the written logits bit for bit.

#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "metaformer/checkpoint.hpp"
#include "metaformer/random.hpp"
#include "metaformer/tensor_io.hpp"

namespace mf = metaformer;

int main(int argc, char ** argv)
{
  if (argc != 3) {
    std::cerr << "usage: test_checkpoint_cli CLI WORKDIR\n";
    return 2;
  }
  const std::string cli = argv[1];
  const std::filesystem::path dir = argv[2];
  std::filesystem::create_directories(dir);

  const std::string json = R"({
    "name": "tiny-caformer",
    "channels": [8, 16, 32, 64],
    "depths": [1, 1, 2, 1],
    "mixers": ["sepconv", "sepconv", "attention", "attention"],
    "head": "mlp",
    "num_classes": 10,
    "default_resolution": 64
  })";
  std::ofstream(dir / "config.json") << json;

  const mf::ModelConfig config = mf::parse_model_config_json(json);
  mf::BuildOptions opts;
  opts.seed = 11;
  const mf::Model model = mf::build_model(config, opts);
  mf::save_checkpoint(model, dir / "weights.mfw");

  mf::Tensor images({2, 3, 64, 64});
  mf::CounterRng rng(5);
  for (float & v : images.data()) v = static_cast<float>(rng.normal());
  mf::write_tensor_file(dir / "input.mft", images);

  const std::string cmd = "\"" + cli + "\" forward --config \"" + (dir / "config.json").string() +
                          "\" --weights \"" + (dir / "weights.mfw").string() + "\" --input \"" +
                          (dir / "input.mft").string() + "\" --output \"" +
                          (dir / "logits.mft").string() + "\" --topk 3";
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    std::cerr << "forward exited with " << rc << "\n";
    return 1;
  }

  const mf::Tensor expected = mf::forward(model, images);
  const mf::Tensor actual = mf::read_tensor_file(dir / "logits.mft");
  if (expected.shape() != actual.shape() ||
      std::memcmp(expected.raw(), actual.raw(), expected.size() * sizeof(float)) != 0) {
    std::cerr << "CLI logits differ from in-process forward\n";
    return 1;
  }
  std::cout << "CLI forward from checkpoint matches in-process logits\n";
  return 0;
}
