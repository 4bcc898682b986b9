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

#include "metaformer/checkpoint.hpp"

#include <fstream>
#include <map>

#include "metaformer/tensor_io.hpp"

namespace metaformer
{

namespace
{

BuildOptions skeleton_options(BuildOptions options)
{
  options.init = InitMode::ZeroWeights;
  return options;
}

}  // namespace

void save_checkpoint(const Model & model, std::ostream & os)
{
  std::uint32_t count = 0;
  visit_parameters(model, [&count](const std::string &, const Tensor &, ParamKind) { ++count; });

  le::write_bytes(os, std::string_view(kCheckpointMagic, 4));
  le::write_u32(os, kCheckpointVersion);
  le::write_u32(os, count);
  visit_parameters(model, [&os](const std::string & name, const Tensor & t, ParamKind) {
    le::write_u32(os, static_cast<std::uint32_t>(name.size()));
    le::write_bytes(os, name);
    le::write_u32(os, static_cast<std::uint32_t>(t.rank()));
    for (std::size_t d : t.shape()) le::write_u32(os, static_cast<std::uint32_t>(d));
    le::write_f32(os, t.data());
  });
  if (!os) throw IoError("failed writing checkpoint stream");
}

void save_checkpoint(const Model & model, const std::filesystem::path & path)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  save_checkpoint(model, os);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

std::vector<std::pair<std::string, Tensor>> read_checkpoint_entries(std::istream & is)
{
  const std::string magic = le::read_bytes(is, 4, "checkpoint magic");
  if (magic != std::string_view(kCheckpointMagic, 4)) {
    throw FormatError("not an MFW1 checkpoint (bad magic)");
  }
  const std::uint32_t version = le::read_u32(is, "checkpoint version");
  if (version != kCheckpointVersion) {
    throw FormatError("unsupported checkpoint version " + std::to_string(version));
  }
  const std::uint32_t count = le::read_u32(is, "entry count");

  std::vector<std::pair<std::string, Tensor>> entries;
  for (std::uint32_t i = 0; i < count; ++i) {
    const std::uint32_t name_len = le::read_u32(is, "entry name length");
    if (name_len == 0 || name_len > 4096) {
      throw FormatError("entry " + std::to_string(i) + " has invalid name length");
    }
    std::string name = le::read_bytes(is, name_len, "entry name");
    const std::uint32_t rank = le::read_u32(is, "entry rank");
    if (rank > 8) throw FormatError("tensor '" + name + "' has unsupported rank");
    Shape shape(rank);
    std::uint64_t numel = 1;
    for (auto & d : shape) {
      d = le::read_u32(is, "entry dims");
      if (d == 0) throw FormatError("tensor '" + name + "' has a zero dimension");
      numel *= d;
      if (numel > (std::uint64_t{1} << 32)) {
        throw FormatError("tensor '" + name + "' is implausibly large");
      }
    }
    Tensor t(shape);
    le::read_f32(is, t.data(), "entry payload");
    entries.emplace_back(std::move(name), std::move(t));
  }
  if (is.peek() != std::char_traits<char>::eof()) {
    throw FormatError("trailing bytes after the last checkpoint entry");
  }
  return entries;
}

std::vector<std::pair<std::string, Shape>> checkpoint_manifest(const ModelConfig & config,
                                                                const BuildOptions & options)
{
  const Model skeleton = build_model(config, skeleton_options(options));
  std::vector<std::pair<std::string, Shape>> manifest;
  visit_parameters(skeleton, [&manifest](const std::string & name, const Tensor & t, ParamKind) {
    manifest.emplace_back(name, t.shape());
  });
  return manifest;
}

Model load_checkpoint(const ModelConfig & config, std::istream & is, const BuildOptions & options)
{
  auto entries = read_checkpoint_entries(is);
  std::map<std::string, Tensor> stored;
  for (auto & [name, t] : entries) {
    if (!stored.emplace(name, std::move(t)).second) {
      throw FormatError("duplicate checkpoint entry '" + name + "'");
    }
  }

  Model model = build_model(config, skeleton_options(options));
  std::size_t consumed = 0;
  visit_parameters(model, [&](const std::string & name, Tensor & t, ParamKind) {
    auto it = stored.find(name);
    if (it == stored.end()) throw MissingTensorError(name);
    if (it->second.shape() != t.shape()) {
      throw ShapeMismatchError(name, shape_string(t.shape()), shape_string(it->second.shape()));
    }
    t = std::move(it->second);
    ++consumed;
  });
  if (consumed != stored.size()) {
    std::map<std::string, bool> expected;
    visit_parameters(model, [&expected](const std::string & name, const Tensor &, ParamKind) {
      expected[name] = true;
    });
    for (const auto & [name, t] : stored) {
      if (!expected.count(name)) throw UnexpectedTensorError(name);
    }
  }
  return model;
}

Model load_checkpoint(const ModelConfig & config, const std::filesystem::path & path,
                      const BuildOptions & options)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "'");
  try {
    return load_checkpoint(config, is, options);
  } catch (const FormatError & e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace metaformer
