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

#ifndef METAFORMER__CHECKPOINT_HPP_
#define METAFORMER__CHECKPOINT_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "metaformer/models.hpp"

namespace metaformer
{

inline constexpr char kCheckpointMagic[4] = {'M', 'F', 'W', '1'};
inline constexpr std::uint32_t kCheckpointVersion = 1;

/// Layout: "MFW1", u32 version, u32 count, then per entry u32 name length,
/// UTF-8 name, u32 rank, rank x u32 dims, f32 payload. All little-endian.
/// Entries appear in canonical visitation order; frozen tensors carry the
/// "frozen." prefix.
void save_checkpoint(const Model & model, std::ostream & os);
void save_checkpoint(const Model & model, const std::filesystem::path & path);

/// Raw decoded entries, in file order. Throws FormatError on malformed input.
std::vector<std::pair<std::string, Tensor>> read_checkpoint_entries(std::istream & is);

/// Builds the skeleton for `config` and fills it from the stream. Every
/// expected tensor must be present with the expected shape and nothing else
/// may be stored; the whole stream is decoded before the model is assembled.
Model load_checkpoint(const ModelConfig & config, std::istream & is,
                      const BuildOptions & options = {});
Model load_checkpoint(const ModelConfig & config, const std::filesystem::path & path,
                      const BuildOptions & options = {});

/// Name -> shape manifest the loader expects for `config`.
std::vector<std::pair<std::string, Shape>> checkpoint_manifest(const ModelConfig & config,
                                                                const BuildOptions & options = {});

}  // namespace metaformer

#endif  // METAFORMER__CHECKPOINT_HPP_
