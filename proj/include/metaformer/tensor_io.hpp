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

#ifndef METAFORMER__TENSOR_IO_HPP_
#define METAFORMER__TENSOR_IO_HPP_

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "metaformer/tensor.hpp"

namespace metaformer
{

// Little-endian primitives shared by the MFT1 tensor files and MFW1 checkpoints.
namespace le
{
void write_u32(std::ostream & os, std::uint32_t v);
void write_f32(std::ostream & os, std::span<const float> values);
std::uint32_t read_u32(std::istream & is, const char * what);
void read_f32(std::istream & is, std::span<float> values, const char * what);
void write_bytes(std::ostream & os, std::string_view bytes);
std::string read_bytes(std::istream & is, std::size_t n, const char * what);
}  // namespace le

/// MFT1: magic "MFT1", u32 rank, rank x u32 dims, f32 payload (row-major).
void write_tensor(std::ostream & os, const Tensor & t);
Tensor read_tensor(std::istream & is);

void write_tensor_file(const std::filesystem::path & path, const Tensor & t);
Tensor read_tensor_file(const std::filesystem::path & path);

}  // namespace metaformer

#endif  // METAFORMER__TENSOR_IO_HPP_
