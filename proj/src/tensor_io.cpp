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

#include "metaformer/tensor_io.hpp"

#include <array>
#include <bit>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>
#include <algorithm>

namespace metaformer
{
namespace le
{

void write_u32(std::ostream & os, std::uint32_t v)
{
  const std::array<char, 4> b = {
    static_cast<char>(v & 0xFFu), static_cast<char>((v >> 8) & 0xFFu),
    static_cast<char>((v >> 16) & 0xFFu), static_cast<char>((v >> 24) & 0xFFu)};
  os.write(b.data(), b.size());
}

void write_f32(std::ostream & os, std::span<const float> values)
{
  constexpr std::size_t kChunk = 1 << 14;
  std::vector<char> buf(4 * std::min(kChunk, values.size()));
  for (std::size_t done = 0; done < values.size();) {
    const std::size_t n = std::min(kChunk, values.size() - done);
    for (std::size_t i = 0; i < n; ++i) {
      const std::uint32_t u = std::bit_cast<std::uint32_t>(values[done + i]);
      buf[4 * i] = static_cast<char>(u & 0xFFu);
      buf[4 * i + 1] = static_cast<char>((u >> 8) & 0xFFu);
      buf[4 * i + 2] = static_cast<char>((u >> 16) & 0xFFu);
      buf[4 * i + 3] = static_cast<char>((u >> 24) & 0xFFu);
    }
    os.write(buf.data(), static_cast<std::streamsize>(4 * n));
    done += n;
  }
}

void write_bytes(std::ostream & os, std::string_view bytes)
{
  os.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

std::string read_bytes(std::istream & is, std::size_t n, const char * what)
{
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (static_cast<std::size_t>(is.gcount()) != n) {
    throw FormatError(std::string("truncated stream while reading ") + what);
  }
  return s;
}

std::uint32_t read_u32(std::istream & is, const char * what)
{
  unsigned char b[4];
  is.read(reinterpret_cast<char *>(b), 4);
  if (is.gcount() != 4) throw FormatError(std::string("truncated stream while reading ") + what);
  return static_cast<std::uint32_t>(b[0]) | (static_cast<std::uint32_t>(b[1]) << 8) |
         (static_cast<std::uint32_t>(b[2]) << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

void read_f32(std::istream & is, std::span<float> values, const char * what)
{
  constexpr std::size_t kChunk = 1 << 14;
  std::vector<unsigned char> buf(4 * std::min(kChunk, values.size()));
  std::size_t done = 0;
  while (done < values.size()) {
    const std::size_t n = std::min(kChunk, values.size() - done);
    is.read(reinterpret_cast<char *>(buf.data()), static_cast<std::streamsize>(4 * n));
    if (static_cast<std::size_t>(is.gcount()) != 4 * n) {
      throw FormatError(std::string("truncated payload while reading ") + what);
    }
    for (std::size_t i = 0; i < n; ++i) {
      const unsigned char * b = buf.data() + 4 * i;
      const std::uint32_t u = static_cast<std::uint32_t>(b[0]) |
                              (static_cast<std::uint32_t>(b[1]) << 8) |
                              (static_cast<std::uint32_t>(b[2]) << 16) |
                              (static_cast<std::uint32_t>(b[3]) << 24);
      values[done + i] = std::bit_cast<float>(u);
    }
    done += n;
  }
}

}  // namespace le

namespace
{
constexpr std::string_view kTensorMagic = "MFT1";
}

void write_tensor(std::ostream & os, const Tensor & t)
{
  le::write_bytes(os, kTensorMagic);
  le::write_u32(os, static_cast<std::uint32_t>(t.rank()));
  for (auto d : t.shape()) le::write_u32(os, static_cast<std::uint32_t>(d));
  le::write_f32(os, t.data());
  if (!os) throw IoError("failed writing tensor stream");
}

Tensor read_tensor(std::istream & is)
{
  if (le::read_bytes(is, 4, "tensor magic") != kTensorMagic) {
    throw FormatError("not an MFT1 tensor stream (bad magic)");
  }
  const std::uint32_t rank = le::read_u32(is, "tensor rank");
  if (rank > 8) throw FormatError("tensor rank " + std::to_string(rank) + " is not supported");
  Shape shape(rank);
  for (auto & d : shape) {
    d = le::read_u32(is, "tensor dims");
    if (d == 0) throw FormatError("tensor has a zero dimension");
  }
  Tensor t(shape);
  le::read_f32(is, t.data(), "tensor payload");
  return t;
}

void write_tensor_file(const std::filesystem::path & path, const Tensor & t)
{
  std::ofstream os(path, std::ios::binary);
  if (!os) throw IoError("cannot open '" + path.string() + "' for writing");
  write_tensor(os, t);
  os.flush();
  if (!os) throw IoError("failed writing '" + path.string() + "'");
}

Tensor read_tensor_file(const std::filesystem::path & path)
{
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return read_tensor(is);
  } catch (const FormatError & e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

}  // namespace metaformer
