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

#ifndef METAFORMER__ERRORS_HPP_
#define METAFORMER__ERRORS_HPP_

#include <stdexcept>
#include <string>
#include <utility>

namespace metaformer
{

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Shape or geometry that an operation cannot accept.
class DimensionError : public Error
{
public:
  using Error::Error;
};

/// Invalid combination of architectural options.
class ConfigError : public Error
{
public:
  using Error::Error;
};

/// Unknown model name or other failed lookup.
class LookupError : public Error
{
public:
  using Error::Error;
};

/// Malformed or truncated MFT1/MFW1 byte stream.
class FormatError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

/// Checkpoint/manifest disagreement about one named tensor.
class TensorEntryError : public Error
{
public:
  TensorEntryError(std::string tensor, const std::string & what)
  : Error(what), tensor_(std::move(tensor))
  {
  }
  const std::string & tensor_name() const noexcept { return tensor_; }

private:
  std::string tensor_;
};

class MissingTensorError : public TensorEntryError
{
public:
  explicit MissingTensorError(const std::string & tensor)
  : TensorEntryError(tensor, "checkpoint is missing tensor '" + tensor + "'")
  {
  }
};

class UnexpectedTensorError : public TensorEntryError
{
public:
  explicit UnexpectedTensorError(const std::string & tensor)
  : TensorEntryError(tensor, "checkpoint has unexpected tensor '" + tensor + "'")
  {
  }
};

class ShapeMismatchError : public TensorEntryError
{
public:
  ShapeMismatchError(const std::string & tensor, const std::string & expected,
                     const std::string & actual)
  : TensorEntryError(
      tensor, "shape mismatch for tensor '" + tensor + "': expected " + expected + ", got " + actual)
  {
  }
};

}  // namespace metaformer

#endif  // METAFORMER__ERRORS_HPP_
