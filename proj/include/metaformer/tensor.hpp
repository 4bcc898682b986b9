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

#ifndef METAFORMER__TENSOR_HPP_
#define METAFORMER__TENSOR_HPP_

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "metaformer/errors.hpp"

namespace metaformer
{

using Shape = std::vector<std::size_t>;

inline std::string shape_string(const Shape & shape)
{
  std::ostringstream os;
  os << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) os << 'x';
    os << shape[i];
  }
  os << ']';
  return os.str();
}

inline std::size_t shape_numel(const Shape & shape)
{
  return std::accumulate(shape.begin(), shape.end(), std::size_t{1}, std::multiplies<>{});
}

template <typename Scalar>
using RowMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

/// Dense row-major array. A default-constructed tensor is the rank-0 scalar 0.
template <typename Scalar>
class BasicTensor
{
public:
  using value_type = Scalar;

  BasicTensor() : data_(1, Scalar(0)) {}

  explicit BasicTensor(Shape shape, Scalar fill = Scalar(0))
  : shape_(std::move(shape))
  {
    check_dims();
    data_.assign(shape_numel(shape_), fill);
  }

  BasicTensor(Shape shape, std::vector<Scalar> data)
  : shape_(std::move(shape)), data_(std::move(data))
  {
    check_dims();
    if (data_.size() != shape_numel(shape_)) {
      throw DimensionError(
        "tensor data length " + std::to_string(data_.size()) + " does not match shape " +
        shape_string(shape_));
    }
  }

  BasicTensor(Shape shape, std::initializer_list<Scalar> values)
  : BasicTensor(std::move(shape), std::vector<Scalar>(values))
  {
  }

  static BasicTensor zeros(Shape shape) { return BasicTensor(std::move(shape)); }
  static BasicTensor ones(Shape shape) { return BasicTensor(std::move(shape), Scalar(1)); }

  const Shape & shape() const noexcept { return shape_; }
  std::size_t rank() const noexcept { return shape_.size(); }
  std::size_t dim(std::size_t axis) const
  {
    if (axis >= shape_.size()) {
      throw DimensionError(
        "axis " + std::to_string(axis) + " out of range for shape " + shape_string(shape_));
    }
    return shape_[axis];
  }
  std::size_t size() const noexcept { return data_.size(); }

  std::span<Scalar> data() noexcept { return data_; }
  std::span<const Scalar> data() const noexcept { return data_; }
  Scalar * raw() noexcept { return data_.data(); }
  const Scalar * raw() const noexcept { return data_.data(); }

  Scalar & operator[](std::size_t i) { return data_[i]; }
  const Scalar & operator[](std::size_t i) const { return data_[i]; }

  template <typename... Index>
  Scalar & operator()(Index... idx)
  {
    return data_[offset(idx...)];
  }
  template <typename... Index>
  const Scalar & operator()(Index... idx) const
  {
    return data_[offset(idx...)];
  }

  BasicTensor reshaped(Shape shape) const &
  {
    return BasicTensor(std::move(shape), data_);
  }
  BasicTensor reshaped(Shape shape) &&
  {
    return BasicTensor(std::move(shape), std::move(data_));
  }

  template <typename Other>
  BasicTensor<Other> cast() const
  {
    std::vector<Other> out(data_.begin(), data_.end());
    return BasicTensor<Other>(shape_, std::move(out));
  }

  friend bool operator==(const BasicTensor & a, const BasicTensor & b)
  {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

private:
  void check_dims() const
  {
    for (auto d : shape_) {
      if (d == 0) {
        throw DimensionError("tensor dimensions must be >= 1, got " + shape_string(shape_));
      }
    }
  }

  template <typename... Index>
  std::size_t offset(Index... idx) const
  {
    static_assert(sizeof...(Index) > 0);
    const std::size_t indices[] = {static_cast<std::size_t>(idx)...};
    if (sizeof...(Index) != shape_.size()) {
      throw DimensionError("index rank does not match shape " + shape_string(shape_));
    }
    std::size_t off = 0;
    for (std::size_t i = 0; i < sizeof...(Index); ++i) {
      off = off * shape_[i] + indices[i];
    }
    return off;
  }

  Shape shape_;
  std::vector<Scalar> data_;
};

using Tensor = BasicTensor<float>;
using TensorD = BasicTensor<double>;

namespace detail
{

template <typename Scalar>
using ConstMatrixMap = Eigen::Map<const RowMatrix<Scalar>>;
template <typename Scalar>
using MatrixMap = Eigen::Map<RowMatrix<Scalar>>;

template <typename Scalar>
ConstMatrixMap<Scalar> as_matrix(const Scalar * p, std::size_t rows, std::size_t cols)
{
  return ConstMatrixMap<Scalar>(
    p, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

template <typename Scalar>
MatrixMap<Scalar> as_matrix(Scalar * p, std::size_t rows, std::size_t cols)
{
  return MatrixMap<Scalar>(p, static_cast<Eigen::Index>(rows), static_cast<Eigen::Index>(cols));
}

// Copies into an Eigen-owned (aligned) matrix so that the product kernel takes
// the same code path for every sample regardless of where the slice lives.
template <typename Scalar>
RowMatrix<Scalar> aligned_copy(const Scalar * p, std::size_t rows, std::size_t cols)
{
  return as_matrix(p, rows, cols);
}

template <typename Scalar>
void require_same_shape(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b,
                        const char * op)
{
  if (a.shape() != b.shape()) {
    throw DimensionError(
      std::string(op) + ": shape mismatch " + shape_string(a.shape()) + " vs " +
      shape_string(b.shape()));
  }
}

inline std::size_t conv_out_size(std::size_t in, std::size_t k, std::size_t stride,
                                 std::size_t padding, const char * op)
{
  if (stride == 0) throw DimensionError(std::string(op) + ": stride must be >= 1");
  if (k == 0) throw DimensionError(std::string(op) + ": kernel must be >= 1");
  if (in + 2 * padding < k) {
    throw DimensionError(
      std::string(op) + ": kernel " + std::to_string(k) + " larger than padded input " +
      std::to_string(in + 2 * padding));
  }
  return (in + 2 * padding - k) / stride + 1;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Elementwise

template <typename Scalar, typename Fn>
BasicTensor<Scalar> map(const BasicTensor<Scalar> & x, Fn fn)
{
  BasicTensor<Scalar> out(x.shape());
  std::transform(x.data().begin(), x.data().end(), out.data().begin(), fn);
  return out;
}

template <typename Scalar>
BasicTensor<Scalar> operator+(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b)
{
  detail::require_same_shape(a, b, "add");
  BasicTensor<Scalar> out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

template <typename Scalar>
BasicTensor<Scalar> operator-(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b)
{
  detail::require_same_shape(a, b, "subtract");
  BasicTensor<Scalar> out(a.shape());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

template <typename Scalar>
BasicTensor<Scalar> operator*(Scalar s, const BasicTensor<Scalar> & x)
{
  return map(x, [s](Scalar v) { return s * v; });
}

/// x[..., c] * scale[c]
template <typename Scalar>
BasicTensor<Scalar> scale_lastdim(const BasicTensor<Scalar> & x, const BasicTensor<Scalar> & scale)
{
  const std::size_t c = x.rank() ? x.shape().back() : 1;
  if (scale.size() != c) {
    throw DimensionError(
      "scale_lastdim: scale " + shape_string(scale.shape()) + " does not match " +
      shape_string(x.shape()));
  }
  BasicTensor<Scalar> out(x.shape());
  for (std::size_t i = 0; i < x.size(); ++i) out[i] = x[i] * scale[i % c];
  return out;
}

template <typename Scalar>
bool all_finite(const BasicTensor<Scalar> & x)
{
  return std::all_of(
    x.data().begin(), x.data().end(), [](Scalar v) { return std::isfinite(v); });
}

template <typename Scalar>
double max_abs_diff(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b)
{
  detail::require_same_shape(a, b, "max_abs_diff");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    m = std::max(m, std::abs(static_cast<double>(a[i]) - static_cast<double>(b[i])));
  }
  return m;
}

// ---------------------------------------------------------------------------
// Layout

/// out.shape[i] = x.shape[axes[i]]
template <typename Scalar>
BasicTensor<Scalar> permute(const BasicTensor<Scalar> & x, const std::vector<std::size_t> & axes)
{
  const std::size_t rank = x.rank();
  if (axes.size() != rank) {
    throw DimensionError("permute: axes rank does not match " + shape_string(x.shape()));
  }
  std::vector<bool> seen(rank, false);
  for (auto a : axes) {
    if (a >= rank || seen[a]) throw DimensionError("permute: invalid axes");
    seen[a] = true;
  }
  Shape out_shape(rank);
  std::vector<std::size_t> in_strides(rank, 1);
  for (std::size_t i = rank; i-- > 1;) in_strides[i - 1] = in_strides[i] * x.shape()[i];
  std::vector<std::size_t> src_strides(rank);
  for (std::size_t i = 0; i < rank; ++i) {
    out_shape[i] = x.shape()[axes[i]];
    src_strides[i] = in_strides[axes[i]];
  }
  BasicTensor<Scalar> out(out_shape);
  if (rank == 0) {
    out[0] = x[0];
    return out;
  }
  std::vector<std::size_t> idx(rank, 0);
  std::size_t src = 0;
  const std::size_t inner = out_shape.back();
  const std::size_t inner_stride = src_strides.back();
  Scalar * dst = out.raw();
  const Scalar * in = x.raw();
  for (std::size_t n = 0; n < out.size(); n += inner) {
    for (std::size_t j = 0; j < inner; ++j) *dst++ = in[src + j * inner_stride];
    // advance the outer multi-index
    for (std::size_t d = rank - 1; d-- > 0;) {
      ++idx[d];
      src += src_strides[d];
      if (idx[d] < out_shape[d]) break;
      src -= src_strides[d] * idx[d];
      idx[d] = 0;
    }
  }
  return out;
}

template <typename Scalar>
BasicTensor<Scalar> nchw_to_nhwc(const BasicTensor<Scalar> & x)
{
  return permute(x, {0, 2, 3, 1});
}

template <typename Scalar>
BasicTensor<Scalar> nhwc_to_nchw(const BasicTensor<Scalar> & x)
{
  return permute(x, {0, 3, 1, 2});
}

// ---------------------------------------------------------------------------
// Linear algebra

template <typename Scalar>
BasicTensor<Scalar> matmul(const BasicTensor<Scalar> & a, const BasicTensor<Scalar> & b)
{
  if (a.rank() != 2 || b.rank() != 2 || a.dim(1) != b.dim(0)) {
    throw DimensionError(
      "matmul: incompatible shapes " + shape_string(a.shape()) + " and " +
      shape_string(b.shape()));
  }
  const std::size_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  BasicTensor<Scalar> out({m, n});
  detail::as_matrix(out.raw(), m, n).noalias() =
    detail::aligned_copy(a.raw(), m, k) * detail::as_matrix(b.raw(), k, n);
  return out;
}

/// y = x W (+ bias) over the last axis; x is [B, ..., K], W is [K, N].
/// Each leading-axis sample is multiplied on its own so that results do not
/// depend on the batch size.
template <typename Scalar>
BasicTensor<Scalar> linear(const BasicTensor<Scalar> & x, const BasicTensor<Scalar> & weight,
                           const BasicTensor<Scalar> * bias = nullptr)
{
  if (x.rank() < 2 || weight.rank() != 2 || x.shape().back() != weight.dim(0)) {
    throw DimensionError(
      "linear: incompatible shapes " + shape_string(x.shape()) + " and " +
      shape_string(weight.shape()));
  }
  const std::size_t k = weight.dim(0), n = weight.dim(1);
  if (bias && bias->size() != n) {
    throw DimensionError("linear: bias " + shape_string(bias->shape()) + " expected length " +
                         std::to_string(n));
  }
  const std::size_t batch = x.dim(0);
  const std::size_t rows = x.size() / (batch * k);
  Shape out_shape = x.shape();
  out_shape.back() = n;
  BasicTensor<Scalar> out(out_shape);
  const auto w = detail::as_matrix(weight.raw(), k, n);
  for (std::size_t b = 0; b < batch; ++b) {
    RowMatrix<Scalar> y = detail::aligned_copy(x.raw() + b * rows * k, rows, k) * w;
    if (bias) {
      y.rowwise() += Eigen::Map<const Eigen::Matrix<Scalar, 1, Eigen::Dynamic>>(
        bias->raw(), static_cast<Eigen::Index>(n));
    }
    detail::as_matrix(out.raw() + b * rows * n, rows, n) = y;
  }
  return out;
}

template <typename Scalar>
BasicTensor<Scalar> softmax_lastdim(const BasicTensor<Scalar> & x)
{
  const std::size_t c = x.rank() ? x.shape().back() : 1;
  BasicTensor<Scalar> out(x.shape());
  for (std::size_t row = 0; row < x.size(); row += c) {
    const Scalar * in = x.raw() + row;
    Scalar * o = out.raw() + row;
    const Scalar mx = *std::max_element(in, in + c);
    double sum = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      o[j] = static_cast<Scalar>(std::exp(static_cast<double>(in[j] - mx)));
      sum += o[j];
    }
    for (std::size_t j = 0; j < c; ++j) o[j] = static_cast<Scalar>(o[j] / sum);
  }
  return out;
}

inline constexpr double kLayerNormEps = 1e-6;

/// Normalizes over the last axis; `beta == nullptr` means no additive term.
template <typename Scalar>
BasicTensor<Scalar> layernorm(const BasicTensor<Scalar> & x, const BasicTensor<Scalar> & gamma,
                              const BasicTensor<Scalar> * beta = nullptr,
                              double eps = kLayerNormEps)
{
  if (x.rank() == 0) throw DimensionError("layernorm: input has no channel axis");
  const std::size_t c = x.shape().back();
  if (gamma.size() != c || (beta && beta->size() != c)) {
    throw DimensionError(
      "layernorm: affine parameters " + shape_string(gamma.shape()) + " do not match " +
      shape_string(x.shape()));
  }
  if (!(eps > 0.0)) throw ConfigError("layernorm: eps must be positive");
  BasicTensor<Scalar> out(x.shape());
  for (std::size_t row = 0; row < x.size(); row += c) {
    const Scalar * in = x.raw() + row;
    double mean = 0.0;
    for (std::size_t j = 0; j < c; ++j) mean += in[j];
    mean /= static_cast<double>(c);
    double var = 0.0;
    for (std::size_t j = 0; j < c; ++j) {
      const double d = in[j] - mean;
      var += d * d;
    }
    var /= static_cast<double>(c);
    const double inv = 1.0 / std::sqrt(var + eps);
    Scalar * o = out.raw() + row;
    for (std::size_t j = 0; j < c; ++j) {
      double v = (in[j] - mean) * inv * static_cast<double>(gamma[j]);
      if (beta) v += static_cast<double>((*beta)[j]);
      o[j] = static_cast<Scalar>(v);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Spatial kernels (NCHW)

struct Conv2dGeometry
{
  std::size_t stride = 1;
  std::size_t padding = 0;
  std::size_t groups = 1;
};

/// Zero-padded cross-correlation. x: [B, Cin, H, W], w: [Cout, Cin/groups, k, k].
template <typename Scalar>
BasicTensor<Scalar> conv2d(const BasicTensor<Scalar> & x, const BasicTensor<Scalar> & w,
                           Conv2dGeometry geo = {}, const BasicTensor<Scalar> * bias = nullptr)
{
  if (x.rank() != 4 || w.rank() != 4) {
    throw DimensionError(
      "conv2d: expected rank-4 input and weight, got " + shape_string(x.shape()) + " and " +
      shape_string(w.shape()));
  }
  const std::size_t batch = x.dim(0), cin = x.dim(1), h = x.dim(2), wd = x.dim(3);
  const std::size_t cout = w.dim(0), cpg = w.dim(1), k = w.dim(2);
  const std::size_t groups = geo.groups;
  if (w.dim(3) != k) throw DimensionError("conv2d: only square kernels are supported");
  if (groups == 0 || cin % groups != 0 || cout % groups != 0) {
    throw DimensionError(
      "conv2d: channels " + std::to_string(cin) + "->" + std::to_string(cout) +
      " not divisible by groups " + std::to_string(groups));
  }
  if (cpg != cin / groups) {
    throw DimensionError(
      "conv2d: weight " + shape_string(w.shape()) + " does not match input " +
      shape_string(x.shape()) + " with groups " + std::to_string(groups));
  }
  if (bias && bias->size() != cout) throw DimensionError("conv2d: bias length mismatch");
  const std::size_t stride = geo.stride, pad = geo.padding;
  const std::size_t ho = detail::conv_out_size(h, k, stride, pad, "conv2d");
  const std::size_t wo = detail::conv_out_size(wd, k, stride, pad, "conv2d");
  const std::size_t opg = cout / groups;
  const std::size_t plane = ho * wo;

  BasicTensor<Scalar> out({batch, cout, ho, wo});
  for (std::size_t b = 0; b < batch; ++b) {
    const Scalar * xb = x.raw() + b * cin * h * wd;
    Scalar * ob = out.raw() + b * cout * plane;
    if (groups == 1) {
      // im2col + GEMM
      const std::size_t depth = cin * k * k;
      RowMatrix<Scalar> cols(static_cast<Eigen::Index>(depth), static_cast<Eigen::Index>(plane));
      for (std::size_t c = 0; c < cin; ++c) {
        for (std::size_t ky = 0; ky < k; ++ky) {
          for (std::size_t kx = 0; kx < k; ++kx) {
            Scalar * row = cols.data() + ((c * k + ky) * k + kx) * plane;
            for (std::size_t oy = 0; oy < ho; ++oy) {
              const std::ptrdiff_t iy =
                static_cast<std::ptrdiff_t>(oy * stride + ky) - static_cast<std::ptrdiff_t>(pad);
              for (std::size_t ox = 0; ox < wo; ++ox) {
                const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride + kx) -
                                          static_cast<std::ptrdiff_t>(pad);
                const bool inside = iy >= 0 && ix >= 0 && iy < static_cast<std::ptrdiff_t>(h) &&
                                    ix < static_cast<std::ptrdiff_t>(wd);
                row[oy * wo + ox] = inside ? xb[(c * h + iy) * wd + ix] : Scalar(0);
              }
            }
          }
        }
      }
      detail::as_matrix(ob, cout, plane).noalias() = detail::as_matrix(w.raw(), cout, depth) * cols;
    } else {
      for (std::size_t oc = 0; oc < cout; ++oc) {
        const std::size_t g = oc / opg;
        Scalar * o = ob + oc * plane;
        std::fill(o, o + plane, Scalar(0));
        for (std::size_t ci = 0; ci < cpg; ++ci) {
          const Scalar * xin = xb + (g * cpg + ci) * h * wd;
          const Scalar * wk = w.raw() + (oc * cpg + ci) * k * k;
          for (std::size_t ky = 0; ky < k; ++ky) {
            for (std::size_t kx = 0; kx < k; ++kx) {
              const Scalar wv = wk[ky * k + kx];
              for (std::size_t oy = 0; oy < ho; ++oy) {
                const std::ptrdiff_t iy = static_cast<std::ptrdiff_t>(oy * stride + ky) -
                                          static_cast<std::ptrdiff_t>(pad);
                if (iy < 0 || iy >= static_cast<std::ptrdiff_t>(h)) continue;
                const Scalar * xrow = xin + iy * wd;
                Scalar * orow = o + oy * wo;
                for (std::size_t ox = 0; ox < wo; ++ox) {
                  const std::ptrdiff_t ix = static_cast<std::ptrdiff_t>(ox * stride + kx) -
                                            static_cast<std::ptrdiff_t>(pad);
                  if (ix < 0 || ix >= static_cast<std::ptrdiff_t>(wd)) continue;
                  orow[ox] += wv * xrow[ix];
                }
              }
            }
          }
        }
      }
    }
    if (bias) {
      for (std::size_t oc = 0; oc < cout; ++oc) {
        Scalar * o = ob + oc * plane;
        for (std::size_t i = 0; i < plane; ++i) o[i] += (*bias)[oc];
      }
    }
  }
  return out;
}

/// Window mean that divides by the number of in-bounds elements
/// (count_include_pad = false).
template <typename Scalar>
BasicTensor<Scalar> avgpool2d(const BasicTensor<Scalar> & x, std::size_t k, std::size_t stride,
                              std::size_t padding)
{
  if (x.rank() != 4) {
    throw DimensionError("avgpool2d: expected rank-4 input, got " + shape_string(x.shape()));
  }
  const std::size_t batch = x.dim(0), c = x.dim(1), h = x.dim(2), w = x.dim(3);
  const std::size_t ho = detail::conv_out_size(h, k, stride, padding, "avgpool2d");
  const std::size_t wo = detail::conv_out_size(w, k, stride, padding, "avgpool2d");
  BasicTensor<Scalar> out({batch, c, ho, wo});
  Scalar * o = out.raw();
  for (std::size_t p = 0; p < batch * c; ++p) {
    const Scalar * in = x.raw() + p * h * w;
    for (std::size_t oy = 0; oy < ho; ++oy) {
      const std::ptrdiff_t y0 =
        static_cast<std::ptrdiff_t>(oy * stride) - static_cast<std::ptrdiff_t>(padding);
      const std::size_t ylo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(y0, 0));
      const std::size_t yhi = static_cast<std::size_t>(
        std::min<std::ptrdiff_t>(y0 + static_cast<std::ptrdiff_t>(k), static_cast<std::ptrdiff_t>(h)));
      for (std::size_t ox = 0; ox < wo; ++ox) {
        const std::ptrdiff_t x0 =
          static_cast<std::ptrdiff_t>(ox * stride) - static_cast<std::ptrdiff_t>(padding);
        const std::size_t xlo = static_cast<std::size_t>(std::max<std::ptrdiff_t>(x0, 0));
        const std::size_t xhi = static_cast<std::size_t>(std::min<std::ptrdiff_t>(
          x0 + static_cast<std::ptrdiff_t>(k), static_cast<std::ptrdiff_t>(w)));
        Scalar sum = 0;
        for (std::size_t iy = ylo; iy < yhi; ++iy) {
          for (std::size_t ix = xlo; ix < xhi; ++ix) sum += in[iy * w + ix];
        }
        const std::size_t count = (yhi - ylo) * (xhi - xlo);
        *o++ = count ? sum / static_cast<Scalar>(count) : Scalar(0);
      }
    }
  }
  return out;
}

/// [B, C, H, W] -> [B, C]
template <typename Scalar>
BasicTensor<Scalar> global_avg_pool(const BasicTensor<Scalar> & x)
{
  if (x.rank() != 4) {
    throw DimensionError("global_avg_pool: expected rank-4 input, got " + shape_string(x.shape()));
  }
  const std::size_t batch = x.dim(0), c = x.dim(1), plane = x.dim(2) * x.dim(3);
  BasicTensor<Scalar> out({batch, c});
  for (std::size_t p = 0; p < batch * c; ++p) {
    const Scalar * in = x.raw() + p * plane;
    double sum = 0.0;
    for (std::size_t i = 0; i < plane; ++i) sum += in[i];
    out[p] = static_cast<Scalar>(sum / static_cast<double>(plane));
  }
  return out;
}

}  // namespace metaformer

#endif  // METAFORMER__TENSOR_HPP_
