/* Copyright 2026 The incnet Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#include "incnet/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <cmath>
#include <limits>

namespace incnet {

namespace {

template <typename T>
using RowMat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
template <typename T>
using MapMat = Eigen::Map<RowMat<T>>;
template <typename T>
using CMapMat = Eigen::Map<const RowMat<T>>;

struct ConvGeometry {
  std::int64_t in_c, in_h, in_w;
  std::int64_t out_c, out_h, out_w;
  int k, stride, pad;

  std::int64_t patch() const { return in_c * k * k; }
  std::int64_t positions() const { return out_h * out_w; }
  // 1x1 stride-1 unpadded convolutions read the input plane directly.
  bool direct() const { return k == 1 && stride == 1 && pad == 0; }
};

template <typename T>
ConvGeometry check_conv(const Tensor<T>& input, const ConvParams<T>& p) {
  const Shape& in = input.shape();
  const Shape& ws = p.weights.shape();
  if (ws.h != ws.w) throw ShapeError("kernel width", ws.h, ws.w, "conv2d kernels must be square");
  if (ws.c != in.c) throw ShapeError("channels", ws.c, in.c, "conv2d input channels");
  if (p.bias.numel() != ws.n) {
    throw ShapeError("bias", ws.n, p.bias.numel(), "conv2d bias length");
  }
  if (p.stride < 1) throw Error("conv2d stride must be >= 1");
  if (p.padding < 0 || p.padding >= ws.h) {
    throw Error("conv2d padding " + std::to_string(p.padding) + " must be in [0, kernel size " +
                std::to_string(ws.h) + ")");
  }
  const int k = static_cast<int>(ws.h);
  ConvGeometry g{in.c, in.h, in.w, ws.n, 0, 0, k, p.stride, p.padding};
  g.out_h = conv_output_extent(in.h, k, p.stride, p.padding, "height");
  g.out_w = conv_output_extent(in.w, k, p.stride, p.padding, "width");
  return g;
}

template <typename T>
void im2col(const T* in, const ConvGeometry& g, T* col) {
  const std::int64_t P = g.positions();
  for (std::int64_t c = 0; c < g.in_c; ++c) {
    const T* plane = in + c * g.in_h * g.in_w;
    for (int i = 0; i < g.k; ++i) {
      for (int j = 0; j < g.k; ++j) {
        T* row = col + ((c * g.k + i) * g.k + j) * P;
        for (std::int64_t oy = 0; oy < g.out_h; ++oy) {
          const std::int64_t y = oy * g.stride + i - g.pad;
          T* dst = row + oy * g.out_w;
          if (y < 0 || y >= g.in_h) {
            std::fill(dst, dst + g.out_w, T(0));
            continue;
          }
          const T* src = plane + y * g.in_w;
          for (std::int64_t ox = 0; ox < g.out_w; ++ox) {
            const std::int64_t x = ox * g.stride + j - g.pad;
            dst[ox] = (x >= 0 && x < g.in_w) ? src[x] : T(0);
          }
        }
      }
    }
  }
}

template <typename T>
void col2im(const T* col, const ConvGeometry& g, T* in) {
  const std::int64_t P = g.positions();
  for (std::int64_t c = 0; c < g.in_c; ++c) {
    T* plane = in + c * g.in_h * g.in_w;
    for (int i = 0; i < g.k; ++i) {
      for (int j = 0; j < g.k; ++j) {
        const T* row = col + ((c * g.k + i) * g.k + j) * P;
        for (std::int64_t oy = 0; oy < g.out_h; ++oy) {
          const std::int64_t y = oy * g.stride + i - g.pad;
          if (y < 0 || y >= g.in_h) continue;
          T* dst = plane + y * g.in_w;
          const T* src = row + oy * g.out_w;
          for (std::int64_t ox = 0; ox < g.out_w; ++ox) {
            const std::int64_t x = ox * g.stride + j - g.pad;
            if (x >= 0 && x < g.in_w) dst[x] += src[ox];
          }
        }
      }
    }
  }
}

struct Window {
  std::int64_t y0, y1, x0, x1;  // half-open, clipped to the input
};

Window pool_window(std::int64_t oy, std::int64_t ox, const PoolParams& p, std::int64_t h,
                   std::int64_t w) {
  const std::int64_t ys = oy * p.stride - p.padding;
  const std::int64_t xs = ox * p.stride - p.padding;
  return {std::max<std::int64_t>(ys, 0), std::min<std::int64_t>(ys + p.kernel, h),
          std::max<std::int64_t>(xs, 0), std::min<std::int64_t>(xs + p.kernel, w)};
}

}  // namespace

std::int64_t conv_output_extent(std::int64_t in, int kernel, int stride, int pad,
                                const char* dimension) {
  const std::int64_t span = in + 2 * pad - kernel;
  if (span < 0) {
    throw ShapeError(dimension, kernel, in + 2 * pad,
                     "convolution kernel larger than padded input");
  }
  return span / stride + 1;
}

std::int64_t pool_output_extent(std::int64_t in, const PoolParams& p, const char* dimension) {
  if (p.kernel < 1 || p.stride < 1) throw Error("pool kernel and stride must be >= 1");
  if (p.padding < 0 || 2 * p.padding > p.kernel) {
    throw Error("pool padding must be in [0, kernel/2]");
  }
  const std::int64_t span = in + 2 * p.padding - p.kernel;
  if (span < 0) {
    throw ShapeError(dimension, p.kernel, in + 2 * p.padding, "pooling window larger than input");
  }
  std::int64_t out = p.ceil_mode ? (span + p.stride - 1) / p.stride + 1 : span / p.stride + 1;
  if (p.ceil_mode && (out - 1) * p.stride >= in + p.padding) --out;
  return out;
}

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const ConvParams<T>& params) {
  const ConvGeometry g = check_conv(input, params);
  const std::int64_t batch = input.shape().n;
  Tensor<T> out(Shape{batch, g.out_c, g.out_h, g.out_w});
  const std::int64_t P = g.positions();
  std::vector<T> col(g.direct() ? 0 : static_cast<std::size_t>(g.patch() * P));
  CMapMat<T> w(params.weights.data().data(), g.out_c, g.patch());
  for (std::int64_t b = 0; b < batch; ++b) {
    const T* src = input.item(b);
    if (!g.direct()) {
      im2col(src, g, col.data());
      src = col.data();
    }
    MapMat<T> y(out.item(b), g.out_c, P);
    y.noalias() = w * CMapMat<T>(src, g.patch(), P);
    for (std::int64_t o = 0; o < g.out_c; ++o) y.row(o).array() += params.bias[o];
  }
  return out;
}

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const ConvParams<T>& params,
                             const Tensor<T>& grad_output) {
  const ConvGeometry g = check_conv(input, params);
  const std::int64_t batch = input.shape().n;
  const Shape expected{batch, g.out_c, g.out_h, g.out_w};
  if (grad_output.shape() != expected) {
    throw ShapeError("grad_output", expected.numel(), grad_output.numel(),
                     "conv2d gradient shape " + to_string(grad_output.shape()) + " vs " +
                         to_string(expected));
  }
  ConvGrads<T> grads{Tensor<T>(input.shape()), Tensor<T>(params.weights.shape()),
                     Tensor<T>(params.bias.shape())};
  const std::int64_t P = g.positions();
  std::vector<T> col(g.direct() ? 0 : static_cast<std::size_t>(g.patch() * P));
  std::vector<T> dcol(g.direct() ? 0 : static_cast<std::size_t>(g.patch() * P));
  CMapMat<T> w(params.weights.data().data(), g.out_c, g.patch());
  MapMat<T> dw(grads.weights.data().data(), g.out_c, g.patch());
  for (std::int64_t b = 0; b < batch; ++b) {
    const T* src = input.item(b);
    if (!g.direct()) {
      im2col(src, g, col.data());
      src = col.data();
    }
    CMapMat<T> dy(grad_output.item(b), g.out_c, P);
    dw.noalias() += dy * CMapMat<T>(src, g.patch(), P).transpose();
    for (std::int64_t o = 0; o < g.out_c; ++o) grads.bias[o] += dy.row(o).sum();
    if (g.direct()) {
      MapMat<T>(grads.input.item(b), g.patch(), P).noalias() = w.transpose() * dy;
    } else {
      MapMat<T>(dcol.data(), g.patch(), P).noalias() = w.transpose() * dy;
      col2im(dcol.data(), g, grads.input.item(b));
    }
  }
  return grads;
}

template <typename T>
Tensor<T> pool2d(const Tensor<T>& input, const PoolParams& params) {
  const Shape& in = input.shape();
  const std::int64_t oh = pool_output_extent(in.h, params, "height");
  const std::int64_t ow = pool_output_extent(in.w, params, "width");
  Tensor<T> out(Shape{in.n, in.c, oh, ow});
  T* dst = out.data().data();
  for (std::int64_t nc = 0; nc < in.n * in.c; ++nc) {
    const T* plane = input.data().data() + nc * in.h * in.w;
    for (std::int64_t oy = 0; oy < oh; ++oy) {
      for (std::int64_t ox = 0; ox < ow; ++ox) {
        const Window win = pool_window(oy, ox, params, in.h, in.w);
        if (params.kind == PoolKind::kMax) {
          T best = -std::numeric_limits<T>::infinity();
          for (std::int64_t y = win.y0; y < win.y1; ++y) {
            for (std::int64_t x = win.x0; x < win.x1; ++x) best = std::max(best, plane[y * in.w + x]);
          }
          *dst++ = best;
        } else {
          T sum = 0;
          for (std::int64_t y = win.y0; y < win.y1; ++y) {
            for (std::int64_t x = win.x0; x < win.x1; ++x) sum += plane[y * in.w + x];
          }
          *dst++ = sum / static_cast<T>((win.y1 - win.y0) * (win.x1 - win.x0));
        }
      }
    }
  }
  return out;
}

template <typename T>
Tensor<T> pool2d_backward(const Tensor<T>& input, const PoolParams& params,
                          const Tensor<T>& grad_output) {
  const Shape& in = input.shape();
  const std::int64_t oh = pool_output_extent(in.h, params, "height");
  const std::int64_t ow = pool_output_extent(in.w, params, "width");
  if (grad_output.shape() != Shape{in.n, in.c, oh, ow}) {
    throw ShapeError("grad_output", in.n * in.c * oh * ow, grad_output.numel(),
                     "pool2d gradient shape");
  }
  Tensor<T> grad(in);
  const T* dy = grad_output.data().data();
  for (std::int64_t nc = 0; nc < in.n * in.c; ++nc) {
    const T* plane = input.data().data() + nc * in.h * in.w;
    T* gplane = grad.data().data() + nc * in.h * in.w;
    for (std::int64_t oy = 0; oy < oh; ++oy) {
      for (std::int64_t ox = 0; ox < ow; ++ox) {
        const Window win = pool_window(oy, ox, params, in.h, in.w);
        const T g = *dy++;
        if (params.kind == PoolKind::kMax) {
          std::int64_t arg = win.y0 * in.w + win.x0;
          for (std::int64_t y = win.y0; y < win.y1; ++y) {
            for (std::int64_t x = win.x0; x < win.x1; ++x) {
              if (plane[y * in.w + x] > plane[arg]) arg = y * in.w + x;
            }
          }
          gplane[arg] += g;
        } else {
          const T share = g / static_cast<T>((win.y1 - win.y0) * (win.x1 - win.x0));
          for (std::int64_t y = win.y0; y < win.y1; ++y) {
            for (std::int64_t x = win.x0; x < win.x1; ++x) gplane[y * in.w + x] += share;
          }
        }
      }
    }
  }
  return grad;
}

template <typename T>
Tensor<T> relu(const Tensor<T>& input) {
  Tensor<T> out(input.shape());
  auto src = input.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); ++i) dst[i] = src[i] > T(0) ? src[i] : T(0);
  return out;
}

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_output) {
  if (input.shape() != grad_output.shape()) {
    throw ShapeError("grad_output", input.numel(), grad_output.numel(), "relu gradient shape");
  }
  Tensor<T> out(input.shape());
  auto x = input.data();
  auto dy = grad_output.data();
  auto dx = out.data();
  for (std::size_t i = 0; i < x.size(); ++i) dx[i] = x[i] > T(0) ? dy[i] : T(0);
  return out;
}

template <typename T>
Tensor<T> linear(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias) {
  const std::int64_t batch = input.shape().n;
  const std::int64_t features = input.shape().per_item();
  const std::int64_t out_f = weights.shape().n;
  if (weights.shape().per_item() != features) {
    throw ShapeError("features", weights.shape().per_item(), features, "linear input features");
  }
  if (bias.numel() != out_f) throw ShapeError("bias", out_f, bias.numel(), "linear bias length");
  Tensor<T> out(Shape{batch, out_f, 1, 1});
  MapMat<T> y(out.data().data(), batch, out_f);
  y.noalias() = CMapMat<T>(input.data().data(), batch, features) *
                CMapMat<T>(weights.data().data(), out_f, features).transpose();
  for (std::int64_t b = 0; b < batch; ++b) {
    for (std::int64_t o = 0; o < out_f; ++o) y(b, o) += bias[o];
  }
  return out;
}

template <typename T>
LinearGrads<T> linear_backward(const Tensor<T>& input, const Tensor<T>& weights,
                               const Tensor<T>& grad_output) {
  const std::int64_t batch = input.shape().n;
  const std::int64_t features = input.shape().per_item();
  const std::int64_t out_f = weights.shape().n;
  if (grad_output.numel() != batch * out_f) {
    throw ShapeError("grad_output", batch * out_f, grad_output.numel(), "linear gradient shape");
  }
  LinearGrads<T> g{Tensor<T>(input.shape()), Tensor<T>(weights.shape()),
                   Tensor<T>(Shape{1, out_f, 1, 1})};
  CMapMat<T> dy(grad_output.data().data(), batch, out_f);
  MapMat<T>(g.input.data().data(), batch, features).noalias() =
      dy * CMapMat<T>(weights.data().data(), out_f, features);
  MapMat<T>(g.weights.data().data(), out_f, features).noalias() =
      dy.transpose() * CMapMat<T>(input.data().data(), batch, features);
  for (std::int64_t o = 0; o < out_f; ++o) {
    T s = 0;
    for (std::int64_t b = 0; b < batch; ++b) s += dy(b, o);
    g.bias[o] = s;
  }
  return g;
}

template <typename T>
Tensor<T> softmax(const Tensor<T>& input) {
  Tensor<T> out(input.shape());
  const std::int64_t k = input.shape().per_item();
  for (std::int64_t b = 0; b < input.shape().n; ++b) {
    const T* x = input.item(b);
    T* y = out.item(b);
    const T m = *std::max_element(x, x + k);
    T sum = 0;
    for (std::int64_t i = 0; i < k; ++i) {
      y[i] = std::exp(x[i] - m);
      sum += y[i];
    }
    for (std::int64_t i = 0; i < k; ++i) y[i] /= sum;
  }
  return out;
}

template <typename T>
Tensor<T> softmax_backward(const Tensor<T>& output, const Tensor<T>& grad_output) {
  if (output.shape() != grad_output.shape()) {
    throw ShapeError("grad_output", output.numel(), grad_output.numel(), "softmax gradient shape");
  }
  Tensor<T> grad(output.shape());
  const std::int64_t k = output.shape().per_item();
  for (std::int64_t b = 0; b < output.shape().n; ++b) {
    const T* y = output.item(b);
    const T* dy = grad_output.item(b);
    T dot = 0;
    for (std::int64_t i = 0; i < k; ++i) dot += y[i] * dy[i];
    T* dx = grad.item(b);
    for (std::int64_t i = 0; i < k; ++i) dx[i] = y[i] * (dy[i] - dot);
  }
  return grad;
}

template <typename T>
DropoutResult<T> dropout(const Tensor<T>& input, double rate, Mode mode, Rng& rng) {
  if (!(rate >= 0.0 && rate < 1.0)) {
    throw Error("dropout rate must be in [0, 1), got " + std::to_string(rate));
  }
  if (mode == Mode::kInfer || rate == 0.0) return {input, Tensor<T>(input.shape(), T(1))};
  const T keep_scale = static_cast<T>(1.0 / (1.0 - rate));
  DropoutResult<T> r{Tensor<T>(input.shape()), Tensor<T>(input.shape())};
  auto x = input.data();
  auto y = r.output.data();
  auto m = r.mask.data();
  for (std::size_t i = 0; i < x.size(); ++i) {
    m[i] = rng.uniform() < rate ? T(0) : keep_scale;
    y[i] = x[i] * m[i];
  }
  return r;
}

template <typename T>
Tensor<T> concat_channels(std::span<const Tensor<T>> inputs) {
  if (inputs.empty()) throw Error("concat_channels needs at least one input");
  const Shape& first = inputs.front().shape();
  std::int64_t channels = 0;
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    const Shape& s = inputs[i].shape();
    const std::string branch = "concat branch " + std::to_string(i);
    if (s.n != first.n) throw ShapeError("batch", first.n, s.n, branch);
    if (s.h != first.h) throw ShapeError("height", first.h, s.h, branch);
    if (s.w != first.w) throw ShapeError("width", first.w, s.w, branch);
    channels += s.c;
  }
  Tensor<T> out(Shape{first.n, channels, first.h, first.w});
  for (std::int64_t b = 0; b < first.n; ++b) {
    T* dst = out.item(b);
    for (const auto& t : inputs) {
      const T* src = t.item(b);
      dst = std::copy(src, src + t.shape().per_item(), dst);
    }
  }
  return out;
}

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& input, std::int64_t begin, std::int64_t count) {
  const Shape& s = input.shape();
  if (begin < 0 || count < 1 || begin + count > s.c) {
    throw ShapeError("channels", s.c, begin + count, "channel slice out of range");
  }
  Tensor<T> out(Shape{s.n, count, s.h, s.w});
  for (std::int64_t b = 0; b < s.n; ++b) {
    const T* src = input.item(b) + begin * s.plane();
    std::copy(src, src + count * s.plane(), out.item(b));
  }
  return out;
}

template <typename T>
Tensor<T> flip_horizontal(const Tensor<T>& input) {
  const Shape& s = input.shape();
  Tensor<T> out(s);
  for (std::int64_t row = 0; row < s.n * s.c * s.h; ++row) {
    const T* src = input.data().data() + row * s.w;
    std::reverse_copy(src, src + s.w, out.data().data() + row * s.w);
  }
  return out;
}

#define INCNET_INSTANTIATE_OPS(T)                                                          \
  template Tensor<T> conv2d(const Tensor<T>&, const ConvParams<T>&);                        \
  template ConvGrads<T> conv2d_backward(const Tensor<T>&, const ConvParams<T>&,             \
                                        const Tensor<T>&);                                  \
  template Tensor<T> pool2d(const Tensor<T>&, const PoolParams&);                           \
  template Tensor<T> pool2d_backward(const Tensor<T>&, const PoolParams&, const Tensor<T>&); \
  template Tensor<T> relu(const Tensor<T>&);                                                \
  template Tensor<T> relu_backward(const Tensor<T>&, const Tensor<T>&);                     \
  template Tensor<T> linear(const Tensor<T>&, const Tensor<T>&, const Tensor<T>&);          \
  template LinearGrads<T> linear_backward(const Tensor<T>&, const Tensor<T>&,               \
                                          const Tensor<T>&);                                \
  template Tensor<T> softmax(const Tensor<T>&);                                             \
  template Tensor<T> softmax_backward(const Tensor<T>&, const Tensor<T>&);                  \
  template DropoutResult<T> dropout(const Tensor<T>&, double, Mode, Rng&);                  \
  template Tensor<T> concat_channels(std::span<const Tensor<T>>);                           \
  template Tensor<T> slice_channels(const Tensor<T>&, std::int64_t, std::int64_t);          \
  template Tensor<T> flip_horizontal(const Tensor<T>&);

INCNET_INSTANTIATE_OPS(float)
INCNET_INSTANTIATE_OPS(double)

#undef INCNET_INSTANTIATE_OPS

}  // namespace incnet
