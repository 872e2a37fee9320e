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

// Forward and backward compute kernels. Every function here is pure: inputs
// are taken by const reference and results are returned by value.

#ifndef INCNET_OPS_HPP_
#define INCNET_OPS_HPP_

#include <cstdint>
#include <span>
#include <vector>

#include "incnet/random.hpp"
#include "incnet/tensor.hpp"

namespace incnet {

// Weights are (out_channels, in_channels, k, k); bias is (1, out_channels, 1, 1).
template <typename T>
struct ConvParams {
  Tensor<T> weights;
  Tensor<T> bias;
  int stride = 1;
  int padding = 0;
};

template <typename T>
struct ConvGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

// floor((in + 2 * pad - k) / stride) + 1; throws if that is not positive.
std::int64_t conv_output_extent(std::int64_t in, int kernel, int stride, int pad,
                                const char* dimension);

template <typename T>
Tensor<T> conv2d(const Tensor<T>& input, const ConvParams<T>& params);

template <typename T>
ConvGrads<T> conv2d_backward(const Tensor<T>& input, const ConvParams<T>& params,
                             const Tensor<T>& grad_output);

enum class PoolKind { kMax, kAvg };

struct PoolParams {
  PoolKind kind = PoolKind::kMax;
  int kernel = 2;
  int stride = 2;
  int padding = 0;
  bool ceil_mode = false;
};

// Output extent with the ceil-mode rule that the last window must start
// inside the (left-padded) input.
std::int64_t pool_output_extent(std::int64_t in, const PoolParams& p, const char* dimension);

template <typename T>
Tensor<T> pool2d(const Tensor<T>& input, const PoolParams& params);

template <typename T>
Tensor<T> pool2d_backward(const Tensor<T>& input, const PoolParams& params,
                          const Tensor<T>& grad_output);

template <typename T>
Tensor<T> relu(const Tensor<T>& input);

template <typename T>
Tensor<T> relu_backward(const Tensor<T>& input, const Tensor<T>& grad_output);

// input is treated as (batch, c*h*w). weights (out, features, 1, 1), bias
// (1, out, 1, 1). Output is (batch, out, 1, 1).
template <typename T>
Tensor<T> linear(const Tensor<T>& input, const Tensor<T>& weights, const Tensor<T>& bias);

template <typename T>
struct LinearGrads {
  Tensor<T> input;
  Tensor<T> weights;
  Tensor<T> bias;
};

template <typename T>
LinearGrads<T> linear_backward(const Tensor<T>& input, const Tensor<T>& weights,
                               const Tensor<T>& grad_output);

// Softmax over the c*h*w features of each batch item.
template <typename T>
Tensor<T> softmax(const Tensor<T>& input);

template <typename T>
Tensor<T> softmax_backward(const Tensor<T>& output, const Tensor<T>& grad_output);

enum class Mode { kTrain, kInfer };

template <typename T>
struct DropoutResult {
  Tensor<T> output;
  // Per-element multiplier: 0 for dropped cells, 1/(1-rate) for survivors.
  Tensor<T> mask;
};

// Inverted dropout. Infer mode returns the input and an all-ones mask
// without touching the generator.
template <typename T>
DropoutResult<T> dropout(const Tensor<T>& input, double rate, Mode mode, Rng& rng);

template <typename T>
Tensor<T> concat_channels(std::span<const Tensor<T>> inputs);

template <typename T>
Tensor<T> slice_channels(const Tensor<T>& input, std::int64_t begin, std::int64_t count);

template <typename T>
Tensor<T> flip_horizontal(const Tensor<T>& input);

}  // namespace incnet

#endif  // INCNET_OPS_HPP_
