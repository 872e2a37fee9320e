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

#ifndef INCNET_TENSOR_HPP_
#define INCNET_TENSOR_HPP_

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <new>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "incnet/error.hpp"

namespace incnet {

enum class DType : std::uint8_t { kFloat32 = 0, kFloat64 = 1 };

template <typename T>
constexpr DType dtype_of() {
  static_assert(std::is_same_v<T, float> || std::is_same_v<T, double>,
                "tensors hold fp32 or fp64");
  return std::is_same_v<T, float> ? DType::kFloat32 : DType::kFloat64;
}

// Allocator handing out 64-byte aligned blocks. Vectorised GEMM kernels pick
// their reduction order from the alignment of their operands, so a fixed
// alignment is needed for results to be bitwise reproducible across runs.
template <typename T>
struct AlignedAllocator {
  using value_type = T;
  static constexpr std::align_val_t kAlignment{64};

  AlignedAllocator() = default;
  template <typename U>
  AlignedAllocator(const AlignedAllocator<U>&) {}

  T* allocate(std::size_t n) {
    return static_cast<T*>(::operator new(n * sizeof(T), kAlignment));
  }
  void deallocate(T* p, std::size_t) { ::operator delete(p, kAlignment); }

  template <typename U>
  friend bool operator==(const AlignedAllocator&, const AlignedAllocator<U>&) {
    return true;
  }
};

// Batch / channel / height / width extents.
struct Shape {
  std::int64_t n = 1;
  std::int64_t c = 1;
  std::int64_t h = 1;
  std::int64_t w = 1;

  std::int64_t numel() const { return n * c * h * w; }
  std::int64_t per_item() const { return c * h * w; }
  std::int64_t plane() const { return h * w; }

  friend bool operator==(const Shape&, const Shape&) = default;
};

std::string to_string(const Shape& s);

// Throws ShapeError if any extent is < 1.
void validate_shape(const Shape& s);

// Dense NCHW tensor with contiguous row-major storage.
template <typename T>
class Tensor {
 public:
  using value_type = T;

  Tensor() : shape_{1, 1, 1, 1}, data_(1, T(0)) {}
  explicit Tensor(Shape shape, T fill = T(0)) : shape_(shape) {
    validate_shape(shape_);
    data_.assign(static_cast<std::size_t>(shape_.numel()), fill);
  }
  Tensor(Shape shape, const std::vector<T>& data)
      : shape_(shape), data_(data.begin(), data.end()) {
    validate_shape(shape_);
    if (static_cast<std::int64_t>(data_.size()) != shape_.numel()) {
      throw ShapeError("data", shape_.numel(), static_cast<std::int64_t>(data_.size()),
                       "tensor data length does not match shape " + to_string(shape_));
    }
  }

  const Shape& shape() const { return shape_; }
  std::int64_t numel() const { return shape_.numel(); }
  static constexpr DType dtype() { return dtype_of<T>(); }

  std::span<T> data() { return data_; }
  std::span<const T> data() const { return data_; }
  std::vector<T> vec() const { return std::vector<T>(data_.begin(), data_.end()); }

  T& operator[](std::int64_t i) { return data_[static_cast<std::size_t>(i)]; }
  const T& operator[](std::int64_t i) const { return data_[static_cast<std::size_t>(i)]; }

  std::int64_t offset(std::int64_t n, std::int64_t c, std::int64_t y, std::int64_t x) const {
    return ((n * shape_.c + c) * shape_.h + y) * shape_.w + x;
  }
  T& at(std::int64_t n, std::int64_t c, std::int64_t y, std::int64_t x) {
    return data_[static_cast<std::size_t>(offset(n, c, y, x))];
  }
  const T& at(std::int64_t n, std::int64_t c, std::int64_t y, std::int64_t x) const {
    return data_[static_cast<std::size_t>(offset(n, c, y, x))];
  }

  // Pointer to the first element of batch item n.
  T* item(std::int64_t n) { return data_.data() + n * shape_.per_item(); }
  const T* item(std::int64_t n) const { return data_.data() + n * shape_.per_item(); }

  // Same data, new extents with equal element count.
  Tensor reshaped(Shape s) const {
    if (s.numel() != numel()) {
      throw ShapeError("numel", numel(), s.numel(), "cannot reshape " + to_string(shape_) +
                                                         " to " + to_string(s));
    }
    Tensor t = *this;
    t.shape_ = s;
    return t;
  }

  template <typename U>
  Tensor<U> cast() const {
    Tensor<U> out(shape_);
    std::copy(data_.begin(), data_.end(), out.data().begin());
    return out;
  }

  void fill(T v) { std::fill(data_.begin(), data_.end(), v); }

  friend bool operator==(const Tensor& a, const Tensor& b) {
    return a.shape_ == b.shape_ && a.data_ == b.data_;
  }

 private:
  Shape shape_;
  std::vector<T, AlignedAllocator<T>> data_;
};

using TensorF = Tensor<float>;
using TensorD = Tensor<double>;

}  // namespace incnet

#endif  // INCNET_TENSOR_HPP_
