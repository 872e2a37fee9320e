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

// Raw tensor fixture files.
//
// Layout (all integers little-endian):
//   [0, 4)    magic "NCHW"
//   [4, 8)    u32 version = 1
//   [8, 16)   reserved, zero
//   [16, 32)  u32 n, c, h, w
//   [32]      u8 dtype tag (0 = fp32, 1 = fp64)
//   [33, ...) element data, little-endian, NCHW order

#ifndef INCNET_TENSOR_IO_HPP_
#define INCNET_TENSOR_IO_HPP_

#include <string>
#include <variant>

#include "incnet/tensor.hpp"

namespace incnet {

inline constexpr std::uint32_t kTensorFileVersion = 1;

using AnyTensor = std::variant<TensorF, TensorD>;

std::string encode_tensor(const TensorF& t);
std::string encode_tensor(const TensorD& t);
AnyTensor decode_tensor(const std::string& bytes);

void write_tensor_file(const std::string& path, const TensorF& t);
void write_tensor_file(const std::string& path, const TensorD& t);
AnyTensor read_tensor_file(const std::string& path);

// Little-endian helpers shared by the binary formats.
namespace le {
void put_u32(std::string& out, std::uint32_t v);
void put_f32(std::string& out, float v);
void put_f64(std::string& out, double v);

class Reader {
 public:
  explicit Reader(const std::string& bytes) : bytes_(bytes) {}
  std::uint8_t u8();
  std::uint32_t u32();
  float f32();
  double f64();
  std::string raw(std::size_t n);
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  void need(std::size_t n) const;
  const std::string& bytes_;
  std::size_t pos_ = 0;
};
}  // namespace le

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& bytes);

}  // namespace incnet

#endif  // INCNET_TENSOR_IO_HPP_
