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

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "incnet/tensor.hpp"
#include "incnet/tensor_io.hpp"

namespace incnet {

std::string to_string(const Shape& s) {
  std::ostringstream os;
  os << "(" << s.n << "," << s.c << "," << s.h << "," << s.w << ")";
  return os.str();
}

void validate_shape(const Shape& s) {
  if (s.n < 1) throw ShapeError("batch", 1, s.n, "extent must be positive");
  if (s.c < 1) throw ShapeError("channels", 1, s.c, "extent must be positive");
  if (s.h < 1) throw ShapeError("height", 1, s.h, "extent must be positive");
  if (s.w < 1) throw ShapeError("width", 1, s.w, "extent must be positive");
}

namespace le {

void put_u32(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xffu));
}

void put_f32(std::string& out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }

void put_f64(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xffu));
}

void Reader::need(std::size_t n) const {
  if (remaining() < n) {
    throw FormatError("truncated input: need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_) + ", have " + std::to_string(remaining()));
  }
}

std::uint8_t Reader::u8() {
  need(1);
  return static_cast<std::uint8_t>(bytes_[pos_++]);
}

std::uint32_t Reader::u32() {
  need(4);
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) {
    v |= static_cast<std::uint32_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
  }
  pos_ += 4;
  return v;
}

float Reader::f32() { return std::bit_cast<float>(u32()); }

double Reader::f64() {
  need(8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) {
    v |= static_cast<std::uint64_t>(static_cast<std::uint8_t>(bytes_[pos_ + i])) << (8 * i);
  }
  pos_ += 8;
  return std::bit_cast<double>(v);
}

std::string Reader::raw(std::size_t n) {
  need(n);
  std::string s = bytes_.substr(pos_, n);
  pos_ += n;
  return s;
}

}  // namespace le

namespace {

template <typename T>
std::string encode_impl(const Tensor<T>& t) {
  std::string out;
  out.reserve(33 + t.numel() * sizeof(T));
  out += "NCHW";
  le::put_u32(out, kTensorFileVersion);
  out.append(8, '\0');
  const Shape& s = t.shape();
  for (std::int64_t e : {s.n, s.c, s.h, s.w}) le::put_u32(out, static_cast<std::uint32_t>(e));
  out.push_back(static_cast<char>(dtype_of<T>()));
  for (T v : t.data()) {
    if constexpr (std::is_same_v<T, float>) {
      le::put_f32(out, v);
    } else {
      le::put_f64(out, v);
    }
  }
  return out;
}

}  // namespace

std::string encode_tensor(const TensorF& t) { return encode_impl(t); }
std::string encode_tensor(const TensorD& t) { return encode_impl(t); }

AnyTensor decode_tensor(const std::string& bytes) {
  le::Reader r(bytes);
  if (r.raw(4) != "NCHW") throw FormatError("bad tensor magic");
  std::uint32_t version = r.u32();
  if (version != kTensorFileVersion) {
    throw FormatError("unsupported tensor file version " + std::to_string(version));
  }
  r.raw(8);
  Shape s;
  s.n = r.u32();
  s.c = r.u32();
  s.h = r.u32();
  s.w = r.u32();
  validate_shape(s);
  std::uint8_t tag = r.u8();
  const auto count = static_cast<std::size_t>(s.numel());
  if (tag == static_cast<std::uint8_t>(DType::kFloat32)) {
    std::vector<float> data(count);
    for (auto& v : data) v = r.f32();
    if (r.remaining() != 0) throw FormatError("trailing bytes after tensor data");
    return TensorF(s, std::move(data));
  }
  if (tag == static_cast<std::uint8_t>(DType::kFloat64)) {
    std::vector<double> data(count);
    for (auto& v : data) v = r.f64();
    if (r.remaining() != 0) throw FormatError("trailing bytes after tensor data");
    return TensorD(s, std::move(data));
  }
  throw FormatError("unknown dtype tag " + std::to_string(tag));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "' for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write to '" + path + "' failed");
}

void write_tensor_file(const std::string& path, const TensorF& t) {
  write_file(path, encode_tensor(t));
}
void write_tensor_file(const std::string& path, const TensorD& t) {
  write_file(path, encode_tensor(t));
}
AnyTensor read_tensor_file(const std::string& path) { return decode_tensor(read_file(path)); }

}  // namespace incnet
