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


// RGB images with float pixels in [0, 1], PPM file I/O and resampling.

#ifndef INCNET_IMAGE_HPP_
#define INCNET_IMAGE_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "incnet/error.hpp"

namespace incnet {

// Interleaved row-major (height, width, 3) pixels, channel order R, G, B.
class Image {
 public:
  static constexpr std::int64_t kChannels = 3;

  Image() = default;
  Image(std::int64_t height, std::int64_t width, float fill = 0.0f);
  Image(std::int64_t height, std::int64_t width, std::vector<float> data);

  std::int64_t height() const { return height_; }
  std::int64_t width() const { return width_; }
  bool empty() const { return data_.empty(); }

  float& at(std::int64_t y, std::int64_t x, std::int64_t c) {
    return data_[static_cast<std::size_t>((y * width_ + x) * kChannels + c)];
  }
  float at(std::int64_t y, std::int64_t x, std::int64_t c) const {
    return data_[static_cast<std::size_t>((y * width_ + x) * kChannels + c)];
  }
  std::vector<float>& data() { return data_; }
  const std::vector<float>& data() const { return data_; }

  friend bool operator==(const Image&, const Image&) = default;

 private:
  std::int64_t height_ = 0;
  std::int64_t width_ = 0;
  std::vector<float> data_;
};

// Binary PPM (P6) with maxval <= 255. Comments in the header are skipped.
Image decode_ppm(const std::string& bytes);
// Pixels are clamped to [0, 1] and rounded to the nearest 8-bit level.
std::string encode_ppm(const Image& img);
Image read_ppm(const std::string& path);
void write_ppm(const std::string& path, const Image& img);

enum class Interpolation { kBilinear, kArea, kNearest, kCubic };
inline constexpr std::array<Interpolation, 4> kAllInterpolations = {
    Interpolation::kBilinear, Interpolation::kArea, Interpolation::kNearest,
    Interpolation::kCubic};

const char* to_string(Interpolation m);
std::optional<Interpolation> parse_interpolation(const std::string& s);

// Separable resampling with half-pixel-centred coordinates: output pixel x
// samples source position (x + 0.5) * in / out - 0.5. Bilinear and cubic
// (Keys, a = -0.5) replicate edge pixels; area averages the exact box of
// source pixels an output pixel covers; nearest picks the source pixel
// containing the sample position. Throws Error on a non-positive size.
Image resize(const Image& img, std::int64_t out_h, std::int64_t out_w, Interpolation method);

// Sub-rectangle [y, y + h) x [x, x + w). Throws Error if it leaves the image.
Image crop(const Image& img, std::int64_t y, std::int64_t x, std::int64_t h, std::int64_t w);

Image flip_horizontal(const Image& img);

}  // namespace incnet

#endif  // INCNET_IMAGE_HPP_
