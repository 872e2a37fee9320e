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


#include "incnet/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "incnet/tensor_io.hpp"

namespace incnet {

Image::Image(std::int64_t height, std::int64_t width, float fill)
    : height_(height), width_(width) {
  if (height < 1 || width < 1) {
    throw Error("image extents must be >= 1, got " + std::to_string(height) + "x" +
                std::to_string(width));
  }
  data_.assign(static_cast<std::size_t>(height * width * kChannels), fill);
}

Image::Image(std::int64_t height, std::int64_t width, std::vector<float> data)
    : Image(height, width) {
  if (data.size() != data_.size()) {
    throw Error("image data has " + std::to_string(data.size()) + " values, expected " +
                std::to_string(data_.size()));
  }
  data_ = std::move(data);
}

namespace {

class PpmHeaderReader {
 public:
  explicit PpmHeaderReader(const std::string& bytes) : bytes_(bytes) {}

  std::string token() {
    skip_space_and_comments();
    std::string t;
    while (pos_ < bytes_.size() && !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      t += bytes_[pos_++];
    }
    if (t.empty()) throw FormatError("PPM header is truncated");
    return t;
  }

  std::int64_t number() {
    const std::string t = token();
    if (!std::all_of(t.begin(), t.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
        t.size() > 9) {
      throw FormatError("PPM header field '" + t + "' is not a positive integer");
    }
    return std::stoll(t);
  }

  // Exactly one whitespace byte separates the header from the raster.
  std::size_t raster_offset() {
    if (pos_ >= bytes_.size() || !std::isspace(static_cast<unsigned char>(bytes_[pos_]))) {
      throw FormatError("PPM header is not followed by whitespace");
    }
    return pos_ + 1;
  }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      const char c = bytes_[pos_];
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++pos_;
      } else if (c == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  const std::string& bytes_;
  std::size_t pos_ = 0;
};

// Source taps and weights for each output coordinate along one axis.
struct Taps {
  std::vector<std::int64_t> index;
  std::vector<double> weight;
  std::vector<std::size_t> begin;  // per output, into index / weight; size out + 1
};

double cubic_kernel(double t) {
  constexpr double a = -0.5;
  t = std::abs(t);
  if (t <= 1) return ((a + 2) * t - (a + 3)) * t * t + 1;
  if (t < 2) return ((a * t - 5 * a) * t + 8 * a) * t - 4 * a;
  return 0;
}

Taps make_taps(std::int64_t in, std::int64_t out, Interpolation method) {
  Taps taps;
  const double scale = static_cast<double>(in) / static_cast<double>(out);
  auto clamp = [in](std::int64_t i) { return std::clamp<std::int64_t>(i, 0, in - 1); };
  auto add = [&](std::int64_t i, double w) {
    taps.index.push_back(i);
    taps.weight.push_back(w);
  };
  for (std::int64_t o = 0; o < out; ++o) {
    taps.begin.push_back(taps.index.size());
    switch (method) {
      case Interpolation::kNearest: {
        add(clamp(static_cast<std::int64_t>(std::floor((static_cast<double>(o) + 0.5) * scale))),
            1.0);
        break;
      }
      case Interpolation::kBilinear: {
        const double s = std::clamp((static_cast<double>(o) + 0.5) * scale - 0.5, 0.0,
                                    static_cast<double>(in - 1));
        const auto i0 = static_cast<std::int64_t>(std::floor(s));
        const double f = s - static_cast<double>(i0);
        add(i0, 1.0 - f);
        if (f > 0) add(clamp(i0 + 1), f);
        break;
      }
      case Interpolation::kCubic: {
        const double s = (static_cast<double>(o) + 0.5) * scale - 0.5;
        const auto i0 = static_cast<std::int64_t>(std::floor(s));
        const double f = s - static_cast<double>(i0);
        for (std::int64_t k = -1; k <= 2; ++k) {
          const double w = cubic_kernel(f - static_cast<double>(k));
          if (w != 0) add(clamp(i0 + k), w);
        }
        break;
      }
      case Interpolation::kArea: {
        const double lo = static_cast<double>(o) * scale;
        const double hi = static_cast<double>(o + 1) * scale;
        for (auto i = static_cast<std::int64_t>(std::floor(lo));
             i < std::min<std::int64_t>(in, static_cast<std::int64_t>(std::ceil(hi))); ++i) {
          const double overlap =
              std::min(hi, static_cast<double>(i + 1)) - std::max(lo, static_cast<double>(i));
          if (overlap > 0) add(i, overlap / scale);
        }
        break;
      }
    }
  }
  taps.begin.push_back(taps.index.size());
  return taps;
}

}  // namespace

Image decode_ppm(const std::string& bytes) {
  PpmHeaderReader r(bytes);
  if (r.token() != "P6") throw FormatError("not a binary PPM (P6) file");
  const std::int64_t w = r.number();
  const std::int64_t h = r.number();
  const std::int64_t maxval = r.number();
  if (w < 1 || h < 1) throw FormatError("PPM extents must be positive");
  if (maxval < 1 || maxval > 255) {
    throw FormatError("PPM maxval " + std::to_string(maxval) + " unsupported (need 1..255)");
  }
  const std::size_t offset = r.raster_offset();
  const auto n = static_cast<std::size_t>(w * h * 3);
  if (bytes.size() < offset + n) throw FormatError("PPM raster is truncated");
  Image img(h, w);
  const auto scale = static_cast<float>(maxval);
  for (std::size_t i = 0; i < n; ++i) {
    img.data()[i] = static_cast<float>(static_cast<unsigned char>(bytes[offset + i])) / scale;
  }
  return img;
}

std::string encode_ppm(const Image& img) {
  std::string out = "P6\n" + std::to_string(img.width()) + " " + std::to_string(img.height()) +
                    "\n255\n";
  out.reserve(out.size() + img.data().size());
  for (float v : img.data()) {
    const float c = std::clamp(v, 0.0f, 1.0f);
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(c * 255.0f))));
  }
  return out;
}

Image read_ppm(const std::string& path) {
  try {
    return decode_ppm(read_file(path));
  } catch (const FormatError& e) {
    throw FormatError(path + ": " + e.what());
  }
}

void write_ppm(const std::string& path, const Image& img) { write_file(path, encode_ppm(img)); }

const char* to_string(Interpolation m) {
  switch (m) {
    case Interpolation::kBilinear:
      return "bilinear";
    case Interpolation::kArea:
      return "area";
    case Interpolation::kNearest:
      return "nearest";
    case Interpolation::kCubic:
      return "cubic";
  }
  return "?";
}

std::optional<Interpolation> parse_interpolation(const std::string& s) {
  for (Interpolation m : kAllInterpolations) {
    if (s == to_string(m)) return m;
  }
  return std::nullopt;
}

Image resize(const Image& img, std::int64_t out_h, std::int64_t out_w, Interpolation method) {
  if (out_h < 1 || out_w < 1) {
    throw Error("resize target must be positive, got " + std::to_string(out_h) + "x" +
                std::to_string(out_w));
  }
  if (out_h == img.height() && out_w == img.width()) return img;
  const Taps ty = make_taps(img.height(), out_h, method);
  const Taps tx = make_taps(img.width(), out_w, method);
  constexpr std::int64_t C = Image::kChannels;
  // Horizontal pass into a (in_h, out_w) buffer, then vertical.
  std::vector<double> mid(static_cast<std::size_t>(img.height() * out_w * C));
  for (std::int64_t y = 0; y < img.height(); ++y) {
    for (std::int64_t x = 0; x < out_w; ++x) {
      for (std::int64_t c = 0; c < C; ++c) {
        double acc = 0;
        for (std::size_t t = tx.begin[static_cast<std::size_t>(x)];
             t < tx.begin[static_cast<std::size_t>(x) + 1]; ++t) {
          acc += tx.weight[t] * img.at(y, tx.index[t], c);
        }
        mid[static_cast<std::size_t>((y * out_w + x) * C + c)] = acc;
      }
    }
  }
  Image out(out_h, out_w);
  for (std::int64_t y = 0; y < out_h; ++y) {
    for (std::int64_t x = 0; x < out_w; ++x) {
      for (std::int64_t c = 0; c < C; ++c) {
        double acc = 0;
        for (std::size_t t = ty.begin[static_cast<std::size_t>(y)];
             t < ty.begin[static_cast<std::size_t>(y) + 1]; ++t) {
          acc += ty.weight[t] * mid[static_cast<std::size_t>((ty.index[t] * out_w + x) * C + c)];
        }
        out.at(y, x, c) = static_cast<float>(acc);
      }
    }
  }
  return out;
}

Image crop(const Image& img, std::int64_t y, std::int64_t x, std::int64_t h, std::int64_t w) {
  if (y < 0 || x < 0 || h < 1 || w < 1 || y + h > img.height() || x + w > img.width()) {
    throw Error("crop [" + std::to_string(y) + "+" + std::to_string(h) + ", " +
                std::to_string(x) + "+" + std::to_string(w) + "] leaves a " +
                std::to_string(img.height()) + "x" + std::to_string(img.width()) + " image");
  }
  Image out(h, w);
  for (std::int64_t r = 0; r < h; ++r) {
    const auto src = img.data().begin() + (y + r) * img.width() * Image::kChannels +
                     x * Image::kChannels;
    std::copy(src, src + w * Image::kChannels,
              out.data().begin() + r * w * Image::kChannels);
  }
  return out;
}

Image flip_horizontal(const Image& img) {
  Image out(img.height(), img.width());
  for (std::int64_t y = 0; y < img.height(); ++y) {
    for (std::int64_t x = 0; x < img.width(); ++x) {
      for (std::int64_t c = 0; c < Image::kChannels; ++c) {
        out.at(y, img.width() - 1 - x, c) = img.at(y, x, c);
      }
    }
  }
  return out;
}

}  // namespace incnet
