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


#include "incnet/augment.hpp"

#include <algorithm>
#include <cmath>

#include "incnet/crops.hpp"

namespace incnet {

PatchSample center_patch(std::int64_t height, std::int64_t width) {
  PatchSample p;
  const std::int64_t side = std::min(height, width);
  p.h = side;
  p.w = side;
  p.y = (height - side) / 2;
  p.x = (width - side) / 2;
  p.fallback = true;
  p.area_fraction = static_cast<double>(side * side) / static_cast<double>(height * width);
  return p;
}

PatchSample draw_train_patch(std::int64_t height, std::int64_t width, Rng& rng) {
  if (height < 1 || width < 1) throw Error("draw_train_patch: empty image");
  const double H = static_cast<double>(height);
  const double W = static_cast<double>(width);
  PatchSample p;
  p.method = kAllInterpolations[rng.below(kAllInterpolations.size())];
  for (int attempt = 0; attempt < kPatchAttempts; ++attempt) {
    const double fraction = rng.uniform(kMinPatchArea, kMaxPatchArea);
    const double area = fraction * H * W;
    // w = sqrt(area * r) <= W and h = sqrt(area / r) <= H bound the aspect r.
    const double lo = std::max(kMinAspect, area / (H * H));
    const double hi = std::min(kMaxAspect, W * W / area);
    if (lo > hi) continue;
    const double aspect = rng.uniform(lo, hi);
    std::int64_t w = std::clamp<std::int64_t>(std::llround(std::sqrt(area * aspect)), 1, width);
    std::int64_t h = std::clamp<std::int64_t>(std::llround(std::sqrt(area / aspect)), 1, height);
    // Rounding may push the ratio just past the bounds; shrink the long side.
    if (static_cast<double>(w) > kMaxAspect * static_cast<double>(h)) {
      w = std::max<std::int64_t>(1, static_cast<std::int64_t>(kMaxAspect * static_cast<double>(h)));
    }
    if (static_cast<double>(h) > static_cast<double>(w) / kMinAspect) {
      h = std::max<std::int64_t>(1, static_cast<std::int64_t>(static_cast<double>(w) / kMinAspect));
    }
    p.h = h;
    p.w = w;
    p.y = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(height - h + 1)));
    p.x = static_cast<std::int64_t>(rng.below(static_cast<std::uint64_t>(width - w + 1)));
    p.area_fraction = fraction;
    return p;
  }
  const Interpolation method = p.method;
  p = center_patch(height, width);
  p.method = method;
  return p;
}

Image apply_patch(const Image& img, const PatchSample& p) {
  return resize(crop(img, p.y, p.x, p.h, p.w), kCropSize, kCropSize, p.method);
}

Image sample_train_patch(const Image& img, Rng& rng, PatchSample* sample) {
  const PatchSample p = draw_train_patch(img.height(), img.width(), rng);
  if (sample) *sample = p;
  return apply_patch(img, p);
}

namespace {

double luma(float r, float g, float b) { return 0.299 * r + 0.587 * g + 0.114 * b; }

void apply(Image& img, Jitter j, const PhotometricFactors& f) {
  auto& d = img.data();
  switch (j) {
    case Jitter::kBrightness: {
      const auto b = static_cast<float>(f.brightness);
      for (float& v : d) v *= b;
      break;
    }
    case Jitter::kContrast: {
      double mean = 0;
      for (std::size_t i = 0; i < d.size(); i += 3) mean += luma(d[i], d[i + 1], d[i + 2]);
      mean /= static_cast<double>(d.size() / 3);
      const auto c = static_cast<float>(f.contrast);
      const auto offset = static_cast<float>((1.0 - f.contrast) * mean);
      for (float& v : d) v = c * v + offset;
      break;
    }
    case Jitter::kSaturation: {
      const auto s = static_cast<float>(f.saturation);
      const auto rest = static_cast<float>(1.0 - f.saturation);
      for (std::size_t i = 0; i < d.size(); i += 3) {
        const auto gray = static_cast<float>(luma(d[i], d[i + 1], d[i + 2]));
        for (std::size_t c = 0; c < 3; ++c) d[i + c] = s * d[i + c] + rest * gray;
      }
      break;
    }
  }
}

}  // namespace

Image photometric_distort(const Image& img, const PhotometricFactors& f) {
  Image out = img;
  for (Jitter j : f.order) apply(out, j, f);
  for (float& v : out.data()) v = std::clamp(v, 0.0f, 1.0f);
  return out;
}

PhotometricFactors draw_photometric_factors(Rng& rng, const PhotometricConfig& cfg) {
  if (!(cfg.lo > 0) || cfg.hi < cfg.lo) throw Error("photometric range must satisfy 0 < lo <= hi");
  PhotometricFactors f;
  f.brightness = rng.uniform(cfg.lo, cfg.hi);
  f.contrast = rng.uniform(cfg.lo, cfg.hi);
  f.saturation = rng.uniform(cfg.lo, cfg.hi);
  for (std::size_t i = f.order.size(); i > 1; --i) std::swap(f.order[i - 1], f.order[rng.below(i)]);
  return f;
}

Image photometric_distort(const Image& img, Rng& rng, const PhotometricConfig& cfg) {
  return photometric_distort(img, draw_photometric_factors(rng, cfg));
}

std::array<double, 3> channel_mean(std::span<const Image> images) {
  std::array<double, 3> sum{0, 0, 0};
  double count = 0;
  for (const Image& img : images) {
    const auto& d = img.data();
    for (std::size_t i = 0; i < d.size(); i += 3) {
      for (std::size_t c = 0; c < 3; ++c) sum[c] += d[i + c];
    }
    count += static_cast<double>(d.size() / 3);
  }
  if (count == 0) throw Error("channel_mean: no pixels");
  for (double& s : sum) s /= count;
  return sum;
}

TensorF image_to_tensor(const Image& img, const std::array<double, 3>& mean) {
  TensorF t(Shape{1, 3, img.height(), img.width()});
  for (std::int64_t c = 0; c < 3; ++c) {
    const auto m = static_cast<float>(mean[static_cast<std::size_t>(c)]);
    for (std::int64_t y = 0; y < img.height(); ++y) {
      for (std::int64_t x = 0; x < img.width(); ++x) t.at(0, c, y, x) = img.at(y, x, c) - m;
    }
  }
  return t;
}

TensorF mean_subtract(const Image& img, const std::array<double, 3>& mean) {
  if (img.height() != kCropSize) throw ShapeError("height", kCropSize, img.height(), "network input image");
  if (img.width() != kCropSize) throw ShapeError("width", kCropSize, img.width(), "network input image");
  return image_to_tensor(img, mean);
}

}  // namespace incnet
