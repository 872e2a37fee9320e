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


// Training-time augmentation and network input preparation.

#ifndef INCNET_AUGMENT_HPP_
#define INCNET_AUGMENT_HPP_

#include <array>
#include <span>

#include "incnet/image.hpp"
#include "incnet/random.hpp"
#include "incnet/tensor.hpp"

namespace incnet {

inline constexpr double kMinPatchArea = 0.08;
inline constexpr double kMaxPatchArea = 1.0;
inline constexpr double kMinAspect = 3.0 / 4.0;
inline constexpr double kMaxAspect = 4.0 / 3.0;
inline constexpr int kPatchAttempts = 10;

// A patch [y, y + h) x [x, x + w) of an image and how it is resized.
struct PatchSample {
  std::int64_t y = 0, x = 0, h = 0, w = 0;
  Interpolation method = Interpolation::kBilinear;
  bool fallback = false;
  // Drawn area fraction (before rounding to whole pixels).
  double area_fraction = 0.0;
};

// The largest centred square; used when no random patch fits.
PatchSample center_patch(std::int64_t height, std::int64_t width);

// Draws a patch whose area fraction is uniform in [0.08, 1] and whose
// aspect ratio w/h lies in [3/4, 4/3]. The aspect ratio is drawn uniformly
// from the part of [3/4, 4/3] for which a patch of the drawn area fits the
// image; if that part is empty the area is redrawn, up to 10 attempts, after
// which the centre square is used. The position is uniform over the valid
// offsets and the interpolation method uniform over the four.
PatchSample draw_train_patch(std::int64_t height, std::int64_t width, Rng& rng);

// Crops the given patch and resizes it to 224x224 with its method.
Image apply_patch(const Image& img, const PatchSample& sample);

// Draws a patch, crops it and resizes it to 224x224.
Image sample_train_patch(const Image& img, Rng& rng, PatchSample* sample = nullptr);

enum class Jitter { kBrightness, kContrast, kSaturation };

struct PhotometricFactors {
  double brightness = 1.0;
  double contrast = 1.0;
  double saturation = 1.0;
  std::array<Jitter, 3> order = {Jitter::kBrightness, Jitter::kContrast, Jitter::kSaturation};
};

// Range of the multiplicative jitter factors.
struct PhotometricConfig {
  double lo = 0.75;
  double hi = 1.25;
};

// Applies the jitters in the given order, then clamps to [0, 1].
// brightness: p * b; contrast: c * p + (1 - c) * mean luma of the image;
// saturation: s * p + (1 - s) * luma of the pixel (Rec. 601 weights).
Image photometric_distort(const Image& img, const PhotometricFactors& f);

// Draws the three factors uniformly from the configured range and a random
// application order.
PhotometricFactors draw_photometric_factors(Rng& rng, const PhotometricConfig& cfg = {});
Image photometric_distort(const Image& img, Rng& rng, const PhotometricConfig& cfg = {});

// Per-channel arithmetic mean over every pixel of every image.
std::array<double, 3> channel_mean(std::span<const Image> images);

// (1, 3, 224, 224) tensor of pixel - mean[channel]. Throws ShapeError if the
// image is not 224x224.
TensorF mean_subtract(const Image& img, const std::array<double, 3>& mean);

// Same without the size restriction: (1, 3, h, w).
TensorF image_to_tensor(const Image& img, const std::array<double, 3>& mean);

}  // namespace incnet

#endif  // INCNET_AUGMENT_HPP_
