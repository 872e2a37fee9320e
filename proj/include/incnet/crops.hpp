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


// Deterministic test-time crops.
//
// The image is resized so that its shorter side equals the crop scale. Along
// the longer side three squares are taken at offsets 0, floor((L - S) / 2)
// and L - S (left / centre / right, or top / centre / bottom for portrait
// images). From each square come the four 224x224 corners, the centre
// 224x224 crop and the whole square resized to 224x224, each also mirrored.

#ifndef INCNET_CROPS_HPP_
#define INCNET_CROPS_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "incnet/image.hpp"

namespace incnet {

inline constexpr std::int64_t kCropSize = 224;
inline constexpr std::array<std::int64_t, 4> kCropScales = {256, 288, 320, 352};

enum class SquarePos { kFirst, kCenter, kLast };
enum class SubCrop { kTopLeft, kTopRight, kBottomLeft, kBottomRight, kCenter, kFull };
enum class CropMode { kC1, kC10, kC144 };

const char* to_string(SquarePos s);
const char* to_string(SubCrop s);
const char* to_string(CropMode m);
std::optional<CropMode> parse_crop_mode(const std::string& s);
// Number of crops a mode emits per image (1, 10, 144).
std::int64_t crop_count(CropMode m);

struct CropSpec {
  std::int64_t scale = 256;
  SquarePos square = SquarePos::kCenter;
  SubCrop sub = SubCrop::kCenter;
  bool mirrored = false;
  friend bool operator==(const CropSpec&, const CropSpec&) = default;
};

// "{scale}_{square}_{sub}_{m|o}.ppm"
std::string crop_file_name(const CropSpec& spec);

// Where a crop comes from, in the coordinates of the rescaled image.
struct CropGeometry {
  std::int64_t resized_h = 0, resized_w = 0;
  std::int64_t square_y = 0, square_x = 0, square_size = 0;
  // Window inside the square; equals the whole square for SubCrop::kFull.
  std::int64_t sub_y = 0, sub_x = 0, sub_size = 0;
};

// Shorter side -> scale, longer side -> round(L * scale / shorter).
CropGeometry crop_geometry(std::int64_t height, std::int64_t width, const CropSpec& spec);

// Specs a mode emits, in order: scale, square, sub-crop, then unmirrored
// before mirrored. c10 is the four corners and centre of the centre square
// at scale 256, each mirrored; c1 is the unmirrored centre crop at 256.
std::vector<CropSpec> crop_specs(CropMode mode);

struct Crop {
  CropSpec spec;
  Image image;  // 224 x 224
};

// Rescaling uses bilinear interpolation; whole-square crops are reduced to
// 224x224 with area interpolation. Mirrored crops are exact flips of their
// unmirrored partners.
std::vector<Crop> enumerate_crops(const Image& img, CropMode mode);

}  // namespace incnet

#endif  // INCNET_CROPS_HPP_
