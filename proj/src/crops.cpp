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


#include "incnet/crops.hpp"

#include <cmath>
#include <map>

namespace incnet {

const char* to_string(SquarePos s) {
  switch (s) {
    case SquarePos::kFirst:
      return "first";
    case SquarePos::kCenter:
      return "center";
    case SquarePos::kLast:
      return "last";
  }
  return "?";
}

const char* to_string(SubCrop s) {
  switch (s) {
    case SubCrop::kTopLeft:
      return "tl";
    case SubCrop::kTopRight:
      return "tr";
    case SubCrop::kBottomLeft:
      return "bl";
    case SubCrop::kBottomRight:
      return "br";
    case SubCrop::kCenter:
      return "center";
    case SubCrop::kFull:
      return "full";
  }
  return "?";
}

const char* to_string(CropMode m) {
  switch (m) {
    case CropMode::kC1:
      return "c1";
    case CropMode::kC10:
      return "c10";
    case CropMode::kC144:
      return "c144";
  }
  return "?";
}

std::optional<CropMode> parse_crop_mode(const std::string& s) {
  if (s == "c1" || s == "1") return CropMode::kC1;
  if (s == "c10" || s == "10") return CropMode::kC10;
  if (s == "c144" || s == "144") return CropMode::kC144;
  return std::nullopt;
}

std::int64_t crop_count(CropMode m) {
  switch (m) {
    case CropMode::kC1:
      return 1;
    case CropMode::kC10:
      return 10;
    case CropMode::kC144:
      return 144;
  }
  return 0;
}

std::string crop_file_name(const CropSpec& spec) {
  return std::to_string(spec.scale) + "_" + to_string(spec.square) + "_" + to_string(spec.sub) +
         "_" + (spec.mirrored ? "m" : "o") + ".ppm";
}

CropGeometry crop_geometry(std::int64_t height, std::int64_t width, const CropSpec& spec) {
  if (height < 1 || width < 1) throw Error("crop_geometry: empty image");
  if (spec.scale < kCropSize) throw Error("crop scale must be >= 224");
  CropGeometry g;
  const std::int64_t shorter = std::min(height, width);
  const std::int64_t longer = std::max(height, width);
  const auto scaled_long = std::max<std::int64_t>(
      spec.scale, std::llround(static_cast<double>(longer) * static_cast<double>(spec.scale) /
                               static_cast<double>(shorter)));
  const bool portrait = height > width;
  g.resized_h = portrait ? scaled_long : spec.scale;
  g.resized_w = portrait ? spec.scale : scaled_long;
  g.square_size = spec.scale;
  const std::int64_t slack = scaled_long - spec.scale;
  const std::int64_t offset = spec.square == SquarePos::kFirst    ? 0
                              : spec.square == SquarePos::kCenter ? slack / 2
                                                                  : slack;
  (portrait ? g.square_y : g.square_x) = offset;

  const std::int64_t edge = spec.scale - kCropSize;
  g.sub_size = kCropSize;
  switch (spec.sub) {
    case SubCrop::kTopLeft:
      break;
    case SubCrop::kTopRight:
      g.sub_x = edge;
      break;
    case SubCrop::kBottomLeft:
      g.sub_y = edge;
      break;
    case SubCrop::kBottomRight:
      g.sub_y = edge;
      g.sub_x = edge;
      break;
    case SubCrop::kCenter:
      g.sub_y = edge / 2;
      g.sub_x = edge / 2;
      break;
    case SubCrop::kFull:
      g.sub_size = spec.scale;
      break;
  }
  return g;
}

std::vector<CropSpec> crop_specs(CropMode mode) {
  std::vector<CropSpec> out;
  switch (mode) {
    case CropMode::kC1:
      out.push_back({256, SquarePos::kCenter, SubCrop::kCenter, false});
      break;
    case CropMode::kC10:
      for (SubCrop sub : {SubCrop::kTopLeft, SubCrop::kTopRight, SubCrop::kBottomLeft,
                          SubCrop::kBottomRight, SubCrop::kCenter}) {
        for (bool m : {false, true}) out.push_back({256, SquarePos::kCenter, sub, m});
      }
      break;
    case CropMode::kC144:
      for (std::int64_t scale : kCropScales) {
        for (SquarePos sq : {SquarePos::kFirst, SquarePos::kCenter, SquarePos::kLast}) {
          for (SubCrop sub : {SubCrop::kTopLeft, SubCrop::kTopRight, SubCrop::kBottomLeft,
                              SubCrop::kBottomRight, SubCrop::kCenter, SubCrop::kFull}) {
            for (bool m : {false, true}) out.push_back({scale, sq, sub, m});
          }
        }
      }
      break;
  }
  return out;
}

std::vector<Crop> enumerate_crops(const Image& img, CropMode mode) {
  if (img.empty()) throw Error("enumerate_crops: empty image");
  const std::vector<CropSpec> specs = crop_specs(mode);
  std::map<std::int64_t, Image> rescaled;
  std::vector<Crop> out;
  out.reserve(specs.size());
  for (const CropSpec& spec : specs) {
    // A mirrored crop directly follows its unmirrored partner.
    if (spec.mirrored && !out.empty() && !out.back().spec.mirrored) {
      CropSpec partner = spec;
      partner.mirrored = false;
      if (out.back().spec == partner) {
        out.push_back({spec, flip_horizontal(out.back().image)});
        continue;
      }
    }
    const CropGeometry g = crop_geometry(img.height(), img.width(), spec);
    auto it = rescaled.find(spec.scale);
    if (it == rescaled.end()) {
      it = rescaled
               .emplace(spec.scale,
                        resize(img, g.resized_h, g.resized_w, Interpolation::kBilinear))
               .first;
    }
    Image window = crop(it->second, g.square_y + g.sub_y, g.square_x + g.sub_x, g.sub_size,
                        g.sub_size);
    if (spec.sub == SubCrop::kFull) {
      window = resize(window, kCropSize, kCropSize, Interpolation::kArea);
    }
    if (spec.mirrored) window = flip_horizontal(window);
    out.push_back({spec, std::move(window)});
  }
  return out;
}

}  // namespace incnet
