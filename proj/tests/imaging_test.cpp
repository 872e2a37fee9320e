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


#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "incnet/augment.hpp"
#include "incnet/crops.hpp"
#include "incnet/image.hpp"
#include "incnet/random.hpp"

namespace incnet {
namespace {

Image random_image(std::int64_t h, std::int64_t w, std::uint64_t seed) {
  Rng rng(seed);
  Image img(h, w);
  for (float& v : img.data()) v = static_cast<float>(rng.uniform());
  return img;
}

// ---------------------------------------------------------------- PPM

TEST(PpmTest, RoundTripOfEightBitValues) {
  Image img(3, 5);
  for (std::size_t i = 0; i < img.data().size(); ++i) {
    img.data()[i] = static_cast<float>((i * 37) % 256) / 255.0f;
  }
  EXPECT_EQ(decode_ppm(encode_ppm(img)), img);
}

TEST(PpmTest, HeaderCommentsAreSkipped) {
  const std::string bytes = std::string("P6\n# comment\n1 1\n255\n") + '\xff' + '\x00' + '\x80';
  const Image img = decode_ppm(bytes);
  ASSERT_EQ(img.height(), 1);
  ASSERT_EQ(img.width(), 1);
  EXPECT_FLOAT_EQ(img.at(0, 0, 0), 1.0f);
  EXPECT_FLOAT_EQ(img.at(0, 0, 1), 0.0f);
  EXPECT_FLOAT_EQ(img.at(0, 0, 2), 128.0f / 255.0f);
}

TEST(PpmTest, MalformedInputThrows) {
  EXPECT_THROW(decode_ppm("P3\n1 1\n255\n"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n2 2\n255\nabc"), FormatError);
  EXPECT_THROW(decode_ppm("P6\n1 1\n65535\n123456"), FormatError);
}

// ---------------------------------------------------------------- resize

TEST(ResizeTest, SameSizeNearestIsIdentity) {
  const Image img = random_image(7, 9, 1);
  EXPECT_EQ(resize(img, 7, 9, Interpolation::kNearest), img);
}

TEST(ResizeTest, AreaOfTwoByTwoIsMean) {
  // Rows [0, 0] and [1, 1] in every channel.
  Image img(2, 2, std::vector<float>{0, 0, 0, 0, 0, 0, 1, 1, 1, 1, 1, 1});
  const Image out = resize(img, 1, 1, Interpolation::kArea);
  for (int c = 0; c < 3; ++c) EXPECT_FLOAT_EQ(out.at(0, 0, c), 0.5f);
}

TEST(ResizeTest, ConstantImageStaysConstantUnderEveryMethod) {
  const Image img(13, 17, 0.7f);
  for (Interpolation m : kAllInterpolations) {
    for (auto [h, w] : {std::pair{5, 6}, std::pair{13, 17}, std::pair{31, 40}}) {
      const Image out = resize(img, h, w, m);
      ASSERT_EQ(out.height(), h);
      ASSERT_EQ(out.width(), w);
      for (float v : out.data()) ASSERT_NEAR(v, 0.7f, 1e-6f) << to_string(m);
    }
  }
}

TEST(ResizeTest, NearestUpsamplingReplicatesPixels) {
  Image img(1, 2, std::vector<float>{0, 0, 0, 1, 1, 1});
  const Image out = resize(img, 1, 4, Interpolation::kNearest);
  const std::vector<float> row{0, 0, 1, 1};
  for (int x = 0; x < 4; ++x) EXPECT_EQ(out.at(0, x, 0), row[static_cast<std::size_t>(x)]);
}

TEST(ResizeTest, BilinearUsesHalfPixelCentres) {
  // Source pixel centres sit at 0.5 and 1.5; output centres at 0.25 .. 1.75
  // map back to -0.25, 0.25, 0.75, 1.25 (clamped at the borders).
  Image img(1, 2, std::vector<float>{0, 0, 0, 1, 1, 1});
  const Image out = resize(img, 1, 4, Interpolation::kBilinear);
  const std::vector<float> row{0.0f, 0.25f, 0.75f, 1.0f};
  for (int x = 0; x < 4; ++x) EXPECT_NEAR(out.at(0, x, 0), row[static_cast<std::size_t>(x)], 1e-6f);
}

TEST(ResizeTest, ParseInterpolationNames) {
  for (Interpolation m : kAllInterpolations) EXPECT_EQ(parse_interpolation(to_string(m)), m);
  EXPECT_FALSE(parse_interpolation("lanczos").has_value());
}

// ---------------------------------------------------------------- crops

void expect_valid_c144(const Image& img) {
  const auto crops = enumerate_crops(img, CropMode::kC144);
  ASSERT_EQ(crops.size(), 144u);
  std::set<std::string> names;
  for (std::size_t i = 0; i < crops.size(); ++i) {
    const Crop& c = crops[i];
    ASSERT_EQ(c.image.height(), kCropSize);
    ASSERT_EQ(c.image.width(), kCropSize);
    ASSERT_EQ(c.image.data().size(), static_cast<std::size_t>(kCropSize * kCropSize * 3));
    names.insert(crop_file_name(c.spec));
    if (c.spec.mirrored) {
      ASSERT_GT(i, 0u);
      CropSpec partner = c.spec;
      partner.mirrored = false;
      ASSERT_EQ(crops[i - 1].spec, partner);
      ASSERT_EQ(c.image, flip_horizontal(crops[i - 1].image)) << crop_file_name(c.spec);
    }
  }
  EXPECT_EQ(names.size(), 144u);
}

TEST(CropsTest, LandscapeYields144Crops) { expect_valid_c144(random_image(240, 320, 2)); }
TEST(CropsTest, PortraitYields144Crops) { expect_valid_c144(random_image(330, 250, 3)); }
TEST(CropsTest, SquareYields144Crops) { expect_valid_c144(random_image(260, 260, 4)); }
TEST(CropsTest, TinyImageYields144Crops) { expect_valid_c144(random_image(1, 1, 5)); }

TEST(CropsTest, SquareImageEmitsThreeIdenticalSquares) {
  const auto crops = enumerate_crops(random_image(100, 100, 6), CropMode::kC144);
  for (const Crop& c : crops) {
    if (c.spec.square != SquarePos::kFirst) continue;
    for (SquarePos other : {SquarePos::kCenter, SquarePos::kLast}) {
      CropSpec spec = c.spec;
      spec.square = other;
      const auto it = std::find_if(crops.begin(), crops.end(),
                                   [&](const Crop& d) { return d.spec == spec; });
      ASSERT_NE(it, crops.end());
      EXPECT_EQ(it->image, c.image);
    }
  }
}

TEST(CropsTest, OrderIsScaleSquareSubMirror) {
  const auto specs = crop_specs(CropMode::kC144);
  ASSERT_EQ(specs.size(), 144u);
  std::size_t i = 0;
  for (std::int64_t scale : kCropScales) {
    for (SquarePos sq : {SquarePos::kFirst, SquarePos::kCenter, SquarePos::kLast}) {
      for (SubCrop sub : {SubCrop::kTopLeft, SubCrop::kTopRight, SubCrop::kBottomLeft,
                          SubCrop::kBottomRight, SubCrop::kCenter, SubCrop::kFull}) {
        for (bool m : {false, true}) {
          EXPECT_EQ(specs[i], (CropSpec{scale, sq, sub, m})) << i;
          ++i;
        }
      }
    }
  }
}

TEST(CropsTest, TwoRunsAreBitwiseIdentical) {
  const Image img = random_image(250, 300, 7);
  const auto a = enumerate_crops(img, CropMode::kC144);
  const auto b = enumerate_crops(img, CropMode::kC144);
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].spec, b[i].spec);
    EXPECT_EQ(a[i].image, b[i].image);
  }
}

TEST(CropsTest, TenAndOneCropModes) {
  const Image img = random_image(240, 300, 8);
  const auto c10 = enumerate_crops(img, CropMode::kC10);
  ASSERT_EQ(c10.size(), 10u);
  for (const Crop& c : c10) {
    EXPECT_EQ(c.spec.scale, 256);
    EXPECT_EQ(c.spec.square, SquarePos::kCenter);
    EXPECT_NE(c.spec.sub, SubCrop::kFull);
    EXPECT_EQ(c.image.height(), kCropSize);
  }
  const auto c1 = enumerate_crops(img, CropMode::kC1);
  ASSERT_EQ(c1.size(), 1u);
  EXPECT_EQ(c1[0].spec, (CropSpec{256, SquarePos::kCenter, SubCrop::kCenter, false}));
  EXPECT_EQ(crop_count(CropMode::kC1), 1);
  EXPECT_EQ(crop_count(CropMode::kC10), 10);
  EXPECT_EQ(crop_count(CropMode::kC144), 144);
}

TEST(CropsTest, PortraitSquaresTileVertically) {
  for (auto [h, w] : {std::pair<std::int64_t, std::int64_t>{400, 300}, {1000, 257}, {301, 300}}) {
    for (std::int64_t scale : kCropScales) {
      const auto first = crop_geometry(h, w, {scale, SquarePos::kFirst, SubCrop::kFull, false});
      const auto last = crop_geometry(h, w, {scale, SquarePos::kLast, SubCrop::kFull, false});
      const auto mid = crop_geometry(h, w, {scale, SquarePos::kCenter, SubCrop::kFull, false});
      EXPECT_EQ(first.resized_w, scale);
      EXPECT_GT(first.resized_h, scale);
      EXPECT_EQ(first.square_size, scale);
      EXPECT_EQ(first.square_y, 0);
      EXPECT_EQ(first.square_x, 0);
      EXPECT_EQ(last.square_y + last.square_size, last.resized_h);
      EXPECT_EQ(mid.square_y, (mid.resized_h - scale) / 2);
    }
  }
}

TEST(CropsTest, LandscapeSquaresSpanWidth) {
  const auto first = crop_geometry(300, 400, {256, SquarePos::kFirst, SubCrop::kCenter, false});
  const auto last = crop_geometry(300, 400, {256, SquarePos::kLast, SubCrop::kCenter, false});
  EXPECT_EQ(first.resized_h, 256);
  EXPECT_EQ(first.resized_w, 341);
  EXPECT_EQ(first.square_x, 0);
  EXPECT_EQ(last.square_x + 256, 341);
  EXPECT_EQ(last.sub_y, (256 - 224) / 2);
  EXPECT_EQ(last.sub_size, 224);
}

TEST(CropsTest, FileNames) {
  EXPECT_EQ(crop_file_name({288, SquarePos::kLast, SubCrop::kBottomRight, true}),
            "288_last_br_m.ppm");
  EXPECT_EQ(crop_file_name({256, SquarePos::kCenter, SubCrop::kFull, false}),
            "256_center_full_o.ppm");
  EXPECT_EQ(parse_crop_mode("c144"), CropMode::kC144);
  EXPECT_EQ(parse_crop_mode("10"), CropMode::kC10);
  EXPECT_FALSE(parse_crop_mode("c7").has_value());
}

// ---------------------------------------------------------------- train patches

TEST(TrainPatchTest, AreaFractionMeanOver1e5Draws) {
  Rng rng(2026);
  double sum = 0;
  constexpr int kDraws = 100000;
  for (int i = 0; i < kDraws; ++i) {
    const PatchSample p = draw_train_patch(500, 500, rng);
    sum += static_cast<double>(p.h * p.w) / (500.0 * 500.0);
  }
  const double mean = sum / kDraws;
  EXPECT_NEAR(mean, 0.54, 0.02 * 0.54) << "mean " << mean;
}

TEST(TrainPatchTest, AreaFractionPassesKolmogorovSmirnov) {
  constexpr int kN = 10000;
  std::vector<double> f;
  f.reserve(kN);
  // One draw per seed so that the test covers independent generator streams.
  for (int s = 0; s < kN; ++s) {
    Rng rng(derive_seed(99, std::to_string(s)));
    const PatchSample p = draw_train_patch(500, 500, rng);
    f.push_back(static_cast<double>(p.h * p.w) / (500.0 * 500.0));
  }
  std::sort(f.begin(), f.end());
  double d = 0;
  for (int i = 0; i < kN; ++i) {
    const double cdf = std::clamp((f[static_cast<std::size_t>(i)] - 0.08) / 0.92, 0.0, 1.0);
    d = std::max({d, static_cast<double>(i + 1) / kN - cdf, cdf - static_cast<double>(i) / kN});
  }
  // Asymptotic critical value at significance 0.01: 1.628 / sqrt(n).
  EXPECT_LT(d, 1.628 / std::sqrt(static_cast<double>(kN))) << "D = " << d;
}

TEST(TrainPatchTest, AspectRatioAndBoundsHold) {
  Rng rng(5);
  for (auto [h, w] : {std::pair<std::int64_t, std::int64_t>{500, 500}, {300, 800}, {900, 240}, {224, 224}}) {
    int accepted = 0;
    for (int i = 0; i < 5000; ++i) {
      const PatchSample p = draw_train_patch(h, w, rng);
      ASSERT_GE(p.h, 1);
      ASSERT_GE(p.w, 1);
      ASSERT_GE(p.y, 0);
      ASSERT_GE(p.x, 0);
      ASSERT_LE(p.y + p.h, h);
      ASSERT_LE(p.x + p.w, w);
      if (p.fallback) continue;
      ++accepted;
      const double aspect = static_cast<double>(p.w) / static_cast<double>(p.h);
      ASSERT_GE(aspect, kMinAspect - 1e-12) << p.w << "x" << p.h;
      ASSERT_LE(aspect, kMaxAspect + 1e-12) << p.w << "x" << p.h;
    }
    EXPECT_GT(accepted, 0);
  }
}

TEST(TrainPatchTest, FallbackOnFullFrameYieldsImageItself) {
  const Image img = random_image(224, 224, 9);
  const PatchSample p = center_patch(224, 224);
  EXPECT_TRUE(p.fallback);
  EXPECT_EQ(p.h, 224);
  EXPECT_EQ(p.w, 224);
  EXPECT_DOUBLE_EQ(p.area_fraction, 1.0);
  for (Interpolation m : kAllInterpolations) {
    PatchSample q = p;
    q.method = m;
    EXPECT_EQ(apply_patch(img, q), img) << to_string(m);
  }
}

TEST(TrainPatchTest, CentrePatchIsLargestCentredSquare) {
  const PatchSample p = center_patch(300, 500);
  EXPECT_EQ(p.h, 300);
  EXPECT_EQ(p.w, 300);
  EXPECT_EQ(p.y, 0);
  EXPECT_EQ(p.x, 100);
}

TEST(TrainPatchTest, OutputIs224AndSeedReproducible) {
  const Image img = random_image(120, 160, 10);
  Rng a(42), b(42), c(43);
  const Image x = sample_train_patch(img, a);
  EXPECT_EQ(x.height(), kCropSize);
  EXPECT_EQ(x.width(), kCropSize);
  EXPECT_EQ(x, sample_train_patch(img, b));
  EXPECT_NE(x, sample_train_patch(img, c));
}

TEST(TrainPatchTest, AllInterpolationMethodsAreDrawn) {
  Rng rng(11);
  std::array<int, 4> counts{};
  for (int i = 0; i < 4000; ++i) counts[static_cast<std::size_t>(draw_train_patch(300, 300, rng).method)]++;
  for (int n : counts) EXPECT_NEAR(n, 1000, 150);
}

// ---------------------------------------------------------------- photometric

TEST(PhotometricTest, UnitFactorsAreIdentity) {
  const Image img = random_image(9, 11, 12);
  EXPECT_EQ(photometric_distort(img, PhotometricFactors{}), img);
}

TEST(PhotometricTest, BrightnessHalvesConstantImage) {
  PhotometricFactors f;
  f.brightness = 0.5;
  const Image out = photometric_distort(Image(4, 4, 0.8f), f);
  for (float v : out.data()) EXPECT_FLOAT_EQ(v, 0.4f);
}

TEST(PhotometricTest, ContrastAndSaturationFixGrey) {
  // A grey image is a fixed point of both contrast and saturation jitter.
  PhotometricFactors f;
  f.contrast = 1.2;
  f.saturation = 0.8;
  const Image out = photometric_distort(Image(3, 3, 0.5f), f);
  for (float v : out.data()) EXPECT_NEAR(v, 0.5f, 1e-6f);
}

TEST(PhotometricTest, SaturationZeroGivesLuma) {
  PhotometricFactors f;
  f.saturation = 0.0;
  const Image img(1, 1, std::vector<float>{1.0f, 0.0f, 0.0f});
  const Image out = photometric_distort(img, f);
  for (int c = 0; c < 3; ++c) EXPECT_NEAR(out.at(0, 0, c), 0.299f, 1e-6f);
}

TEST(PhotometricTest, OutputAlwaysInUnitInterval) {
  Rng rng(13);
  const Image img = random_image(16, 16, 14);
  PhotometricConfig wide{0.1, 3.0};
  for (int i = 0; i < 200; ++i) {
    const Image out = photometric_distort(img, rng, wide);
    for (float v : out.data()) {
      ASSERT_GE(v, 0.0f);
      ASSERT_LE(v, 1.0f);
    }
  }
}

TEST(PhotometricTest, DrawnFactorsInRangeWithPermutedOrder) {
  Rng rng(15);
  std::set<std::array<Jitter, 3>> orders;
  for (int i = 0; i < 500; ++i) {
    const PhotometricFactors f = draw_photometric_factors(rng);
    for (double v : {f.brightness, f.contrast, f.saturation}) {
      ASSERT_GE(v, 0.75);
      ASSERT_LE(v, 1.25);
    }
    auto sorted = f.order;
    std::sort(sorted.begin(), sorted.end());
    ASSERT_EQ(sorted, (std::array<Jitter, 3>{Jitter::kBrightness, Jitter::kContrast, Jitter::kSaturation}));
    orders.insert(f.order);
  }
  EXPECT_EQ(orders.size(), 6u);
}

// ---------------------------------------------------------------- mean subtraction

TEST(MeanSubtractTest, ZeroMeanCopiesImage) {
  const Image img = random_image(224, 224, 16);
  const TensorF t = mean_subtract(img, {0, 0, 0});
  EXPECT_EQ(t.shape(), (Shape{1, 3, 224, 224}));
  for (std::int64_t c = 0; c < 3; ++c) {
    for (std::int64_t y = 0; y < 224; y += 17) {
      for (std::int64_t x = 0; x < 224; x += 13) EXPECT_EQ(t.at(0, c, y, x), img.at(y, x, c));
    }
  }
}

TEST(MeanSubtractTest, ConstantImageMinusItsMeanIsZero) {
  const TensorF t = mean_subtract(Image(224, 224, 0.5f), {0.5, 0.5, 0.5});
  for (float v : t.data()) ASSERT_EQ(v, 0.0f);
}

TEST(MeanSubtractTest, WrongSizeThrows) {
  EXPECT_THROW(mean_subtract(Image(223, 224), {0, 0, 0}), ShapeError);
  EXPECT_THROW(mean_subtract(Image(224, 225), {0, 0, 0}), ShapeError);
}

TEST(MeanSubtractTest, DatasetMeanMatchesBruteForce) {
  const std::vector<Image> fixture{random_image(4, 5, 17), random_image(6, 3, 18), Image(2, 2, 0.25f)};
  std::array<double, 3> expected{0, 0, 0};
  double n = 0;
  for (const Image& img : fixture) {
    for (std::int64_t y = 0; y < img.height(); ++y) {
      for (std::int64_t x = 0; x < img.width(); ++x) {
        for (int c = 0; c < 3; ++c) expected[static_cast<std::size_t>(c)] += img.at(y, x, c);
        n += 1;
      }
    }
  }
  const auto mean = channel_mean(fixture);
  for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(mean[c], expected[c] / n, 1e-12);
}

}  // namespace
}  // namespace incnet
