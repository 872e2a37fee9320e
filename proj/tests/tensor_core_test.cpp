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

#include <cmath>
#include <numeric>

#include "incnet/ops.hpp"
#include "incnet/tensor_io.hpp"
#include "reference.hpp"

namespace incnet {
namespace {

using testing::max_rel_diff;
using testing::random_tensor;
using testing::reference_conv2d;

ConvParams<float> conv_params(Shape w, int stride, int pad, Rng& rng) {
  return {random_tensor<float>(w, rng), random_tensor<float>(Shape{1, w.n, 1, 1}, rng), stride,
          pad};
}

TEST(Conv2dTest, StemShape) {
  Rng rng(1);
  TensorF x(Shape{1, 3, 224, 224}, 0.5f);
  auto y = conv2d(x, conv_params(Shape{64, 3, 7, 7}, 2, 3, rng));
  EXPECT_EQ(y.shape(), (Shape{1, 64, 112, 112}));
}

TEST(Conv2dTest, IdentityOneByOne) {
  Rng rng(2);
  const std::int64_t c = 5;
  TensorF x = random_tensor<float>(Shape{2, c, 4, 3}, rng);
  TensorF w(Shape{c, c, 1, 1});
  for (std::int64_t o = 0; o < c; ++o) w.at(o, o, 0, 0) = 1.0f;
  auto y = conv2d(x, ConvParams<float>{w, TensorF(Shape{1, c, 1, 1}), 1, 0});
  EXPECT_EQ(y, x);
}

TEST(Conv2dTest, HandSummedWindows) {
  TensorF x(Shape{1, 1, 3, 3}, {1, 2, 3, 4, 5, 6, 7, 8, 9});
  TensorF w(Shape{1, 1, 2, 2}, 1.0f);
  auto y = conv2d(x, ConvParams<float>{w, TensorF(Shape{1, 1, 1, 1}), 1, 0});
  EXPECT_EQ(y, TensorF(Shape{1, 1, 2, 2}, {12, 16, 24, 28}));
}

TEST(Conv2dTest, ChannelMismatchNamesDimension) {
  TensorF x(Shape{1, 3, 8, 8});
  ConvParams<float> p{TensorF(Shape{4, 2, 3, 3}), TensorF(Shape{1, 4, 1, 1}), 1, 1};
  try {
    conv2d(x, p);
    FAIL() << "expected ShapeError";
  } catch (const ShapeError& e) {
    EXPECT_EQ(e.dimension(), "channels");
    EXPECT_EQ(e.expected(), 2);
    EXPECT_EQ(e.actual(), 3);
  }
}

TEST(Conv2dTest, NonPositiveOutputIsError) {
  TensorF x(Shape{1, 1, 2, 2});
  ConvParams<float> p{TensorF(Shape{1, 1, 5, 5}), TensorF(Shape{1, 1, 1, 1}), 1, 1};
  EXPECT_THROW(conv2d(x, p), ShapeError);
}

TEST(Conv2dTest, PaddingMustBeBelowKernel) {
  TensorF x(Shape{1, 1, 4, 4});
  ConvParams<float> p{TensorF(Shape{1, 1, 3, 3}), TensorF(Shape{1, 1, 1, 1}), 1, 3};
  EXPECT_THROW(conv2d(x, p), Error);
}

TEST(Conv2dTest, InputUnmodified) {
  Rng rng(3);
  TensorF x = random_tensor<float>(Shape{1, 2, 5, 5}, rng);
  const TensorF before = x;
  conv2d(x, conv_params(Shape{3, 2, 3, 3}, 1, 1, rng));
  EXPECT_EQ(x, before);
}

// Stride 1 with (k-1)/2 padding keeps the spatial extent for every odd k.
TEST(Conv2dProperty, SamePaddingPreservesExtent) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const int k = 1 + 2 * static_cast<int>(rng.below(4));
    const std::int64_t h = k + static_cast<std::int64_t>(rng.below(12));
    const std::int64_t w = k + static_cast<std::int64_t>(rng.below(12));
    TensorF x(Shape{1, 2, h, w}, 1.0f);
    auto y = conv2d(x, conv_params(Shape{3, 2, k, k}, 1, (k - 1) / 2, rng));
    EXPECT_EQ(y.shape().h, h) << "k=" << k;
    EXPECT_EQ(y.shape().w, w) << "k=" << k;
  }
}

TEST(Conv2dProperty, MatchesDirectLoopsFp64) {
  Rng rng(5);
  for (int trial = 0; trial < 25; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(5));
    const int stride = 1 + static_cast<int>(rng.below(3));
    const int pad = static_cast<int>(rng.below(static_cast<std::uint64_t>(k)));
    const Shape xs{1 + static_cast<std::int64_t>(rng.below(2)),
                   1 + static_cast<std::int64_t>(rng.below(8)),
                   k + static_cast<std::int64_t>(rng.below(16 - k + 1)),
                   k + static_cast<std::int64_t>(rng.below(16 - k + 1))};
    const Shape ws{1 + static_cast<std::int64_t>(rng.below(8)), xs.c, k, k};
    TensorD x = random_tensor<double>(xs, rng);
    TensorD w = random_tensor<double>(ws, rng);
    TensorD b = random_tensor<double>(Shape{1, ws.n, 1, 1}, rng);
    auto got = conv2d(x, ConvParams<double>{w, b, stride, pad});
    auto want = reference_conv2d(x, w, b, stride, pad);
    ASSERT_EQ(got.shape(), want.shape());
    EXPECT_LT(max_rel_diff(got, want), 1e-12);
  }
}

TEST(Conv2dBackwardTest, BiasGradientIsSpatialSum) {
  Rng rng(6);
  TensorD x = random_tensor<double>(Shape{2, 3, 6, 6}, rng);
  ConvParams<double> p{random_tensor<double>(Shape{4, 3, 3, 3}, rng), TensorD(Shape{1, 4, 1, 1}),
                       2, 1};
  TensorD dy(Shape{2, 4, 3, 3}, 1.0);
  auto g = conv2d_backward(x, p, dy);
  for (std::int64_t o = 0; o < 4; ++o) EXPECT_DOUBLE_EQ(g.bias[o], 18.0);
}

TEST(Pool2dTest, TableShapes) {
  TensorF a(Shape{1, 64, 112, 112});
  EXPECT_EQ(pool2d(a, {PoolKind::kMax, 3, 2, 0, true}).shape(), (Shape{1, 64, 56, 56}));
  TensorF b(Shape{1, 1024, 7, 7});
  EXPECT_EQ(pool2d(b, {PoolKind::kAvg, 7, 1, 0, false}).shape(), (Shape{1, 1024, 1, 1}));
}

TEST(Pool2dTest, MaxOfAll) {
  TensorF x(Shape{1, 1, 2, 2}, {1, 2, 3, 4});
  EXPECT_EQ(pool2d(x, {PoolKind::kMax, 2, 2, 0, false}), TensorF(Shape{1, 1, 1, 1}, 4.0f));
}

TEST(Pool2dTest, WindowLargerThanInput) {
  TensorF x(Shape{1, 1, 2, 2});
  EXPECT_THROW(pool2d(x, {PoolKind::kMax, 3, 1, 0, false}), ShapeError);
}

TEST(Pool2dTest, CeilModeMaxIgnoresOverhang) {
  // 4x4 -> 3x3/2 ceil -> 2x2; the last window covers rows/cols 2..3 only.
  TensorF x(Shape{1, 1, 4, 4});
  std::iota(x.data().begin(), x.data().end(), -16.0f);
  auto y = pool2d(x, {PoolKind::kMax, 3, 2, 0, true});
  EXPECT_EQ(y, TensorF(Shape{1, 1, 2, 2}, {-6, -5, -2, -1}));
}

TEST(Pool2dProperty, AvgOfConstantIsConstant) {
  Rng rng(7);
  for (int trial = 0; trial < 30; ++trial) {
    const int k = 1 + static_cast<int>(rng.below(4));
    const int stride = 1 + static_cast<int>(rng.below(3));
    const int pad = static_cast<int>(rng.below(static_cast<std::uint64_t>(k / 2 + 1)));
    const std::int64_t h = k + static_cast<std::int64_t>(rng.below(9));
    TensorD x(Shape{1, 2, h, h + 1}, 0.375);
    auto y = pool2d(x, {PoolKind::kAvg, k, stride, pad, rng.below(2) == 1});
    for (double v : y.data()) EXPECT_DOUBLE_EQ(v, 0.375);
  }
}

TEST(ReluTest, Basics) {
  TensorF x(Shape{1, 3, 1, 1}, {-1, 0, 2});
  EXPECT_EQ(relu(x), TensorF(Shape{1, 3, 1, 1}, {0, 0, 2}));
  TensorF pos(Shape{1, 2, 2, 1}, {0, 1, 2, 3});
  EXPECT_EQ(relu(pos), pos);
}

TEST(ReluProperty, Idempotent) {
  Rng rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    TensorF x = random_tensor<float>(Shape{2, 3, 4, 5}, rng);
    EXPECT_EQ(relu(relu(x)), relu(x));
  }
}

TEST(LinearTest, ClassifierShape) {
  TensorF x(Shape{1, 1024, 1, 1}, 0.1f);
  auto y = linear(x, TensorF(Shape{1000, 1024, 1, 1}), TensorF(Shape{1, 1000, 1, 1}));
  EXPECT_EQ(y.shape(), (Shape{1, 1000, 1, 1}));
}

TEST(LinearTest, IdentityAndHandValue) {
  TensorD x(Shape{1, 3, 1, 1}, {0.5, -2, 7});
  TensorD eye(Shape{3, 3, 1, 1});
  for (int i = 0; i < 3; ++i) eye.at(i, i, 0, 0) = 1;
  EXPECT_EQ(linear(x, eye, TensorD(Shape{1, 3, 1, 1})), x);

  TensorD a(Shape{1, 2, 1, 1}, {1, 2});
  auto y = linear(a, TensorD(Shape{1, 2, 1, 1}, {3, 4}), TensorD(Shape{1, 1, 1, 1}, 5.0));
  EXPECT_DOUBLE_EQ(y[0], 16.0);
}

TEST(LinearTest, FeatureMismatch) {
  EXPECT_THROW(linear(TensorF(Shape{1, 3, 1, 1}), TensorF(Shape{2, 4, 1, 1}),
                      TensorF(Shape{1, 2, 1, 1})),
               ShapeError);
}

TEST(SoftmaxTest, Examples) {
  auto a = softmax(TensorD(Shape{1, 2, 1, 1}, {0, 0}));
  EXPECT_DOUBLE_EQ(a[0], 0.5);
  EXPECT_DOUBLE_EQ(a[1], 0.5);

  auto b = softmax(TensorD(Shape{1, 2, 1, 1}, {1000, 0}));
  EXPECT_TRUE(std::isfinite(b[0]) && std::isfinite(b[1]));
  EXPECT_NEAR(b[0], 1.0, 1e-12);
  EXPECT_NEAR(b[1], 0.0, 1e-12);

  auto c = softmax(TensorD(Shape{1, 3, 1, 1}, {std::log(1.0), std::log(2.0), std::log(3.0)}));
  EXPECT_NEAR(c[0], 1.0 / 6, 1e-15);
  EXPECT_NEAR(c[1], 2.0 / 6, 1e-15);
  EXPECT_NEAR(c[2], 3.0 / 6, 1e-15);
}

TEST(SoftmaxProperty, RowsAreDistributions) {
  Rng rng(9);
  for (int trial = 0; trial < 20; ++trial) {
    TensorF x = random_tensor<float>(Shape{4, 10, 1, 1}, rng, -20, 20);
    auto y = softmax(x);
    for (std::int64_t b = 0; b < 4; ++b) {
      double s = 0;
      for (std::int64_t k = 0; k < 10; ++k) {
        const float p = y.item(b)[k];
        EXPECT_GT(p, 0.0f);
        EXPECT_LT(p, 1.0f);
        s += p;
      }
      EXPECT_NEAR(s, 1.0, 1e-6);
    }
  }
}

TEST(DropoutTest, IdentityCases) {
  Rng rng(10);
  TensorF x = random_tensor<float>(Shape{2, 3, 4, 4}, rng);
  EXPECT_EQ(dropout(x, 0.7, Mode::kInfer, rng).output, x);
  EXPECT_EQ(dropout(x, 0.0, Mode::kTrain, rng).output, x);
  EXPECT_THROW(dropout(x, 1.0, Mode::kTrain, rng), Error);
}

TEST(DropoutTest, LawOfLargeNumbers) {
  Rng rng(11);
  TensorF ones(Shape{1, 1, 1000, 1000}, 1.0f);
  auto r = dropout(ones, 0.4, Mode::kTrain, rng);
  double sum = 0;
  std::int64_t zeros = 0;
  for (float v : r.output.data()) {
    sum += v;
    zeros += v == 0.0f;
  }
  const double n = 1e6;
  EXPECT_NEAR(sum / n, 1.0, 0.01);
  EXPECT_NEAR(static_cast<double>(zeros) / n, 0.4, 0.01);
}

TEST(ConcatTest, InceptionWidths) {
  std::vector<TensorF> xs = {TensorF(Shape{1, 64, 28, 28}), TensorF(Shape{1, 128, 28, 28}),
                             TensorF(Shape{1, 32, 28, 28}), TensorF(Shape{1, 32, 28, 28})};
  EXPECT_EQ(concat_channels<float>(xs).shape().c, 256);
  std::vector<TensorF> ys = {TensorF(Shape{1, 128, 28, 28}), TensorF(Shape{1, 192, 28, 28}),
                             TensorF(Shape{1, 96, 28, 28}), TensorF(Shape{1, 64, 28, 28})};
  EXPECT_EQ(concat_channels<float>(ys).shape().c, 480);
}

TEST(ConcatTest, SingleInputAndMismatch) {
  Rng rng(12);
  std::vector<TensorF> one = {random_tensor<float>(Shape{2, 3, 4, 4}, rng)};
  EXPECT_EQ(concat_channels<float>(one), one[0]);
  std::vector<TensorF> bad = {TensorF(Shape{1, 2, 4, 4}), TensorF(Shape{1, 2, 4, 5})};
  try {
    concat_channels<float>(bad);
    FAIL();
  } catch (const ShapeError& e) {
    EXPECT_EQ(e.dimension(), "width");
    EXPECT_NE(std::string(e.what()).find("branch 1"), std::string::npos);
  }
}

TEST(ConcatProperty, SlicingRecoversInputs) {
  Rng rng(13);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<TensorF> xs;
    const std::int64_t n = 1 + static_cast<std::int64_t>(rng.below(3));
    for (int i = 0; i < 1 + static_cast<int>(rng.below(4)); ++i) {
      xs.push_back(random_tensor<float>(
          Shape{n, 1 + static_cast<std::int64_t>(rng.below(5)), 3, 2}, rng));
    }
    auto cat = concat_channels<float>(xs);
    std::int64_t begin = 0;
    for (const auto& x : xs) {
      EXPECT_EQ(slice_channels(cat, begin, x.shape().c), x);
      begin += x.shape().c;
    }
  }
}

TEST(TensorTest, InvariantsEnforced) {
  EXPECT_THROW(TensorF(Shape{1, 0, 2, 2}), ShapeError);
  EXPECT_THROW(TensorF(Shape{1, 1, 2, 2}, std::vector<float>(3)), ShapeError);
}

TEST(TensorFileTest, RoundTripAndHeader) {
  Rng rng(14);
  TensorD d = random_tensor<double>(Shape{2, 3, 4, 5}, rng);
  const std::string bytes = encode_tensor(d);
  ASSERT_EQ(bytes.size(), 33u + 120u * 8u);
  EXPECT_EQ(bytes.substr(0, 4), "NCHW");
  EXPECT_EQ(bytes[4], 1);
  EXPECT_EQ(bytes[16], 2);
  EXPECT_EQ(bytes[20], 3);
  EXPECT_EQ(bytes[32], 1);
  EXPECT_EQ(std::get<TensorD>(decode_tensor(bytes)), d);

  TensorF f = random_tensor<float>(Shape{1, 1, 2, 2}, rng);
  EXPECT_EQ(std::get<TensorF>(decode_tensor(encode_tensor(f))), f);
}

TEST(TensorFileTest, CorruptInputs) {
  TensorF f(Shape{1, 1, 2, 2}, 1.0f);
  std::string bytes = encode_tensor(f);
  std::string bad_magic = bytes;
  bad_magic[0] = 'X';
  EXPECT_THROW(decode_tensor(bad_magic), FormatError);
  EXPECT_THROW(decode_tensor(bytes.substr(0, bytes.size() - 1)), FormatError);
  std::string bad_dtype = bytes;
  bad_dtype[32] = 7;
  EXPECT_THROW(decode_tensor(bad_dtype), FormatError);
}

}  // namespace
}  // namespace incnet
