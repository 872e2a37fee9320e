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

#ifndef INCNET_GOOGLENET_HPP_
#define INCNET_GOOGLENET_HPP_

#include <array>
#include <string>

#include "incnet/graph.hpp"

namespace incnet {

// Branch widths of one Inception module.
struct InceptionConfig {
  std::int64_t n1x1 = 0;
  std::int64_t n3x3reduce = 0;
  std::int64_t n3x3 = 0;
  std::int64_t n5x5reduce = 0;
  std::int64_t n5x5 = 0;
  std::int64_t pool_proj = 0;

  // Output width of the reduced variant.
  std::int64_t output_channels() const { return n1x1 + n3x3 + n5x5 + pool_proj; }
  friend bool operator==(const InceptionConfig&, const InceptionConfig&) = default;
};

enum class InceptionVariant {
  // 1x1, 3x3 and 5x5 convolutions plus a 3x3 max pool, all on the raw input.
  kNaive,
  // 1x1 reductions in front of the 3x3 and 5x5 convolutions and a 1x1
  // projection after the pool.
  kReduced,
};

struct NamedInception {
  const char* name;  // "3a", "3b", ...
  InceptionConfig config;
};

// The nine modules of the GoogLeNet trunk, in order.
inline constexpr std::array<NamedInception, 9> kGoogLeNetInceptions = {{
    {"3a", {64, 96, 128, 16, 32, 32}},
    {"3b", {128, 128, 192, 32, 96, 64}},
    {"4a", {192, 96, 208, 16, 48, 64}},
    {"4b", {160, 112, 224, 24, 64, 64}},
    {"4c", {128, 128, 256, 24, 64, 64}},
    {"4d", {112, 144, 288, 32, 64, 64}},
    {"4e", {256, 160, 320, 32, 128, 128}},
    {"5a", {256, 160, 320, 32, 128, 128}},
    {"5b", {384, 192, 384, 48, 128, 128}},
}};

// Appends an Inception module reading from `input`; returns the name of its
// concat node. Node names are prefixed with `name` + "/". Throws if a width
// used by the chosen variant is zero.
std::string add_inception(GraphBuilder& b, const std::string& name, const std::string& input,
                          const InceptionConfig& cfg, InceptionVariant variant);

// A standalone graph holding one module on a (channels, height, width) input.
GraphSpec build_inception(const InceptionConfig& cfg, InceptionVariant variant,
                          std::int64_t channels, std::int64_t height, std::int64_t width);

// Channel widths of an auxiliary classifier head.
struct AuxHeadWidths {
  std::int64_t reduce = 128;
  std::int64_t hidden = 1024;
  std::int64_t classes = 1000;
};

// Appends an auxiliary classifier reading a 14x14 feature map: 5x5/3 average
// pool, 1x1 conv + relu, fully connected + relu, 70% dropout, linear,
// softmax. Nodes are named `prefix` + "/..." and tagged with `head`.
// Returns the softmax node. Throws LayerError if the input is not 14x14.
std::string add_aux_head(GraphBuilder& b, const std::string& prefix, const std::string& input,
                         Head head, const AuxHeadWidths& widths = {});

GraphSpec build_googlenet(bool with_aux);

// Same connectivity with every channel width divided by `width_divisor` and
// clamped to at least 4, and a `classes`-way classifier. Divisor 1 with 1000
// classes reproduces build_googlenet.
GraphSpec build_googlenet_mini(int width_divisor, std::int64_t classes, bool with_aux);

// Width scaling used by build_googlenet_mini.
std::int64_t scale_width(std::int64_t channels, int divisor);
InceptionConfig scale_config(const InceptionConfig& cfg, int divisor);

}  // namespace incnet

#endif  // INCNET_GOOGLENET_HPP_
