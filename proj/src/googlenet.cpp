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

#include "incnet/googlenet.hpp"

#include <algorithm>

namespace incnet {

namespace {

void require_width(const std::string& module, const char* field, std::int64_t v) {
  if (v < 1) {
    throw LayerError(module, std::string("inception width '") + field + "' must be >= 1, got " +
                                 std::to_string(v));
  }
}

}  // namespace

std::string add_inception(GraphBuilder& b, const std::string& name, const std::string& input,
                          const InceptionConfig& cfg, InceptionVariant variant) {
  require_width(name, "#1x1", cfg.n1x1);
  require_width(name, "#3x3", cfg.n3x3);
  require_width(name, "#5x5", cfg.n5x5);
  const std::string p = name + "/";
  if (variant == InceptionVariant::kNaive) {
    const std::string b1 = b.conv_relu(p + "1x1", input, cfg.n1x1, 1, 1, 0);
    const std::string b3 = b.conv_relu(p + "3x3", input, cfg.n3x3, 3, 1, 1);
    const std::string b5 = b.conv_relu(p + "5x5", input, cfg.n5x5, 5, 1, 2);
    const std::string bp = b.max_pool(p + "pool", input, 3, 1, 1, false);
    return b.concat(p + "output", {b1, b3, b5, bp});
  }
  require_width(name, "#3x3 reduce", cfg.n3x3reduce);
  require_width(name, "#5x5 reduce", cfg.n5x5reduce);
  require_width(name, "pool proj", cfg.pool_proj);
  const std::string b1 = b.conv_relu(p + "1x1", input, cfg.n1x1, 1, 1, 0);
  const std::string r3 = b.conv_relu(p + "3x3_reduce", input, cfg.n3x3reduce, 1, 1, 0);
  const std::string b3 = b.conv_relu(p + "3x3", r3, cfg.n3x3, 3, 1, 1);
  const std::string r5 = b.conv_relu(p + "5x5_reduce", input, cfg.n5x5reduce, 1, 1, 0);
  const std::string b5 = b.conv_relu(p + "5x5", r5, cfg.n5x5, 5, 1, 2);
  const std::string pool = b.max_pool(p + "pool", input, 3, 1, 1, false);
  const std::string bp = b.conv_relu(p + "pool_proj", pool, cfg.pool_proj, 1, 1, 0);
  return b.concat(p + "output", {b1, b3, b5, bp});
}

GraphSpec build_inception(const InceptionConfig& cfg, InceptionVariant variant,
                          std::int64_t channels, std::int64_t height, std::int64_t width) {
  GraphBuilder b("inception", channels, height, width);
  b.set_row("inception");
  const std::string out = add_inception(b, "inception", b.input_name(), cfg, variant);
  b.set_output("main", out);
  return b.build();
}

std::string add_aux_head(GraphBuilder& b, const std::string& prefix, const std::string& input,
                         Head head, const AuxHeadWidths& widths) {
  const Shape& in = b.shape_of(input);
  if (in.h != 14) throw ShapeError("height", 14, in.h, "auxiliary head '" + prefix + "' input");
  if (in.w != 14) throw ShapeError("width", 14, in.w, "auxiliary head '" + prefix + "' input");
  b.set_row(prefix);
  b.set_head(head);
  const std::string p = prefix + "/";
  std::string x = b.avg_pool(p + "avgpool", input, 5, 3);
  x = b.conv_relu(p + "conv", x, widths.reduce, 1, 1, 0);
  x = b.linear(p + "fc", x, widths.hidden);
  x = b.relu(p + "fc/relu", x);
  x = b.dropout(p + "dropout", x, 0.7);
  x = b.linear(p + "classifier", x, widths.classes);
  x = b.softmax(p + "softmax", x);
  b.set_head(Head::kMain);
  return x;
}

std::int64_t scale_width(std::int64_t channels, int divisor) {
  if (divisor < 1) throw Error("width divisor must be >= 1, got " + std::to_string(divisor));
  if (divisor == 1) return channels;
  return std::max<std::int64_t>(4, channels / divisor);
}

InceptionConfig scale_config(const InceptionConfig& c, int d) {
  return {scale_width(c.n1x1, d),       scale_width(c.n3x3reduce, d), scale_width(c.n3x3, d),
          scale_width(c.n5x5reduce, d), scale_width(c.n5x5, d),       scale_width(c.pool_proj, d)};
}

GraphSpec build_googlenet_mini(int width_divisor, std::int64_t classes, bool with_aux) {
  if (width_divisor < 1) {
    throw Error("width divisor must be >= 1, got " + std::to_string(width_divisor));
  }
  if (classes < 1) throw Error("class count must be >= 1");
  const int d = width_divisor;
  const bool full = d == 1 && classes == 1000;
  GraphBuilder b(full ? "googlenet" : "googlenet-mini", 3, 224, 224);
  auto module = [&](std::size_t i, const std::string& input) {
    const auto& m = kGoogLeNetInceptions[i];
    const std::string name = std::string("inception_") + m.name;
    b.set_row(name);
    return add_inception(b, name, input, scale_config(m.config, d), InceptionVariant::kReduced);
  };
  auto pool = [&](const std::string& name, const std::string& input) {
    b.set_row(name);
    return b.max_pool(name, input, 3, 2, 0, true);
  };

  b.set_row("conv1");
  std::string x = b.conv_relu("conv1", b.input_name(), scale_width(64, d), 7, 2, 3);
  x = pool("pool1", x);
  b.set_row("conv2");
  x = b.conv_relu("conv2/3x3_reduce", x, scale_width(64, d), 1, 1, 0);
  x = b.conv_relu("conv2/3x3", x, scale_width(192, d), 3, 1, 1);
  x = pool("pool2", x);
  x = module(0, x);
  x = module(1, x);
  x = pool("pool3", x);
  x = module(2, x);
  const std::string after_4a = x;
  x = module(3, x);
  x = module(4, x);
  x = module(5, x);
  const std::string after_4d = x;
  x = module(6, x);
  x = pool("pool4", x);
  x = module(7, x);
  x = module(8, x);
  b.set_row("avgpool");
  x = b.avg_pool("avgpool", x, 7, 1);
  b.set_row("dropout");
  x = b.dropout("dropout", x, 0.4);
  b.set_row("linear");
  x = b.linear("linear", x, classes);
  b.set_row("softmax");
  x = b.softmax("softmax", x);
  b.set_output("main", x);

  if (with_aux) {
    const AuxHeadWidths widths{scale_width(128, d), scale_width(1024, d), classes};
    b.set_output("aux1", add_aux_head(b, "aux1", after_4a, Head::kAux1, widths));
    b.set_output("aux2", add_aux_head(b, "aux2", after_4d, Head::kAux2, widths));
  }
  return b.build();
}

GraphSpec build_googlenet(bool with_aux) { return build_googlenet_mini(1, 1000, with_aux); }

}  // namespace incnet
