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


// Model container files.
//
// Layout (all integers little-endian):
//   magic "INCM", u32 version = 1,
//   u32 byte length + graph text (graph_to_text),
//   u32 parameter count, then per parameter:
//     u32 name length + name, u32 n, c, h, w, fp32 data in NCHW order.

#ifndef INCNET_MODEL_IO_HPP_
#define INCNET_MODEL_IO_HPP_

#include <string>
#include <vector>

#include "incnet/network.hpp"

namespace incnet {

inline constexpr std::uint32_t kModelFileVersion = 1;

struct Model {
  GraphSpec graph;
  ParamStore<float> params;
};

std::string encode_model(const GraphSpec& g, const ParamStore<float>& params);

// Throws FormatError on a bad magic, an unsupported version, truncation or
// trailing bytes, and LayerError when the parameters do not match the
// stored graph.
Model decode_model(const std::string& bytes);

void save_model(const std::string& path, const GraphSpec& g, const ParamStore<float>& params);
Model load_model(const std::string& path);

// Fits a loaded model to `target`. Every parameter of `target` must be
// present with the same shape (LayerError otherwise). Stored parameters that
// `target` does not use are dropped with a warning when they belong to an
// auxiliary head of the stored graph and rejected otherwise.
ParamStore<float> adapt_params(const Model& model, const GraphSpec& target,
                               std::vector<std::string>* warnings = nullptr);

// The stored graph without its auxiliary heads.
GraphSpec strip_aux(const GraphSpec& g);

}  // namespace incnet

#endif  // INCNET_MODEL_IO_HPP_
