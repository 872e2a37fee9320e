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

// Executing a GraphSpec: parameter layout, initialisation and the forward
// pass recorded on a Tape.

#ifndef INCNET_NETWORK_HPP_
#define INCNET_NETWORK_HPP_

#include <map>
#include <string>
#include <vector>

#include "incnet/graph.hpp"
#include "incnet/tape.hpp"

namespace incnet {

// Parameters keyed by "<layer>/weight" and "<layer>/bias".
template <typename T>
using ParamStore = std::map<std::string, Tensor<T>>;

struct ParamInfo {
  std::string name;
  std::string layer;
  Shape shape;
  std::int64_t fan_in = 0;
  bool is_bias = false;
  Head head = Head::kMain;
};

// One weight and one bias entry per conv / linear layer, in graph order.
std::vector<ParamInfo> parameter_layout(const GraphSpec& g);

// Uniform(-sqrt(3/fan_in), +sqrt(3/fan_in)) weights (variance 1/fan_in) and
// zero biases. Each tensor draws from its own generator seeded by
// (seed, parameter name), so a given layer's initial values do not depend on
// which other layers exist.
template <typename T>
ParamStore<T> init_params(const GraphSpec& g, std::uint64_t seed);

// Throws LayerError when a parameter is missing or has the wrong shape.
template <typename T>
void check_params(const GraphSpec& g, const ParamStore<T>& params);

template <typename T>
struct GraphRun {
  std::map<std::string, Var> nodes;
  std::map<std::string, Var> params;
  // Output key ("main", "aux1", "aux2") -> node. Infer mode has only "main".
  std::map<std::string, Var> outputs;
};

// Records the forward pass on `tape`. In infer mode auxiliary-head nodes are
// not executed and dropout is the identity. Kernel errors are rethrown as
// LayerError naming the failing layer.
template <typename T>
GraphRun<T> run_graph(Tape<T>& tape, const GraphSpec& g, const ParamStore<T>& params,
                      const Tensor<T>& input, Mode mode, Rng& rng);

// Same, reading the input and parameters from variables already on the tape
// (parameter name -> variable), e.g. for gradient checks over parameters.
template <typename T>
GraphRun<T> run_graph(Tape<T>& tape, const GraphSpec& g, Var input,
                      const std::map<std::string, Var>& params, Mode mode, Rng& rng);

// Convenience wrapper returning output tensors by key.
template <typename T>
std::map<std::string, Tensor<T>> forward(const GraphSpec& g, const ParamStore<T>& params,
                                         const Tensor<T>& input, Mode mode, Rng& rng);

template <typename T>
std::int64_t count_elements(const ParamStore<T>& params);

template <typename U, typename T>
ParamStore<U> cast_params(const ParamStore<T>& params) {
  ParamStore<U> out;
  for (const auto& [name, t] : params) out.emplace(name, t.template cast<U>());
  return out;
}

}  // namespace incnet

#endif  // INCNET_NETWORK_HPP_
