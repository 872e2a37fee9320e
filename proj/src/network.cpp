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

#include "incnet/network.hpp"

#include <cmath>

namespace incnet {

std::vector<ParamInfo> parameter_layout(const GraphSpec& g) {
  const std::vector<Shape> shapes = infer_shapes(g);
  std::vector<ParamInfo> out;
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const LayerSpec& l = g.nodes[i];
    if (!l.has_params()) continue;
    const Shape& in = shapes[*g.index_of(l.inputs.front())];
    Shape w;
    if (l.kind == LayerKind::kConv) {
      w = Shape{l.out_channels, in.c, l.kernel, l.kernel};
    } else {
      w = Shape{l.out_channels, in.per_item(), 1, 1};
    }
    const std::int64_t fan_in = w.per_item();
    out.push_back({l.name + "/weight", l.name, w, fan_in, false, l.head});
    out.push_back({l.name + "/bias", l.name, Shape{1, l.out_channels, 1, 1}, fan_in, true, l.head});
  }
  return out;
}

template <typename T>
ParamStore<T> init_params(const GraphSpec& g, std::uint64_t seed) {
  ParamStore<T> store;
  for (const ParamInfo& p : parameter_layout(g)) {
    Tensor<T> t(p.shape);
    if (!p.is_bias) {
      Rng rng(derive_seed(seed, p.name));
      const double bound = std::sqrt(3.0 / static_cast<double>(p.fan_in));
      for (auto& v : t.data()) v = static_cast<T>(rng.uniform(-bound, bound));
    }
    store.emplace(p.name, std::move(t));
  }
  return store;
}

template <typename T>
void check_params(const GraphSpec& g, const ParamStore<T>& params) {
  for (const ParamInfo& p : parameter_layout(g)) {
    auto it = params.find(p.name);
    if (it == params.end()) throw LayerError(p.layer, "missing parameter '" + p.name + "'");
    if (it->second.shape() != p.shape) {
      throw LayerError(p.layer, "parameter '" + p.name + "' has shape " +
                                    to_string(it->second.shape()) + ", expected " +
                                    to_string(p.shape));
    }
  }
}

namespace {

template <typename T>
void check_input_shape(const GraphSpec& g, const Shape& s) {
  const LayerSpec& in = g.input();
  if (s.c != in.out_channels) throw ShapeError("channels", in.out_channels, s.c, "network input");
  if (s.h != in.height) throw ShapeError("height", in.height, s.h, "network input");
  if (s.w != in.width) throw ShapeError("width", in.width, s.w, "network input");
}

}  // namespace

template <typename T>
GraphRun<T> run_graph(Tape<T>& tape, const GraphSpec& g, Var input,
                      const std::map<std::string, Var>& params, Mode mode, Rng& rng) {
  check_input_shape<T>(g, tape.value(input).shape());
  GraphRun<T> run;
  auto param = [&](const std::string& name) {
    auto p = params.find(name);
    if (p == params.end()) throw Error("missing parameter '" + name + "'");
    return run.params[name] = p->second;
  };
  for (const LayerSpec& l : g.nodes) {
    if (mode == Mode::kInfer && l.head != Head::kMain) continue;
    try {
      std::vector<Var> xs;
      for (const std::string& name : l.inputs) xs.push_back(run.nodes.at(name));
      Var y;
      switch (l.kind) {
        case LayerKind::kInput:
          y = input;
          break;
        case LayerKind::kConv:
          y = tape.conv2d(xs[0], param(l.name + "/weight"), param(l.name + "/bias"), l.stride,
                          l.pad);
          break;
        case LayerKind::kMaxPool:
        case LayerKind::kAvgPool:
          y = tape.pool2d(xs[0], PoolParams{l.kind == LayerKind::kMaxPool ? PoolKind::kMax
                                                                          : PoolKind::kAvg,
                                            l.kernel, l.stride, l.pad, l.ceil_mode});
          break;
        case LayerKind::kRelu:
          y = tape.relu(xs[0]);
          break;
        case LayerKind::kDropout:
          y = tape.dropout(xs[0], l.rate, mode, rng);
          break;
        case LayerKind::kLinear:
          y = tape.linear(xs[0], param(l.name + "/weight"), param(l.name + "/bias"));
          break;
        case LayerKind::kSoftmax:
          y = tape.softmax(xs[0]);
          break;
        case LayerKind::kConcat:
          y = tape.concat(xs);
          break;
      }
      run.nodes[l.name] = y;
    } catch (const LayerError&) {
      throw;
    } catch (const Error& e) {
      throw LayerError(l.name, e.what());
    }
  }
  for (const auto& [key, node] : g.outputs) {
    auto it = run.nodes.find(node);
    if (it != run.nodes.end()) run.outputs[key] = it->second;
  }
  return run;
}

template <typename T>
GraphRun<T> run_graph(Tape<T>& tape, const GraphSpec& g, const ParamStore<T>& params,
                      const Tensor<T>& input, Mode mode, Rng& rng) {
  check_input_shape<T>(g, input.shape());
  const Var x = tape.leaf(input);
  std::map<std::string, Var> leaves;
  for (const ParamInfo& p : parameter_layout(g)) {
    if (mode == Mode::kInfer && p.head != Head::kMain) continue;
    auto it = params.find(p.name);
    if (it == params.end()) throw LayerError(p.layer, "missing parameter '" + p.name + "'");
    leaves.emplace(p.name, tape.leaf(it->second));
  }
  return run_graph(tape, g, x, leaves, mode, rng);
}

template <typename T>
std::map<std::string, Tensor<T>> forward(const GraphSpec& g, const ParamStore<T>& params,
                                         const Tensor<T>& input, Mode mode, Rng& rng) {
  Tape<T> tape;
  GraphRun<T> run = run_graph(tape, g, params, input, mode, rng);
  std::map<std::string, Tensor<T>> out;
  for (const auto& [key, v] : run.outputs) out.emplace(key, tape.value(v));
  return out;
}

template <typename T>
std::int64_t count_elements(const ParamStore<T>& params) {
  std::int64_t n = 0;
  for (const auto& [name, t] : params) n += t.numel();
  return n;
}

#define INCNET_INSTANTIATE_NETWORK(T)                                                     \
  template ParamStore<T> init_params<T>(const GraphSpec&, std::uint64_t);                  \
  template void check_params(const GraphSpec&, const ParamStore<T>&);                      \
  template GraphRun<T> run_graph(Tape<T>&, const GraphSpec&, const ParamStore<T>&,         \
                                 const Tensor<T>&, Mode, Rng&);                            \
  template GraphRun<T> run_graph(Tape<T>&, const GraphSpec&, Var,                          \
                                 const std::map<std::string, Var>&, Mode, Rng&);           \
  template std::map<std::string, Tensor<T>> forward(const GraphSpec&, const ParamStore<T>&, \
                                                    const Tensor<T>&, Mode, Rng&);         \
  template std::int64_t count_elements(const ParamStore<T>&);

INCNET_INSTANTIATE_NETWORK(float)
INCNET_INSTANTIATE_NETWORK(double)

#undef INCNET_INSTANTIATE_NETWORK

}  // namespace incnet
