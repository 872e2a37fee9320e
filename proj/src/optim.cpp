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

#include "incnet/optim.hpp"

#include <cmath>

namespace incnet {

namespace {

template <typename T>
void check_same_layout(const ParamStore<T>& a, const ParamStore<T>& b, const char* what) {
  if (a.size() != b.size()) {
    throw ShapeError("parameters", static_cast<std::int64_t>(a.size()),
                     static_cast<std::int64_t>(b.size()), what);
  }
  for (const auto& [name, t] : a) {
    auto it = b.find(name);
    if (it == b.end()) throw Error(std::string(what) + ": missing '" + name + "'");
    if (it->second.shape() != t.shape()) {
      throw ShapeError("numel", t.numel(), it->second.numel(),
                       std::string(what) + ": shape of '" + name + "'");
    }
  }
}

}  // namespace

template <typename T>
OptimizerState<T> make_optimizer_state(const ParamStore<T>& params, double base_lr,
                                       double momentum) {
  if (!(base_lr > 0)) throw Error("base learning rate must be positive");
  OptimizerState<T> s;
  s.base_lr = base_lr;
  s.momentum = momentum;
  for (const auto& [name, t] : params) {
    s.momentum_buffers.emplace(name, Tensor<T>(t.shape()));
    s.polyak_avg.emplace(name, Tensor<T>(t.shape()));
  }
  return s;
}

double lr_at(std::int64_t epoch, double base_lr) {
  if (epoch < 0) throw Error("epoch must be non-negative");
  return base_lr * std::pow(0.96, static_cast<double>(epoch / 8));
}

template <typename T>
void sgd_step(ParamStore<T>& params, const ParamStore<T>& grads, OptimizerState<T>& state) {
  check_same_layout(params, grads, "sgd_step gradients");
  check_same_layout(params, state.momentum_buffers, "sgd_step momentum buffers");
  const T lr = static_cast<T>(lr_at(state.epoch, state.base_lr));
  const T mu = static_cast<T>(state.momentum);
  for (auto& [name, p] : params) {
    auto pv = p.data();
    auto gv = grads.at(name).data();
    auto vv = state.momentum_buffers.at(name).data();
    for (std::size_t i = 0; i < pv.size(); ++i) {
      vv[i] = mu * vv[i] + gv[i];
      pv[i] -= lr * vv[i];
    }
  }
  ++state.step;
}

template <typename T>
void polyak_update(OptimizerState<T>& state, const ParamStore<T>& params) {
  check_same_layout(params, state.polyak_avg, "polyak_update");
  const T denom = static_cast<T>(state.polyak_count + 1);
  for (const auto& [name, p] : params) {
    auto pv = p.data();
    auto av = state.polyak_avg.at(name).data();
    for (std::size_t i = 0; i < pv.size(); ++i) av[i] += (pv[i] - av[i]) / denom;
  }
  ++state.polyak_count;
}

template OptimizerState<float> make_optimizer_state(const ParamStore<float>&, double, double);
template OptimizerState<double> make_optimizer_state(const ParamStore<double>&, double, double);
template void sgd_step(ParamStore<float>&, const ParamStore<float>&, OptimizerState<float>&);
template void sgd_step(ParamStore<double>&, const ParamStore<double>&, OptimizerState<double>&);
template void polyak_update(OptimizerState<float>&, const ParamStore<float>&);
template void polyak_update(OptimizerState<double>&, const ParamStore<double>&);

}  // namespace incnet
