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

#ifndef INCNET_OPTIM_HPP_
#define INCNET_OPTIM_HPP_

#include "incnet/network.hpp"

namespace incnet {

template <typename T>
struct OptimizerState {
  ParamStore<T> momentum_buffers;
  double base_lr = 0.0;
  double momentum = 0.9;
  std::int64_t epoch = 0;
  std::int64_t step = 0;
  // Running mean of the parameters over polyak_count updates.
  ParamStore<T> polyak_avg;
  std::int64_t polyak_count = 0;
};

// Zero momentum buffers and a zero Polyak accumulator shaped like `params`.
template <typename T>
OptimizerState<T> make_optimizer_state(const ParamStore<T>& params, double base_lr,
                                       double momentum = 0.9);

// base_lr * 0.96^floor(epoch / 8).
double lr_at(std::int64_t epoch, double base_lr);

// Heavy-ball momentum: v <- momentum * v + g; p <- p - lr_at(epoch) * v.
// Increments state.step.
template <typename T>
void sgd_step(ParamStore<T>& params, const ParamStore<T>& grads, OptimizerState<T>& state);

// avg <- avg + (params - avg) / (count + 1); count <- count + 1.
template <typename T>
void polyak_update(OptimizerState<T>& state, const ParamStore<T>& params);

}  // namespace incnet

#endif  // INCNET_OPTIM_HPP_
