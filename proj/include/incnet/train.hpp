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

// Synchronous single-replica training loop.

#ifndef INCNET_TRAIN_HPP_
#define INCNET_TRAIN_HPP_

#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incnet/optim.hpp"

namespace incnet {

inline constexpr double kAuxLossWeight = 0.3;

template <typename T>
struct LossAndGrads {
  double main_loss = 0.0;
  std::vector<double> aux_losses;  // aux1, aux2 when present
  double total_loss = 0.0;
  ParamStore<T> grads;
};

// Train-mode forward pass, softmax cross-entropy on every classifier head
// (main + aux_weight * sum(aux)), then backward. Heads present in the graph
// but absent from train mode never exist, so an aux-free graph yields only
// the main loss.
template <typename T>
LossAndGrads<T> loss_and_grads(const GraphSpec& g, const ParamStore<T>& params,
                               const Tensor<T>& batch, std::span<const int> labels, Rng& rng,
                               double aux_weight = kAuxLossWeight);

struct StepLog {
  std::int64_t step = 0;
  std::int64_t epoch = 0;
  double lr = 0.0;
  double main_loss = 0.0;
  std::vector<double> aux_losses;
  double total_loss = 0.0;
};

// One optimisation step at the current state.epoch; folds the new parameters
// into the Polyak average once state.step has reached polyak_start.
template <typename T>
StepLog train_step(const GraphSpec& g, ParamStore<T>& params, OptimizerState<T>& state,
                   const Tensor<T>& batch, std::span<const int> labels, Rng& rng,
                   double aux_weight = kAuxLossWeight, std::int64_t polyak_start = 0);

struct TrainOptions {
  double base_lr = 0.0;
  std::int64_t epochs = 1;
  std::int64_t batch_size = 8;
  std::uint64_t seed = 0;       // dropout stream
  std::uint64_t data_seed = 0;  // example order and augmentation
  double aux_weight = kAuxLossWeight;
  std::int64_t polyak_start = 0;
  // Stop after this many steps even if epochs remain (0 = no limit).
  std::int64_t max_steps = 0;
  // Stop once an epoch's mean total loss falls below this value.
  std::optional<double> target_loss;
};

// Produces the input tensor for example `index`; called once per use so that
// augmentation can draw fresh crops.
using ExampleSource = std::function<TensorF(std::size_t index, Rng& rng)>;

struct TrainResult {
  std::vector<StepLog> log;
  OptimizerState<float> state;
  std::vector<double> epoch_mean_loss;
};

// Shuffles the examples every epoch with the data seed and steps through
// them in mini-batches. Each step is appended to `metrics_csv` (if given).
TrainResult train(const GraphSpec& g, ParamStore<float>& params, std::size_t num_examples,
                  const ExampleSource& source, std::span<const int> labels,
                  const TrainOptions& options, std::ostream* metrics_csv = nullptr);

std::string metrics_csv_header();
std::string metrics_csv_row(const StepLog& s);

// key=value lines describing a run.
std::string run_manifest(const TrainOptions& options, const GraphSpec& g,
                         const std::string& extra = {});

}  // namespace incnet

#endif  // INCNET_TRAIN_HPP_
