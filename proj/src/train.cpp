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

#include "incnet/train.hpp"

#include <algorithm>
#include <numeric>
#include <ostream>
#include <sstream>

namespace incnet {

template <typename T>
LossAndGrads<T> loss_and_grads(const GraphSpec& g, const ParamStore<T>& params,
                               const Tensor<T>& batch, std::span<const int> labels, Rng& rng,
                               double aux_weight) {
  Tape<T> tape;
  GraphRun<T> run = run_graph(tape, g, params, batch, Mode::kTrain, rng);
  std::vector<Var> losses;
  std::vector<T> weights;
  LossAndGrads<T> out;
  for (const char* key : {"main", "aux1", "aux2"}) {
    auto it = g.outputs.find(key);
    if (it == g.outputs.end()) continue;
    // The loss is fused with the head's softmax, so it reads the logits.
    const LayerSpec& head = g.at(it->second);
    const Var logits =
        head.kind == LayerKind::kSoftmax ? run.nodes.at(head.inputs.front()) : run.nodes.at(head.name);
    const Var loss = tape.softmax_cross_entropy(logits, labels);
    losses.push_back(loss);
    const bool is_main = std::string(key) == "main";
    weights.push_back(is_main ? T(1) : static_cast<T>(aux_weight));
    const double v = static_cast<double>(tape.value(loss)[0]);
    if (is_main) {
      out.main_loss = v;
    } else {
      out.aux_losses.push_back(v);
    }
  }
  const Var total = tape.weighted_sum(losses, weights);
  out.total_loss = composite_loss(out.main_loss, out.aux_losses, aux_weight);
  tape.backward(total);
  for (const auto& [name, v] : run.params) out.grads.emplace(name, tape.grad(v));
  // Parameters of layers that never ran (none in train mode) still need a
  // gradient entry for the optimizer.
  for (const auto& [name, p] : params) {
    if (!out.grads.count(name)) out.grads.emplace(name, Tensor<T>(p.shape()));
  }
  return out;
}

template <typename T>
StepLog train_step(const GraphSpec& g, ParamStore<T>& params, OptimizerState<T>& state,
                   const Tensor<T>& batch, std::span<const int> labels, Rng& rng,
                   double aux_weight, std::int64_t polyak_start) {
  LossAndGrads<T> lg = loss_and_grads(g, params, batch, labels, rng, aux_weight);
  StepLog log{state.step, state.epoch, lr_at(state.epoch, state.base_lr), lg.main_loss,
              lg.aux_losses, lg.total_loss};
  sgd_step(params, lg.grads, state);
  if (state.step > polyak_start) polyak_update(state, params);
  return log;
}

TrainResult train(const GraphSpec& g, ParamStore<float>& params, std::size_t num_examples,
                  const ExampleSource& source, std::span<const int> labels,
                  const TrainOptions& options, std::ostream* metrics_csv) {
  if (num_examples == 0) throw Error("training set is empty");
  if (labels.size() != num_examples) {
    throw ShapeError("labels", static_cast<std::int64_t>(num_examples),
                     static_cast<std::int64_t>(labels.size()), "one label per example");
  }
  if (options.batch_size < 1) throw Error("batch size must be >= 1");
  check_params(g, params);
  TrainResult result{{}, make_optimizer_state(params, options.base_lr), {}};
  OptimizerState<float>& state = result.state;
  Rng dropout_rng(options.seed);
  Rng data_rng(options.data_seed);
  std::vector<std::size_t> order(num_examples);
  std::iota(order.begin(), order.end(), 0);
  if (metrics_csv) *metrics_csv << metrics_csv_header() << "\n";

  for (std::int64_t epoch = 0; epoch < options.epochs; ++epoch) {
    state.epoch = epoch;
    for (std::size_t i = num_examples; i > 1; --i) {
      std::swap(order[i - 1], order[data_rng.below(i)]);
    }
    double epoch_loss = 0.0;
    std::int64_t epoch_steps = 0;
    for (std::size_t begin = 0; begin < num_examples;
         begin += static_cast<std::size_t>(options.batch_size)) {
      const std::size_t end =
          std::min(num_examples, begin + static_cast<std::size_t>(options.batch_size));
      const auto count = static_cast<std::int64_t>(end - begin);
      TensorF first = source(order[begin], data_rng);
      Shape s = first.shape();
      TensorF batch(Shape{count, s.c, s.h, s.w});
      std::vector<int> batch_labels;
      for (std::size_t j = begin; j < end; ++j) {
        TensorF x = j == begin ? std::move(first) : source(order[j], data_rng);
        if (x.shape() != s) throw ShapeError("numel", s.numel(), x.numel(), "example shape");
        std::copy(x.data().begin(), x.data().end(),
                  batch.item(static_cast<std::int64_t>(j - begin)));
        batch_labels.push_back(labels[order[j]]);
      }
      StepLog log = train_step(g, params, state, batch, batch_labels, dropout_rng,
                               options.aux_weight, options.polyak_start);
      if (metrics_csv) *metrics_csv << metrics_csv_row(log) << "\n" << std::flush;
      epoch_loss += log.total_loss;
      ++epoch_steps;
      result.log.push_back(std::move(log));
      if (options.max_steps > 0 && state.step >= options.max_steps) break;
    }
    result.epoch_mean_loss.push_back(epoch_loss / static_cast<double>(epoch_steps));
    if (options.max_steps > 0 && state.step >= options.max_steps) break;
    if (options.target_loss && result.epoch_mean_loss.back() < *options.target_loss) break;
  }
  return result;
}

std::string metrics_csv_header() { return "step,epoch,lr,main_loss,aux1_loss,aux2_loss,total_loss"; }

std::string metrics_csv_row(const StepLog& s) {
  std::ostringstream os;
  os.precision(9);
  os << s.step << "," << s.epoch << "," << s.lr << "," << s.main_loss;
  for (std::size_t i = 0; i < 2; ++i) {
    os << ",";
    if (i < s.aux_losses.size()) os << s.aux_losses[i];
  }
  os << "," << s.total_loss;
  return os.str();
}

std::string run_manifest(const TrainOptions& o, const GraphSpec& g, const std::string& extra) {
  std::ostringstream os;
  os.precision(17);
  os << "graph_family=" << g.family << "\n"
     << "aux_heads=" << (g.has_aux() ? "true" : "false") << "\n"
     << "seed=" << o.seed << "\n"
     << "data_seed=" << o.data_seed << "\n"
     << "init=uniform(+-sqrt(3/fan_in)),bias=0,per-parameter seed derived from run seed\n"
     << "optimizer=sgd_heavy_ball\n"
     << "momentum=0.9\n"
     << "base_lr=" << o.base_lr << "\n"
     << "lr_schedule=base_lr*0.96^floor(epoch/8)\n"
     << "epochs=" << o.epochs << "\n"
     << "batch_size=" << o.batch_size << "\n"
     << "aux_weight=" << o.aux_weight << "\n"
     << "polyak_start=" << o.polyak_start << "\n"
     << "max_steps=" << o.max_steps << "\n";
  if (o.target_loss) os << "target_loss=" << *o.target_loss << "\n";
  os << extra;
  return os.str();
}

template LossAndGrads<float> loss_and_grads(const GraphSpec&, const ParamStore<float>&,
                                            const TensorF&, std::span<const int>, Rng&, double);
template LossAndGrads<double> loss_and_grads(const GraphSpec&, const ParamStore<double>&,
                                             const TensorD&, std::span<const int>, Rng&, double);
template StepLog train_step(const GraphSpec&, ParamStore<float>&, OptimizerState<float>&,
                            const TensorF&, std::span<const int>, Rng&, double, std::int64_t);
template StepLog train_step(const GraphSpec&, ParamStore<double>&, OptimizerState<double>&,
                            const TensorD&, std::span<const int>, Rng&, double, std::int64_t);

}  // namespace incnet
