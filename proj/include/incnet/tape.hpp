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

#ifndef INCNET_TAPE_HPP_
#define INCNET_TAPE_HPP_

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incnet/ops.hpp"

namespace incnet {

// Handle to a value recorded on a Tape.
struct Var {
  std::int64_t id = -1;
  bool valid() const { return id >= 0; }
  friend bool operator==(Var, Var) = default;
};

// Reverse-mode gradient tape.
//
// Every operation appends one node holding its output value and a closure
// that maps the node's output gradient to gradients of its inputs. Gradients
// are accumulated, so a value consumed by several operations receives the
// sum of its consumers' contributions. The tape is single-threaded and owns
// all recorded values; it cannot be copied or moved because the closures
// refer back to it.
template <typename T>
class Tape {
 public:
  Tape() = default;
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  Var leaf(Tensor<T> value);

  Var conv2d(Var x, Var weights, Var bias, int stride, int padding);
  Var pool2d(Var x, const PoolParams& params);
  Var relu(Var x);
  Var linear(Var x, Var weights, Var bias);
  Var softmax(Var x);
  Var dropout(Var x, double rate, Mode mode, Rng& rng);
  Var concat(std::span<const Var> xs);

  // Mean over the batch of -ln(softmax(logits)[label]); scalar output. The
  // gradient w.r.t. logits is (probs - onehot) / batch.
  Var softmax_cross_entropy(Var logits, std::span<const int> labels);
  // Mean over the batch of -ln(probs[label]) for already-normalised probs.
  Var cross_entropy(Var probs, std::span<const int> labels);

  Var sum(Var x);
  // Scalar <x, weights> with a constant weight tensor of x's shape.
  Var dot(Var x, const Tensor<T>& weights);
  // Scalar sum_i weights[i] * scalars[i].
  Var weighted_sum(std::span<const Var> scalars, std::span<const T> weights);

  const Tensor<T>& value(Var v) const;
  // Accumulated gradient; zeros when v was not reached by backward().
  Tensor<T> grad(Var v) const;
  bool has_grad(Var v) const;

  // Seeds d(loss) = seed and walks the tape in reverse execution order.
  // loss must be a scalar node recorded on this tape.
  void backward(Var loss, T seed = T(1));

  // Node ids in the order backward() visited them.
  const std::vector<std::int64_t>& visit_order() const { return visited_; }
  std::size_t size() const { return nodes_.size(); }
  const std::string& op_name(Var v) const { return node(v).op; }

 private:
  struct Node {
    std::string op;
    Tensor<T> value;
    std::function<void(const Tensor<T>&)> back;
  };

  Var push(std::string op, Tensor<T> value, std::function<void(const Tensor<T>&)> back);
  const Node& node(Var v) const;
  void accumulate(Var v, const Tensor<T>& g);

  std::vector<Node> nodes_;
  std::vector<std::optional<Tensor<T>>> grads_;
  std::vector<std::int64_t> visited_;
};

// Mean over the batch of -ln(probs[b, labels[b]]).
template <typename T>
double cross_entropy(const Tensor<T>& probs, std::span<const int> labels);

// main + weight * sum(aux).
double composite_loss(double main, std::span<const double> aux, double weight = 0.3);

}  // namespace incnet

#endif  // INCNET_TAPE_HPP_
