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

#include "incnet/tape.hpp"

#include <cmath>

namespace incnet {

namespace {

void check_labels(std::span<const int> labels, std::int64_t batch, std::int64_t classes) {
  if (static_cast<std::int64_t>(labels.size()) != batch) {
    throw ShapeError("labels", batch, static_cast<std::int64_t>(labels.size()),
                     "one label per batch item");
  }
  for (int l : labels) {
    if (l < 0 || l >= classes) {
      throw Error("label " + std::to_string(l) + " out of range [0, " + std::to_string(classes) +
                  ")");
    }
  }
}

}  // namespace

template <typename T>
Var Tape<T>::push(std::string op, Tensor<T> value, std::function<void(const Tensor<T>&)> back) {
  nodes_.push_back(Node{std::move(op), std::move(value), std::move(back)});
  grads_.emplace_back();
  return Var{static_cast<std::int64_t>(nodes_.size()) - 1};
}

template <typename T>
auto Tape<T>::node(Var v) const -> const Node& {
  if (v.id < 0 || v.id >= static_cast<std::int64_t>(nodes_.size())) {
    throw Error("variable " + std::to_string(v.id) + " is not recorded on this tape");
  }
  return nodes_[static_cast<std::size_t>(v.id)];
}

template <typename T>
void Tape<T>::accumulate(Var v, const Tensor<T>& g) {
  auto& slot = grads_[static_cast<std::size_t>(v.id)];
  if (!slot) {
    slot = g;
    return;
  }
  if (slot->shape() != g.shape()) {
    throw ShapeError("gradient", slot->numel(), g.numel(), "gradient accumulator shape");
  }
  auto dst = slot->data();
  auto src = g.data();
  for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += src[i];
}

template <typename T>
Var Tape<T>::leaf(Tensor<T> value) {
  return push("leaf", std::move(value), nullptr);
}

template <typename T>
Var Tape<T>::conv2d(Var x, Var weights, Var bias, int stride, int padding) {
  ConvParams<T> p{value(weights), value(bias), stride, padding};
  Tensor<T> y = incnet::conv2d(value(x), p);
  return push("conv2d", std::move(y), [this, x, weights, bias, stride, padding](const Tensor<T>& g) {
    ConvParams<T> params{value(weights), value(bias), stride, padding};
    ConvGrads<T> grads = conv2d_backward(value(x), params, g);
    accumulate(x, grads.input);
    accumulate(weights, grads.weights);
    accumulate(bias, grads.bias);
  });
}

template <typename T>
Var Tape<T>::pool2d(Var x, const PoolParams& params) {
  Tensor<T> y = incnet::pool2d(value(x), params);
  return push(params.kind == PoolKind::kMax ? "maxpool" : "avgpool", std::move(y),
              [this, x, params](const Tensor<T>& g) {
                accumulate(x, pool2d_backward(value(x), params, g));
              });
}

template <typename T>
Var Tape<T>::relu(Var x) {
  return push("relu", incnet::relu(value(x)),
              [this, x](const Tensor<T>& g) { accumulate(x, relu_backward(value(x), g)); });
}

template <typename T>
Var Tape<T>::linear(Var x, Var weights, Var bias) {
  Tensor<T> y = incnet::linear(value(x), value(weights), value(bias));
  return push("linear", std::move(y), [this, x, weights, bias](const Tensor<T>& g) {
    LinearGrads<T> grads = linear_backward(value(x), value(weights), g);
    accumulate(x, grads.input);
    accumulate(weights, grads.weights);
    accumulate(bias, grads.bias.reshaped(value(bias).shape()));
  });
}

template <typename T>
Var Tape<T>::softmax(Var x) {
  Var out = push("softmax", incnet::softmax(value(x)), nullptr);
  nodes_.back().back = [this, x, out](const Tensor<T>& g) {
    accumulate(x, softmax_backward(value(out), g));
  };
  return out;
}

template <typename T>
Var Tape<T>::dropout(Var x, double rate, Mode mode, Rng& rng) {
  DropoutResult<T> r = incnet::dropout(value(x), rate, mode, rng);
  return push("dropout", std::move(r.output),
              [this, x, mask = std::move(r.mask)](const Tensor<T>& g) {
                Tensor<T> dx(g.shape());
                for (std::int64_t i = 0; i < g.numel(); ++i) dx[i] = g[i] * mask[i];
                accumulate(x, dx);
              });
}

template <typename T>
Var Tape<T>::concat(std::span<const Var> xs) {
  std::vector<Tensor<T>> values;
  values.reserve(xs.size());
  for (Var v : xs) values.push_back(value(v));
  Tensor<T> y = concat_channels<T>(values);
  std::vector<Var> inputs(xs.begin(), xs.end());
  return push("concat", std::move(y), [this, inputs](const Tensor<T>& g) {
    std::int64_t begin = 0;
    for (Var v : inputs) {
      const std::int64_t c = value(v).shape().c;
      accumulate(v, slice_channels(g, begin, c));
      begin += c;
    }
  });
}

template <typename T>
Var Tape<T>::softmax_cross_entropy(Var logits, std::span<const int> labels) {
  const Tensor<T>& z = value(logits);
  const std::int64_t batch = z.shape().n;
  const std::int64_t classes = z.shape().per_item();
  check_labels(labels, batch, classes);
  Tensor<T> probs = incnet::softmax(z);
  std::vector<int> ls(labels.begin(), labels.end());
  const T loss = static_cast<T>(incnet::cross_entropy(probs, ls));
  return push("softmax_cross_entropy", Tensor<T>(Shape{}, loss),
              [this, logits, probs = std::move(probs), ls, batch, classes](const Tensor<T>& g) {
                Tensor<T> dz = probs;
                const T scale = g[0] / static_cast<T>(batch);
                for (std::int64_t b = 0; b < batch; ++b) {
                  T* row = dz.item(b);
                  row[ls[static_cast<std::size_t>(b)]] -= T(1);
                  for (std::int64_t k = 0; k < classes; ++k) row[k] *= scale;
                }
                accumulate(logits, dz);
              });
}

template <typename T>
Var Tape<T>::cross_entropy(Var probs, std::span<const int> labels) {
  const Tensor<T>& p = value(probs);
  const std::int64_t batch = p.shape().n;
  check_labels(labels, batch, p.shape().per_item());
  std::vector<int> ls(labels.begin(), labels.end());
  const T loss = static_cast<T>(incnet::cross_entropy(p, ls));
  return push("cross_entropy", Tensor<T>(Shape{}, loss),
              [this, probs, ls, batch](const Tensor<T>& g) {
                const Tensor<T>& pv = value(probs);
                Tensor<T> dp(pv.shape());
                for (std::int64_t b = 0; b < batch; ++b) {
                  const int l = ls[static_cast<std::size_t>(b)];
                  dp.item(b)[l] = -g[0] / (static_cast<T>(batch) * pv.item(b)[l]);
                }
                accumulate(probs, dp);
              });
}

template <typename T>
Var Tape<T>::sum(Var x) {
  T s = 0;
  for (T v : value(x).data()) s += v;
  return push("sum", Tensor<T>(Shape{}, s), [this, x](const Tensor<T>& g) {
    accumulate(x, Tensor<T>(value(x).shape(), g[0]));
  });
}

template <typename T>
Var Tape<T>::dot(Var x, const Tensor<T>& weights) {
  const Tensor<T>& xv = value(x);
  if (xv.shape() != weights.shape()) {
    throw ShapeError("numel", xv.numel(), weights.numel(), "dot operands must share a shape");
  }
  T s = 0;
  for (std::int64_t i = 0; i < xv.numel(); ++i) s += xv[i] * weights[i];
  return push("dot", Tensor<T>(Shape{}, s), [this, x, weights](const Tensor<T>& g) {
    Tensor<T> dx(weights.shape());
    for (std::int64_t i = 0; i < dx.numel(); ++i) dx[i] = weights[i] * g[0];
    accumulate(x, dx);
  });
}

template <typename T>
Var Tape<T>::weighted_sum(std::span<const Var> scalars, std::span<const T> weights) {
  if (scalars.size() != weights.size()) {
    throw ShapeError("terms", static_cast<std::int64_t>(scalars.size()),
                     static_cast<std::int64_t>(weights.size()), "one weight per scalar");
  }
  T s = 0;
  for (std::size_t i = 0; i < scalars.size(); ++i) {
    const Tensor<T>& v = value(scalars[i]);
    if (v.numel() != 1) throw ShapeError("numel", 1, v.numel(), "weighted_sum takes scalars");
    s += weights[i] * v[0];
  }
  std::vector<Var> in(scalars.begin(), scalars.end());
  std::vector<T> w(weights.begin(), weights.end());
  return push("weighted_sum", Tensor<T>(Shape{}, s), [this, in, w](const Tensor<T>& g) {
    for (std::size_t i = 0; i < in.size(); ++i) accumulate(in[i], Tensor<T>(Shape{}, w[i] * g[0]));
  });
}

template <typename T>
const Tensor<T>& Tape<T>::value(Var v) const {
  return node(v).value;
}

template <typename T>
Tensor<T> Tape<T>::grad(Var v) const {
  const Node& n = node(v);
  const auto& slot = grads_[static_cast<std::size_t>(v.id)];
  return slot ? *slot : Tensor<T>(n.value.shape());
}

template <typename T>
bool Tape<T>::has_grad(Var v) const {
  node(v);
  return grads_[static_cast<std::size_t>(v.id)].has_value();
}

template <typename T>
void Tape<T>::backward(Var loss, T seed) {
  if (nodes_.empty()) throw Error("backward() called before any forward operation");
  const Node& l = node(loss);
  if (l.value.numel() != 1) {
    throw ShapeError("numel", 1, l.value.numel(), "backward() needs a scalar loss");
  }
  for (auto& g : grads_) g.reset();
  visited_.clear();
  grads_[static_cast<std::size_t>(loss.id)] = Tensor<T>(l.value.shape(), seed);
  for (std::int64_t id = loss.id; id >= 0; --id) {
    const auto idx = static_cast<std::size_t>(id);
    if (!grads_[idx]) continue;
    visited_.push_back(id);
    if (nodes_[idx].back) {
      // Copy: accumulate() may target an earlier slot but never this one.
      const Tensor<T> g = *grads_[idx];
      nodes_[idx].back(g);
    }
  }
}

template <typename T>
double cross_entropy(const Tensor<T>& probs, std::span<const int> labels) {
  const std::int64_t batch = probs.shape().n;
  check_labels(labels, batch, probs.shape().per_item());
  double total = 0;
  for (std::int64_t b = 0; b < batch; ++b) {
    total -= std::log(static_cast<double>(probs.item(b)[labels[static_cast<std::size_t>(b)]]));
  }
  return total / static_cast<double>(batch);
}

double composite_loss(double main, std::span<const double> aux, double weight) {
  if (weight < 0) throw Error("auxiliary loss weight must be non-negative");
  double s = 0;
  for (double a : aux) s += a;
  return main + weight * s;
}

template class Tape<float>;
template class Tape<double>;
template double cross_entropy(const Tensor<float>&, std::span<const int>);
template double cross_entropy(const Tensor<double>&, std::span<const int>);

}  // namespace incnet
