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

#include "incnet/gradcheck.hpp"

#include <algorithm>
#include <cmath>

#include "incnet/googlenet.hpp"
#include "incnet/network.hpp"

namespace incnet {

namespace {

constexpr std::uint64_t kProjectionSeed = 0x5eedf00dull;

Var reduce_to_scalar(Tape<double>& tape, Var y) {
  const TensorD& v = tape.value(y);
  if (v.numel() == 1) return y;
  TensorD weights(v.shape());
  Rng rng(kProjectionSeed);
  for (auto& w : weights.data()) w = rng.uniform(-1.0, 1.0);
  return tape.dot(y, weights);
}

struct Evaluation {
  double value;
  std::vector<TensorD> grads;
};

Evaluation evaluate(const GradCheckFn& fn, const std::vector<TensorD>& point, bool with_grads) {
  Tape<double> tape;
  std::vector<Var> leaves;
  leaves.reserve(point.size());
  for (const TensorD& t : point) leaves.push_back(tape.leaf(t));
  const Var loss = reduce_to_scalar(tape, fn(tape, leaves));
  Evaluation e{tape.value(loss)[0], {}};
  if (!std::isfinite(e.value)) throw Error("grad_check: non-finite function value");
  if (with_grads) {
    tape.backward(loss);
    for (Var v : leaves) e.grads.push_back(tape.grad(v));
  }
  return e;
}

}  // namespace

GradCheckResult grad_check(const GradCheckFn& fn, const std::vector<TensorD>& point, double eps) {
  if (!(eps > 0)) throw Error("grad_check: eps must be positive");
  const Evaluation base = evaluate(fn, point, true);
  std::vector<TensorD> x = point;
  auto f_at = [&](std::size_t t, std::int64_t i, double delta) {
    const double saved = x[t][i];
    x[t][i] = saved + delta;
    const double v = evaluate(fn, x, false).value;
    x[t][i] = saved;
    return v;
  };

  GradCheckResult r;
  for (std::size_t t = 0; t < x.size(); ++t) {
    for (std::int64_t i = 0; i < x[t].numel(); ++i) {
      const double analytic = base.grads[t][i];
      if (!std::isfinite(analytic)) throw Error("grad_check: non-finite analytic gradient");
      const double fp = f_at(t, i, eps);
      const double fm = f_at(t, i, -eps);
      const double fp2 = f_at(t, i, eps / 2);
      const double fm2 = f_at(t, i, -eps / 2);
      const double numeric = (fp - fm) / (2 * eps);
      const double numeric_half = (fp2 - fm2) / eps;
      const double forward = (fp - base.value) / eps;
      const double backward = (base.value - fm) / eps;

      // One-sided slopes disagree at a kink sitting on the point; the two
      // central estimates disagree when a kink lies inside the probe radius.
      const bool kink_at_point =
          std::abs(forward - backward) > 1e-6 + 1e-2 * std::max(std::abs(forward), std::abs(backward));
      const bool kink_nearby =
          std::abs(numeric - numeric_half) >
          1e-7 * std::max(std::abs(numeric), std::abs(numeric_half)) +
              1e-10 * std::max(1.0, std::abs(base.value));
      if (kink_at_point || kink_nearby) {
        ++r.excluded;
        continue;
      }
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      r.max_rel_error = std::max(r.max_rel_error, std::abs(analytic - numeric) / denom);
      ++r.checked;
    }
  }
  return r;
}

namespace {

TensorD uniform_tensor(Shape s, Rng& rng) {
  TensorD t(s);
  for (auto& v : t.data()) v = rng.uniform(-1.0, 1.0);
  return t;
}

GradCheckCase conv_case(int k, int stride, int pad, std::int64_t extent) {
  return {"conv2d k" + std::to_string(k) + "/s" + std::to_string(stride),
          [stride, pad](Tape<double>& t, std::span<const Var> v) {
            return t.conv2d(v[0], v[1], v[2], stride, pad);
          },
          [k, extent](Rng& rng) {
            return std::vector<TensorD>{uniform_tensor(Shape{2, 2, extent, extent}, rng),
                                        uniform_tensor(Shape{3, 2, k, k}, rng),
                                        uniform_tensor(Shape{1, 3, 1, 1}, rng)};
          }};
}

GradCheckCase pool_case(PoolKind kind) {
  const PoolParams p{kind, 3, 2, 1, true};
  return {kind == PoolKind::kMax ? "pool2d max 3/2 ceil" : "pool2d avg 3/2 ceil",
          [p](Tape<double>& t, std::span<const Var> v) { return t.pool2d(v[0], p); },
          [](Rng& rng) { return std::vector<TensorD>{uniform_tensor(Shape{2, 2, 6, 6}, rng)}; }};
}

GradCheckCase inception_case() {
  const GraphSpec g = build_inception({2, 2, 3, 1, 2, 2}, InceptionVariant::kReduced, 3, 5, 5);
  const std::vector<ParamInfo> layout = parameter_layout(g);
  return {"inception (reduced)",
          [g, layout](Tape<double>& t, std::span<const Var> v) {
            std::map<std::string, Var> params;
            for (std::size_t i = 0; i < layout.size(); ++i) params.emplace(layout[i].name, v[i + 1]);
            Rng unused(0);
            return run_graph(t, g, v[0], params, Mode::kTrain, unused).outputs.at("main");
          },
          [layout](Rng& rng) {
            std::vector<TensorD> point{uniform_tensor(Shape{1, 3, 5, 5}, rng)};
            for (const ParamInfo& p : layout) point.push_back(uniform_tensor(p.shape, rng));
            return point;
          }};
}

}  // namespace

std::vector<GradCheckCase> standard_grad_check_cases() {
  static const std::vector<int> kLabels = {1, 3};
  std::vector<GradCheckCase> cases = {
      conv_case(1, 1, 0, 4),
      conv_case(3, 1, 1, 5),
      conv_case(5, 2, 2, 7),
      conv_case(7, 2, 3, 8),
      pool_case(PoolKind::kMax),
      pool_case(PoolKind::kAvg),
      {"relu", [](Tape<double>& t, std::span<const Var> v) { return t.relu(v[0]); },
       [](Rng& rng) { return std::vector<TensorD>{uniform_tensor(Shape{2, 3, 3, 3}, rng)}; }},
      {"linear",
       [](Tape<double>& t, std::span<const Var> v) { return t.linear(v[0], v[1], v[2]); },
       [](Rng& rng) {
         return std::vector<TensorD>{uniform_tensor(Shape{2, 6, 1, 1}, rng),
                                     uniform_tensor(Shape{4, 6, 1, 1}, rng),
                                     uniform_tensor(Shape{1, 4, 1, 1}, rng)};
       }},
      {"softmax", [](Tape<double>& t, std::span<const Var> v) { return t.softmax(v[0]); },
       [](Rng& rng) { return std::vector<TensorD>{uniform_tensor(Shape{2, 5, 1, 1}, rng)}; }},
      {"softmax + cross-entropy (fused)",
       [](Tape<double>& t, std::span<const Var> v) {
         return t.softmax_cross_entropy(v[0], kLabels);
       },
       [](Rng& rng) { return std::vector<TensorD>{uniform_tensor(Shape{2, 5, 1, 1}, rng)}; }},
      {"softmax then cross-entropy",
       [](Tape<double>& t, std::span<const Var> v) {
         return t.cross_entropy(t.softmax(v[0]), kLabels);
       },
       [](Rng& rng) { return std::vector<TensorD>{uniform_tensor(Shape{2, 5, 1, 1}, rng)}; }},
      {"concat",
       [](Tape<double>& t, std::span<const Var> v) { return t.concat(v); },
       [](Rng& rng) {
         return std::vector<TensorD>{uniform_tensor(Shape{2, 2, 3, 3}, rng),
                                     uniform_tensor(Shape{2, 3, 3, 3}, rng),
                                     uniform_tensor(Shape{2, 1, 3, 3}, rng)};
       }},
      inception_case(),
  };
  return cases;
}

std::vector<GradCheckSummary> run_grad_check_suite(const std::vector<GradCheckCase>& cases,
                                                   int points, double eps, std::uint64_t seed) {
  std::vector<GradCheckSummary> out;
  for (const GradCheckCase& c : cases) {
    Rng rng(derive_seed(seed, c.name));
    GradCheckSummary s{c.name, points, {}};
    for (int i = 0; i < points; ++i) {
      const GradCheckResult r = grad_check(c.fn, c.sample(rng), eps);
      s.result.max_rel_error = std::max(s.result.max_rel_error, r.max_rel_error);
      s.result.checked += r.checked;
      s.result.excluded += r.excluded;
    }
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace incnet
