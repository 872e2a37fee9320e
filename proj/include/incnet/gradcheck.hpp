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

// Finite-difference verification of tape gradients, in fp64.

#ifndef INCNET_GRADCHECK_HPP_
#define INCNET_GRADCHECK_HPP_

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "incnet/tape.hpp"

namespace incnet {

// Records a computation on the tape given leaf variables for each input of
// the check point. A non-scalar result is reduced to a scalar with a fixed
// pseudo-random projection.
using GradCheckFn = std::function<Var(Tape<double>&, std::span<const Var>)>;

struct GradCheckResult {
  double max_rel_error = 0.0;
  std::int64_t checked = 0;
  // Coordinates where the function is not differentiable within the probe
  // radius (a relu or max-pool kink); these are skipped.
  std::int64_t excluded = 0;
};

// Compares the analytic gradient of every input coordinate with the central
// difference (f(x+eps) - f(x-eps)) / (2 eps). Relative error uses the
// denominator max(|analytic|, |numeric|, 1e-8). Throws Error on non-finite
// values.
GradCheckResult grad_check(const GradCheckFn& fn, const std::vector<TensorD>& point,
                           double eps = 1e-4);

// A differentiable computation together with a sampler for check points.
struct GradCheckCase {
  std::string name;
  GradCheckFn fn;
  std::function<std::vector<TensorD>(Rng&)> sample;
};

// conv2d at kernel sizes 1, 3, 5 and 7, max and average pooling, relu,
// linear, softmax, fused softmax + cross-entropy, cross-entropy on
// probabilities, channel concat, and a complete reduced Inception module
// (gradients w.r.t. its input and all of its parameters).
std::vector<GradCheckCase> standard_grad_check_cases();

struct GradCheckSummary {
  std::string name;
  int points = 0;
  // Worst relative error over all points; checked / excluded are totals.
  GradCheckResult result;
};

// Runs every case at `points` sampled check points.
std::vector<GradCheckSummary> run_grad_check_suite(const std::vector<GradCheckCase>& cases,
                                                   int points, double eps, std::uint64_t seed);

}  // namespace incnet

#endif  // INCNET_GRADCHECK_HPP_
