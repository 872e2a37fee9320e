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


// Multi-crop, multi-model inference and classification metrics.

#ifndef INCNET_EVAL_HPP_
#define INCNET_EVAL_HPP_

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "incnet/crops.hpp"
#include "incnet/image.hpp"
#include "incnet/network.hpp"

namespace incnet {

// Exact running sums of non-negative float values, one slot per class.
// Every float is a multiple of 2^-149, so the sums are held as arbitrary
// precision integers in that unit. The mean is rounded to double once, which
// makes it independent of the order and grouping of the additions.
class ExactMean {
 public:
  explicit ExactMean(std::size_t slots);
  ~ExactMean();
  ExactMean(ExactMean&&) noexcept;
  ExactMean& operator=(ExactMean&&) noexcept;

  std::size_t slots() const { return slots_; }
  std::uint64_t count() const { return count_; }

  // Adds one vector of `slots()` values, each finite and in [0, 1].
  void add(std::span<const float> values);

  // Correctly rounded sum / count per slot. Throws if nothing was added.
  std::vector<double> mean() const;

 private:
  struct Impl;
  std::size_t slots_;
  std::uint64_t count_ = 0;
  std::unique_ptr<Impl> impl_;
};

enum class Pooling {
  kMean,     // mean over every (model, crop) pair
  kMaxCrop,  // per-class max over crops for each model, then mean over models
};
const char* to_string(Pooling p);
std::optional<Pooling> parse_pooling(const std::string& s);

struct EnsembleMember {
  GraphSpec graph;
  ParamStore<float> params;
};

// Softmax output of the main head for one input (1, 3, H, W).
std::vector<float> member_probabilities(const EnsembleMember& m, const TensorF& input);

// Class count of the member's main output.
std::int64_t member_classes(const EnsembleMember& m);

// Combines per-member, per-crop probability vectors: probs[m][c] is member
// m's output on crop c. Throws Error on an empty ensemble, an empty crop
// list or mismatched class counts.
std::vector<double> pool_predictions(const std::vector<std::vector<std::vector<float>>>& probs,
                                     Pooling pooling);

// Runs every member on every input and pools the results.
std::vector<double> predict_inputs(std::span<const EnsembleMember> members,
                                   std::span<const TensorF> inputs, Pooling pooling);

// Enumerates the crops of `image`, subtracts `mean` and predicts.
std::vector<double> predict(std::span<const EnsembleMember> members, const Image& image,
                            CropMode mode, Pooling pooling, const std::array<double, 3>& mean);

// Forward passes needed per image.
std::int64_t ensemble_cost(std::int64_t models, CropMode mode);

// 1-based rank of `label` in `dist`: classes with higher probability come
// first and ties go to the lower class index.
std::int64_t label_rank(std::span<const double> dist, std::int64_t label);

// Fraction of examples whose label ranks below k. Throws Error on empty
// input, k < 1, mismatched lengths or out-of-range labels.
double topk_error(std::span<const std::vector<double>> predictions, std::span<const int> labels,
                  std::int64_t k);

struct Metrics {
  double top1_error = 0.0;
  double top5_error = 0.0;
  std::int64_t n_examples = 0;
};

Metrics compute_metrics(std::span<const std::vector<double>> predictions,
                        std::span<const int> labels);

std::string format_metrics_table(const Metrics& m, std::int64_t models, CropMode mode,
                                 Pooling pooling);
std::string format_metrics_csv(const Metrics& m, std::int64_t models, CropMode mode,
                               Pooling pooling);

}  // namespace incnet

#endif  // INCNET_EVAL_HPP_
