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


#include "incnet/eval.hpp"

#include <gmp.h>
#include <mpfr.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdio>

#include "incnet/augment.hpp"

namespace incnet {

// ---------------------------------------------------------------- ExactMean

// Exponent of the smallest positive float (the unit of the integer sums).
constexpr int kFloatLsbExponent = 149;

struct ExactMean::Impl {
  std::vector<__mpz_struct> sums;
  mpz_t term;

  explicit Impl(std::size_t slots) : sums(slots) {
    for (auto& s : sums) mpz_init(&s);
    mpz_init(term);
  }
  ~Impl() {
    for (auto& s : sums) mpz_clear(&s);
    mpz_clear(term);
  }
  Impl(const Impl&) = delete;
  Impl& operator=(const Impl&) = delete;
};

ExactMean::ExactMean(std::size_t slots) : slots_(slots), impl_(std::make_unique<Impl>(slots)) {}
ExactMean::~ExactMean() = default;
ExactMean::ExactMean(ExactMean&&) noexcept = default;
ExactMean& ExactMean::operator=(ExactMean&&) noexcept = default;

void ExactMean::add(std::span<const float> values) {
  if (values.size() != slots_) {
    throw Error("ExactMean: expected " + std::to_string(slots_) + " values, got " +
                std::to_string(values.size()));
  }
  for (float v : values) {
    if (!(v >= 0.0f && v <= 1.0f)) throw Error("ExactMean: value outside [0, 1]");
  }
  for (std::size_t i = 0; i < slots_; ++i) {
    const auto bits = std::bit_cast<std::uint32_t>(values[i]);
    const std::uint32_t exponent = (bits >> 23) & 0xffu;
    std::uint32_t mantissa = bits & 0x7fffffu;
    unsigned shift = 0;
    if (exponent != 0) {
      mantissa |= 1u << 23;
      shift = exponent - 1;
    }
    mpz_set_ui(impl_->term, mantissa);
    mpz_mul_2exp(impl_->term, impl_->term, shift);
    mpz_add(&impl_->sums[i], &impl_->sums[i], impl_->term);
  }
  ++count_;
}

std::vector<double> ExactMean::mean() const {
  if (count_ == 0) throw Error("ExactMean: no values added");
  mpz_t den;
  mpz_init(den);
  mpz_import(den, 1, -1, sizeof(count_), 0, 0, &count_);
  mpz_mul_2exp(den, den, kFloatLsbExponent);
  mpq_t q;
  mpq_init(q);
  mpfr_t r;
  mpfr_init2(r, 53);
  std::vector<double> out(slots_);
  for (std::size_t i = 0; i < slots_; ++i) {
    mpq_set_num(q, &impl_->sums[i]);
    mpq_set_den(q, den);
    mpq_canonicalize(q);
    mpfr_set_q(r, q, MPFR_RNDN);
    out[i] = mpfr_get_d(r, MPFR_RNDN);
  }
  mpfr_clear(r);
  mpq_clear(q);
  mpz_clear(den);
  return out;
}

// ---------------------------------------------------------------- ensemble

const char* to_string(Pooling p) { return p == Pooling::kMean ? "mean" : "maxcrop"; }

std::optional<Pooling> parse_pooling(const std::string& s) {
  if (s == "mean") return Pooling::kMean;
  if (s == "maxcrop") return Pooling::kMaxCrop;
  return std::nullopt;
}

std::int64_t member_classes(const EnsembleMember& m) {
  const auto shapes = infer_shapes(m.graph);
  return shapes[*m.graph.index_of(m.graph.outputs.at("main"))].per_item();
}

std::vector<float> member_probabilities(const EnsembleMember& m, const TensorF& input) {
  if (input.shape().n != 1) throw ShapeError("n", 1, input.shape().n, "ensemble input");
  Rng unused(0);
  const auto out = forward<float>(m.graph, m.params, input, Mode::kInfer, unused);
  return out.at("main").vec();
}

std::vector<double> pool_predictions(const std::vector<std::vector<std::vector<float>>>& probs,
                                     Pooling pooling) {
  if (probs.empty()) throw Error("ensemble has no models");
  if (probs.front().empty()) throw Error("ensemble has no crops");
  const std::size_t classes = probs.front().front().size();
  const std::size_t crops = probs.front().size();
  for (std::size_t m = 0; m < probs.size(); ++m) {
    if (probs[m].size() != crops) throw Error("models disagree on the number of crops");
    for (const auto& p : probs[m]) {
      if (p.size() != classes) {
        throw Error("class-count mismatch: model " + std::to_string(m) + " has " +
                    std::to_string(p.size()) + " classes, expected " + std::to_string(classes));
      }
    }
  }
  ExactMean acc(classes);
  for (const auto& member : probs) {
    if (pooling == Pooling::kMean) {
      for (const auto& p : member) acc.add(p);
    } else {
      std::vector<float> best = member.front();
      for (const auto& p : member) {
        for (std::size_t k = 0; k < classes; ++k) best[k] = std::max(best[k], p[k]);
      }
      acc.add(best);
    }
  }
  return acc.mean();
}

std::vector<double> predict_inputs(std::span<const EnsembleMember> members,
                                   std::span<const TensorF> inputs, Pooling pooling) {
  if (members.empty()) throw Error("ensemble has no models");
  const std::int64_t classes = member_classes(members.front());
  for (std::size_t m = 1; m < members.size(); ++m) {
    const std::int64_t k = member_classes(members[m]);
    if (k != classes) {
      throw Error("class-count mismatch: model " + std::to_string(m) + " has " +
                  std::to_string(k) + " classes, model 0 has " + std::to_string(classes));
    }
  }
  // Each input runs alone so that its output does not depend on the others.
  std::vector<std::vector<std::vector<float>>> probs(members.size());
  for (std::size_t m = 0; m < members.size(); ++m) {
    probs[m].reserve(inputs.size());
    for (const TensorF& x : inputs) probs[m].push_back(member_probabilities(members[m], x));
  }
  return pool_predictions(probs, pooling);
}

std::vector<double> predict(std::span<const EnsembleMember> members, const Image& image,
                            CropMode mode, Pooling pooling, const std::array<double, 3>& mean) {
  std::vector<TensorF> inputs;
  for (const Crop& c : enumerate_crops(image, mode)) inputs.push_back(mean_subtract(c.image, mean));
  return predict_inputs(members, inputs, pooling);
}

std::int64_t ensemble_cost(std::int64_t models, CropMode mode) {
  if (models < 1) throw Error("ensemble needs at least one model");
  return models * crop_count(mode);
}

// ---------------------------------------------------------------- metrics

std::int64_t label_rank(std::span<const double> dist, std::int64_t label) {
  if (label < 0 || label >= static_cast<std::int64_t>(dist.size())) {
    throw Error("label " + std::to_string(label) + " outside [0, " + std::to_string(dist.size()) + ")");
  }
  const double p = dist[static_cast<std::size_t>(label)];
  std::int64_t rank = 1;
  for (std::size_t k = 0; k < dist.size(); ++k) {
    const auto ki = static_cast<std::int64_t>(k);
    if (dist[k] > p || (dist[k] == p && ki < label)) ++rank;
  }
  return rank;
}

double topk_error(std::span<const std::vector<double>> predictions, std::span<const int> labels,
                  std::int64_t k) {
  if (k < 1) throw Error("top-k error needs k >= 1");
  if (predictions.empty()) throw Error("top-k error of an empty prediction set");
  if (predictions.size() != labels.size()) {
    throw Error("top-k error: " + std::to_string(predictions.size()) + " predictions but " +
                std::to_string(labels.size()) + " labels");
  }
  std::int64_t wrong = 0;
  for (std::size_t i = 0; i < predictions.size(); ++i) {
    if (label_rank(predictions[i], labels[i]) > k) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(predictions.size());
}

Metrics compute_metrics(std::span<const std::vector<double>> predictions,
                        std::span<const int> labels) {
  Metrics m;
  m.top1_error = topk_error(predictions, labels, 1);
  m.top5_error = topk_error(predictions, labels, 5);
  m.n_examples = static_cast<std::int64_t>(predictions.size());
  return m;
}

std::string format_metrics_table(const Metrics& m, std::int64_t models, CropMode mode,
                                 Pooling pooling) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "models   crops  cost  pooling  examples  top-1 error  top-5 error\n"
                "%6lld  %5lld  %4lld  %-7s  %8lld  %11.4f  %11.4f\n",
                static_cast<long long>(models), static_cast<long long>(crop_count(mode)),
                static_cast<long long>(ensemble_cost(models, mode)), to_string(pooling),
                static_cast<long long>(m.n_examples), m.top1_error, m.top5_error);
  return buf;
}

std::string format_metrics_csv(const Metrics& m, std::int64_t models, CropMode mode,
                               Pooling pooling) {
  char buf[512];
  std::snprintf(buf, sizeof(buf),
                "models,crops,cost,pooling,examples,top1_error,top5_error\n"
                "%lld,%lld,%lld,%s,%lld,%.6f,%.6f\n",
                static_cast<long long>(models), static_cast<long long>(crop_count(mode)),
                static_cast<long long>(ensemble_cost(models, mode)), to_string(pooling),
                static_cast<long long>(m.n_examples), m.top1_error, m.top5_error);
  return buf;
}

}  // namespace incnet
