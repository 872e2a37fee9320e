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

#ifndef INCNET_ERROR_HPP_
#define INCNET_ERROR_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>

namespace incnet {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A dimension disagreed with what an operation required. `dimension` names
// the offending extent ("channels", "height", "features", ...).
class ShapeError : public Error {
 public:
  ShapeError(std::string dimension, std::int64_t expected, std::int64_t actual,
             const std::string& message)
      : Error(message + " [" + dimension + ": expected " + std::to_string(expected) +
              ", got " + std::to_string(actual) + "]"),
        dimension_(std::move(dimension)),
        expected_(expected),
        actual_(actual) {}

  const std::string& dimension() const { return dimension_; }
  std::int64_t expected() const { return expected_; }
  std::int64_t actual() const { return actual_; }

 private:
  std::string dimension_;
  std::int64_t expected_;
  std::int64_t actual_;
};

// Malformed or truncated file contents.
class FormatError : public Error {
 public:
  using Error::Error;
};

// Failure inside a graph node; the message carries the layer name.
class LayerError : public Error {
 public:
  LayerError(std::string layer, const std::string& what)
      : Error("layer '" + layer + "': " + what), layer_(std::move(layer)) {}
  const std::string& layer() const { return layer_; }

 private:
  std::string layer_;
};

}  // namespace incnet

#endif  // INCNET_ERROR_HPP_
