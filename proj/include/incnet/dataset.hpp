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


// Labelled image sets on disk: a directory of images plus a labels CSV.

#ifndef INCNET_DATASET_HPP_
#define INCNET_DATASET_HPP_

#include <string>
#include <vector>

#include "incnet/image.hpp"
#include "incnet/random.hpp"
#include "incnet/tensor.hpp"

namespace incnet {

struct LabelEntry {
  std::string file;
  int label = 0;
};

// Parses "filename,class-index" lines. Blank lines and lines starting with
// '#' are skipped, as is a first line whose class field is not an integer
// (a header). Throws FormatError on malformed lines or negative labels.
std::vector<LabelEntry> parse_labels_csv(const std::string& text);
std::vector<LabelEntry> read_labels_csv(const std::string& path);

// (1, 3, H, W) tensor <-> image.
Image tensor_to_image(const TensorF& t);
TensorF image_to_nchw(const Image& img);

// ".ppm" files are decoded as PPM; any other file is read as a raw tensor
// fixture of shape (1, 3, H, W).
Image load_image(const std::string& path);

struct Dataset {
  std::vector<std::string> files;
  std::vector<Image> images;
  std::vector<int> labels;
};

Dataset load_dataset(const std::string& dir, const std::string& labels_csv);

// Deterministic labelled images for smoke tests: each class has its own
// colour and stripe frequency, with per-image noise on top. Labels cycle
// through the classes.
Dataset make_synthetic_dataset(std::size_t count, int classes, std::int64_t height,
                               std::int64_t width, std::uint64_t seed);

// Writes the images as "img_NNNN.ppm" plus "labels.csv" into `dir`.
void write_dataset(const Dataset& d, const std::string& dir);

}  // namespace incnet

#endif  // INCNET_DATASET_HPP_
