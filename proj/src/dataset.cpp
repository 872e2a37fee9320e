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


#include "incnet/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <sstream>

#include "incnet/tensor_io.hpp"

namespace incnet {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

bool parse_int(const std::string& s, int& out) {
  const auto* end = s.data() + s.size();
  const auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return ec == std::errc() && ptr == end;
}

}  // namespace

std::vector<LabelEntry> parse_labels_csv(const std::string& text) {
  std::vector<LabelEntry> out;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos || line.find(',', comma + 1) != std::string::npos) {
      throw FormatError("labels line " + std::to_string(line_no) + ": expected 'filename,class'");
    }
    LabelEntry e;
    e.file = trim(line.substr(0, comma));
    const std::string label = trim(line.substr(comma + 1));
    const bool ok = parse_int(label, e.label);
    if (!ok && first) {
      first = false;
      continue;
    }
    first = false;
    if (!ok || e.file.empty()) {
      throw FormatError("labels line " + std::to_string(line_no) + ": bad entry '" + line + "'");
    }
    if (e.label < 0) throw FormatError("labels line " + std::to_string(line_no) + ": negative class");
    out.push_back(std::move(e));
  }
  return out;
}

std::vector<LabelEntry> read_labels_csv(const std::string& path) {
  return parse_labels_csv(read_file(path));
}

Image tensor_to_image(const TensorF& t) {
  const Shape& s = t.shape();
  if (s.n != 1) throw ShapeError("n", 1, s.n, "image tensor");
  if (s.c != 3) throw ShapeError("c", 3, s.c, "image tensor");
  Image img(s.h, s.w);
  for (std::int64_t c = 0; c < 3; ++c) {
    for (std::int64_t y = 0; y < s.h; ++y) {
      for (std::int64_t x = 0; x < s.w; ++x) img.at(y, x, c) = t.at(0, c, y, x);
    }
  }
  return img;
}

TensorF image_to_nchw(const Image& img) {
  TensorF t(Shape{1, 3, img.height(), img.width()});
  for (std::int64_t c = 0; c < 3; ++c) {
    for (std::int64_t y = 0; y < img.height(); ++y) {
      for (std::int64_t x = 0; x < img.width(); ++x) t.at(0, c, y, x) = img.at(y, x, c);
    }
  }
  return t;
}

Image load_image(const std::string& path) {
  if (std::filesystem::path(path).extension() == ".ppm") return read_ppm(path);
  const AnyTensor any = read_tensor_file(path);
  if (const auto* f = std::get_if<TensorF>(&any)) return tensor_to_image(*f);
  return tensor_to_image(std::get<TensorD>(any).cast<float>());
}

Dataset load_dataset(const std::string& dir, const std::string& labels_csv) {
  Dataset d;
  for (const LabelEntry& e : read_labels_csv(labels_csv)) {
    d.files.push_back(e.file);
    d.images.push_back(load_image((std::filesystem::path(dir) / e.file).string()));
    d.labels.push_back(e.label);
  }
  if (d.images.empty()) throw FormatError("labels file '" + labels_csv + "' lists no images");
  return d;
}

Dataset make_synthetic_dataset(std::size_t count, int classes, std::int64_t height,
                               std::int64_t width, std::uint64_t seed) {
  if (classes < 1) throw Error("synthetic dataset needs at least one class");
  Dataset d;
  for (std::size_t i = 0; i < count; ++i) {
    const int label = static_cast<int>(i % static_cast<std::size_t>(classes));
    Rng rng(derive_seed(seed, "synthetic/" + std::to_string(i)));
    Rng class_rng(derive_seed(seed, "class/" + std::to_string(label)));
    const std::array<double, 3> colour{class_rng.uniform(0.2, 0.8), class_rng.uniform(0.2, 0.8),
                                       class_rng.uniform(0.2, 0.8)};
    const double freq = 2.0 + label;
    const bool vertical = label % 2 == 1;
    Image img(height, width);
    for (std::int64_t y = 0; y < height; ++y) {
      for (std::int64_t x = 0; x < width; ++x) {
        const double t = static_cast<double>(vertical ? x : y) / static_cast<double>(vertical ? width : height);
        const double stripe = 0.15 * std::sin(6.283185307179586 * freq * t);
        for (std::int64_t c = 0; c < 3; ++c) {
          const double v = colour[static_cast<std::size_t>(c)] + stripe + rng.uniform(-0.1, 0.1);
          img.at(y, x, c) = static_cast<float>(std::clamp(v, 0.0, 1.0));
        }
      }
    }
    char name[32];
    std::snprintf(name, sizeof(name), "img_%04zu.ppm", i);
    d.files.emplace_back(name);
    d.images.push_back(std::move(img));
    d.labels.push_back(label);
  }
  return d;
}

void write_dataset(const Dataset& d, const std::string& dir) {
  std::filesystem::create_directories(dir);
  std::string csv = "filename,label\n";
  for (std::size_t i = 0; i < d.images.size(); ++i) {
    write_ppm((std::filesystem::path(dir) / d.files[i]).string(), d.images[i]);
    csv += d.files[i] + "," + std::to_string(d.labels[i]) + "\n";
  }
  write_file((std::filesystem::path(dir) / "labels.csv").string(), csv);
}

}  // namespace incnet
