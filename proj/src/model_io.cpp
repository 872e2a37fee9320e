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


#include "incnet/model_io.hpp"

#include <set>

#include "incnet/tensor_io.hpp"

namespace incnet {
namespace {

constexpr char kMagic[4] = {'I', 'N', 'C', 'M'};

void put_string(std::string& out, const std::string& s) {
  le::put_u32(out, static_cast<std::uint32_t>(s.size()));
  out += s;
}

std::string get_string(le::Reader& r) { return r.raw(r.u32()); }

}  // namespace

std::string encode_model(const GraphSpec& g, const ParamStore<float>& params) {
  check_params(g, params);
  std::string out(kMagic, sizeof(kMagic));
  le::put_u32(out, kModelFileVersion);
  put_string(out, graph_to_text(g));
  le::put_u32(out, static_cast<std::uint32_t>(params.size()));
  for (const auto& [name, t] : params) {
    put_string(out, name);
    const Shape& s = t.shape();
    for (std::int64_t e : {s.n, s.c, s.h, s.w}) le::put_u32(out, static_cast<std::uint32_t>(e));
    for (float v : t.data()) le::put_f32(out, v);
  }
  return out;
}

Model decode_model(const std::string& bytes) {
  le::Reader r(bytes);
  if (bytes.size() < sizeof(kMagic) || bytes.compare(0, sizeof(kMagic), kMagic, sizeof(kMagic)) != 0) {
    throw FormatError("model file: bad magic (expected \"INCM\")");
  }
  r.raw(sizeof(kMagic));
  const std::uint32_t version = r.u32();
  if (version != kModelFileVersion) {
    throw FormatError("model file: unsupported version " + std::to_string(version) +
                      " (expected " + std::to_string(kModelFileVersion) + ")");
  }
  Model m;
  m.graph = parse_graph_text(get_string(r));
  const std::uint32_t count = r.u32();
  for (std::uint32_t i = 0; i < count; ++i) {
    std::string name = get_string(r);
    Shape s;
    s.n = r.u32();
    s.c = r.u32();
    s.h = r.u32();
    s.w = r.u32();
    try {
      validate_shape(s);
    } catch (const ShapeError& e) {
      throw FormatError("model file: parameter '" + name + "': " + e.what());
    }
    const auto numel = static_cast<std::size_t>(s.numel());
    if (r.remaining() / 4 < numel) {
      throw FormatError("model file: truncated data for parameter '" + name + "'");
    }
    std::vector<float> data(numel);
    for (float& v : data) v = r.f32();
    if (!m.params.emplace(name, TensorF(s, data)).second) {
      throw FormatError("model file: duplicate parameter '" + name + "'");
    }
  }
  if (r.remaining() != 0) {
    throw FormatError("model file: " + std::to_string(r.remaining()) + " trailing bytes");
  }
  check_params(m.graph, m.params);
  if (count != parameter_layout(m.graph).size()) {
    throw FormatError("model file: parameters not used by the stored graph");
  }
  return m;
}

void save_model(const std::string& path, const GraphSpec& g, const ParamStore<float>& params) {
  write_file(path, encode_model(g, params));
}

Model load_model(const std::string& path) { return decode_model(read_file(path)); }

ParamStore<float> adapt_params(const Model& model, const GraphSpec& target,
                               std::vector<std::string>* warnings) {
  ParamStore<float> out;
  std::set<std::string> used;
  for (const ParamInfo& info : parameter_layout(target)) {
    const auto it = model.params.find(info.name);
    if (it == model.params.end()) throw LayerError(info.layer, "parameter '" + info.name + "' missing from model file");
    if (it->second.shape() != info.shape) {
      throw LayerError(info.layer, "parameter '" + info.name + "' has shape " +
                                       to_string(it->second.shape()) + ", graph expects " +
                                       to_string(info.shape));
    }
    out.emplace(info.name, it->second);
    used.insert(info.name);
  }
  for (const ParamInfo& info : parameter_layout(model.graph)) {
    if (used.count(info.name)) continue;
    if (info.head == Head::kMain) {
      throw LayerError(info.layer, "main-head parameter '" + info.name + "' has no place in the target graph");
    }
    if (warnings) warnings->push_back("dropping auxiliary parameter '" + info.name + "'");
  }
  return out;
}

GraphSpec strip_aux(const GraphSpec& g) {
  GraphSpec out;
  out.family = g.family;
  for (const LayerSpec& l : g.nodes) {
    if (l.head == Head::kMain) out.nodes.push_back(l);
  }
  out.outputs["main"] = g.outputs.at("main");
  return out;
}

}  // namespace incnet
