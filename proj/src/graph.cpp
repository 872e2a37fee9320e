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

#include "incnet/graph.hpp"

#include <algorithm>
#include <charconv>
#include <set>
#include <sstream>

#include "incnet/ops.hpp"

namespace incnet {

namespace {

constexpr std::pair<LayerKind, const char*> kKindNames[] = {
    {LayerKind::kInput, "input"},     {LayerKind::kConv, "conv"},
    {LayerKind::kMaxPool, "maxpool"}, {LayerKind::kAvgPool, "avgpool"},
    {LayerKind::kRelu, "relu"},       {LayerKind::kDropout, "dropout"},
    {LayerKind::kLinear, "linear"},   {LayerKind::kSoftmax, "softmax"},
    {LayerKind::kConcat, "concat"},
};

constexpr std::pair<Head, const char*> kHeadNames[] = {
    {Head::kMain, "main"}, {Head::kAux1, "aux1"}, {Head::kAux2, "aux2"}};

PoolParams pool_params(const LayerSpec& l) {
  return PoolParams{l.kind == LayerKind::kMaxPool ? PoolKind::kMax : PoolKind::kAvg, l.kernel,
                    l.stride, l.pad, l.ceil_mode};
}

void require(bool ok, const LayerSpec& l, const std::string& what) {
  if (!ok) throw LayerError(l.name, what);
}

void check_geometry(const LayerSpec& l) {
  const bool spatial = l.kind == LayerKind::kConv || l.kind == LayerKind::kMaxPool ||
                       l.kind == LayerKind::kAvgPool;
  const bool pool = l.kind == LayerKind::kMaxPool || l.kind == LayerKind::kAvgPool;
  const bool has_out =
      l.kind == LayerKind::kConv || l.kind == LayerKind::kLinear || l.kind == LayerKind::kInput;
  if (spatial) {
    require(l.kernel >= 1 && l.stride >= 1 && l.pad >= 0, l, "kernel/stride/pad required");
  } else {
    require(l.kernel == 0 && l.stride == 0 && l.pad == 0, l, "unexpected kernel geometry");
  }
  require(pool || !l.ceil_mode, l, "ceil_mode only applies to pooling");
  if (has_out) {
    require(l.out_channels >= 1, l, "channel count required");
  } else {
    require(l.out_channels == 0, l, "unexpected channel count");
  }
  if (l.kind == LayerKind::kDropout) {
    require(l.rate >= 0.0 && l.rate < 1.0, l, "dropout rate must be in [0, 1)");
  } else {
    require(l.rate == 0.0, l, "rate only applies to dropout");
  }
  if (l.kind == LayerKind::kInput) {
    require(l.height >= 1 && l.width >= 1, l, "input extents required");
    require(l.inputs.empty(), l, "input placeholder takes no inputs");
  } else {
    require(l.height == 0 && l.width == 0, l, "extents only apply to the input placeholder");
    if (l.kind == LayerKind::kConcat) {
      require(!l.inputs.empty(), l, "concat needs at least one input");
    } else {
      require(l.inputs.size() == 1, l, "expected exactly one input");
    }
  }
}

std::string format_double(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

}  // namespace

const char* to_string(LayerKind k) {
  for (auto [kind, name] : kKindNames) {
    if (kind == k) return name;
  }
  return "?";
}

const char* to_string(Head h) {
  for (auto [head, name] : kHeadNames) {
    if (head == h) return name;
  }
  return "?";
}

std::optional<LayerKind> parse_layer_kind(const std::string& s) {
  for (auto [kind, name] : kKindNames) {
    if (s == name) return kind;
  }
  return std::nullopt;
}

std::optional<Head> parse_head(const std::string& s) {
  for (auto [head, name] : kHeadNames) {
    if (s == name) return head;
  }
  return std::nullopt;
}

std::optional<std::size_t> GraphSpec::index_of(const std::string& name) const {
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].name == name) return i;
  }
  return std::nullopt;
}

const LayerSpec& GraphSpec::at(const std::string& name) const {
  auto i = index_of(name);
  if (!i) throw Error("no layer named '" + name + "'");
  return nodes[*i];
}

Shape infer_node_shape(const LayerSpec& l, const std::vector<Shape>& in) {
  try {
    switch (l.kind) {
      case LayerKind::kInput:
        return Shape{1, l.out_channels, l.height, l.width};
      case LayerKind::kConv:
        return Shape{in[0].n, l.out_channels,
                     conv_output_extent(in[0].h, l.kernel, l.stride, l.pad, "height"),
                     conv_output_extent(in[0].w, l.kernel, l.stride, l.pad, "width")};
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool: {
        const PoolParams p = pool_params(l);
        return Shape{in[0].n, in[0].c, pool_output_extent(in[0].h, p, "height"),
                     pool_output_extent(in[0].w, p, "width")};
      }
      case LayerKind::kRelu:
      case LayerKind::kDropout:
      case LayerKind::kSoftmax:
        return in[0];
      case LayerKind::kLinear:
        return Shape{in[0].n, l.out_channels, 1, 1};
      case LayerKind::kConcat: {
        Shape out = in[0];
        out.c = 0;
        for (std::size_t i = 0; i < in.size(); ++i) {
          const std::string branch = "concat input '" + l.inputs[i] + "'";
          if (in[i].h != in[0].h) throw ShapeError("height", in[0].h, in[i].h, branch);
          if (in[i].w != in[0].w) throw ShapeError("width", in[0].w, in[i].w, branch);
          out.c += in[i].c;
        }
        return out;
      }
    }
  } catch (const LayerError&) {
    throw;
  } catch (const Error& e) {
    throw LayerError(l.name, e.what());
  }
  throw LayerError(l.name, "unknown layer kind");
}

std::vector<Shape> infer_shapes(const GraphSpec& g, std::int64_t batch) {
  if (g.nodes.empty() || g.nodes.front().kind != LayerKind::kInput) {
    throw Error("graph must start with an input placeholder");
  }
  std::map<std::string, std::size_t> index;
  std::vector<Shape> shapes;
  shapes.reserve(g.nodes.size());
  for (const LayerSpec& l : g.nodes) {
    std::vector<Shape> in;
    for (const std::string& name : l.inputs) {
      auto it = index.find(name);
      if (it == index.end()) {
        throw LayerError(l.name, "input '" + name + "' is not defined earlier in the graph");
      }
      in.push_back(shapes[it->second]);
    }
    Shape s = infer_node_shape(l, in);
    if (l.kind == LayerKind::kInput) s.n = batch;
    if (!index.emplace(l.name, shapes.size()).second) {
      throw LayerError(l.name, "duplicate layer name");
    }
    shapes.push_back(s);
  }
  return shapes;
}

void validate(const GraphSpec& g) {
  if (g.nodes.empty()) throw Error("empty graph");
  for (std::size_t i = 0; i < g.nodes.size(); ++i) {
    const LayerSpec& l = g.nodes[i];
    require(!l.name.empty(), l, "empty layer name");
    require((i == 0) == (l.kind == LayerKind::kInput), l,
            "the input placeholder must be the first and only input node");
    check_geometry(l);
  }
  infer_shapes(g);
  if (!g.outputs.count("main")) throw Error("graph has no main output");
  for (const auto& [key, node] : g.outputs) {
    if (key != "main" && key != "aux1" && key != "aux2") {
      throw Error("unknown output key '" + key + "'");
    }
    if (!g.index_of(node)) throw Error("output '" + key + "' names unknown layer '" + node + "'");
  }
}

int parameterized_depth(const GraphSpec& g) {
  std::map<std::string, int> depth;
  for (const LayerSpec& l : g.nodes) {
    int d = 0;
    for (const std::string& in : l.inputs) d = std::max(d, depth.at(in));
    depth[l.name] = d + (l.has_params() ? 1 : 0);
  }
  return depth.at(g.outputs.at("main"));
}

std::string graph_to_text(const GraphSpec& g) {
  std::ostringstream os;
  os << "graph " << g.family << "\n";
  for (const LayerSpec& l : g.nodes) {
    os << "node " << l.name << " " << to_string(l.kind);
    if (!l.inputs.empty()) {
      os << " in=";
      for (std::size_t i = 0; i < l.inputs.size(); ++i) os << (i ? "," : "") << l.inputs[i];
    }
    switch (l.kind) {
      case LayerKind::kInput:
        os << " c=" << l.out_channels << " h=" << l.height << " w=" << l.width;
        break;
      case LayerKind::kConv:
        os << " k=" << l.kernel << " s=" << l.stride << " p=" << l.pad << " out=" << l.out_channels;
        break;
      case LayerKind::kMaxPool:
      case LayerKind::kAvgPool:
        os << " k=" << l.kernel << " s=" << l.stride << " p=" << l.pad
           << " ceil=" << (l.ceil_mode ? 1 : 0);
        break;
      case LayerKind::kDropout:
        os << " rate=" << format_double(l.rate);
        break;
      case LayerKind::kLinear:
        os << " out=" << l.out_channels;
        break;
      default:
        break;
    }
    if (!l.row.empty()) os << " row=" << l.row;
    os << " head=" << to_string(l.head) << "\n";
  }
  for (const auto& [key, node] : g.outputs) os << "output " << key << " " << node << "\n";
  return os.str();
}

GraphSpec parse_graph_text(const std::string& text) {
  GraphSpec g;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  bool saw_header = false;
  auto fail = [&](const std::string& what) {
    throw FormatError("graph text line " + std::to_string(lineno) + ": " + what);
  };
  auto to_int = [&](const std::string& v) {
    std::int64_t x = 0;
    auto r = std::from_chars(v.data(), v.data() + v.size(), x);
    if (r.ec != std::errc() || r.ptr != v.data() + v.size()) fail("bad integer '" + v + "'");
    return x;
  };
  while (std::getline(in, line)) {
    ++lineno;
    std::istringstream ls(line);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "graph") {
      if (!(ls >> g.family)) fail("missing family");
      saw_header = true;
    } else if (tag == "node") {
      LayerSpec l;
      std::string kind;
      if (!(ls >> l.name >> kind)) fail("expected 'node NAME KIND'");
      auto k = parse_layer_kind(kind);
      if (!k) fail("unknown layer kind '" + kind + "'");
      l.kind = *k;
      std::string field;
      while (ls >> field) {
        auto eq = field.find('=');
        if (eq == std::string::npos) fail("expected key=value, got '" + field + "'");
        const std::string key = field.substr(0, eq);
        const std::string val = field.substr(eq + 1);
        if (key == "in") {
          std::istringstream vs(val);
          std::string name;
          while (std::getline(vs, name, ',')) l.inputs.push_back(name);
        } else if (key == "k") {
          l.kernel = static_cast<int>(to_int(val));
        } else if (key == "s") {
          l.stride = static_cast<int>(to_int(val));
        } else if (key == "p") {
          l.pad = static_cast<int>(to_int(val));
        } else if (key == "ceil") {
          l.ceil_mode = to_int(val) != 0;
        } else if (key == "out" || key == "c") {
          l.out_channels = to_int(val);
        } else if (key == "h") {
          l.height = to_int(val);
        } else if (key == "w") {
          l.width = to_int(val);
        } else if (key == "rate") {
          auto r = std::from_chars(val.data(), val.data() + val.size(), l.rate);
          if (r.ec != std::errc()) fail("bad rate '" + val + "'");
        } else if (key == "row") {
          l.row = val;
        } else if (key == "head") {
          auto h = parse_head(val);
          if (!h) fail("unknown head '" + val + "'");
          l.head = *h;
        } else {
          fail("unknown field '" + key + "'");
        }
      }
      g.nodes.push_back(std::move(l));
    } else if (tag == "output") {
      std::string key, node;
      if (!(ls >> key >> node)) fail("expected 'output KEY NODE'");
      g.outputs[key] = node;
    } else {
      fail("unknown record '" + tag + "'");
    }
  }
  if (!saw_header) throw FormatError("graph text has no 'graph' header");
  validate(g);
  return g;
}

GraphBuilder::GraphBuilder(std::string family, std::int64_t channels, std::int64_t height,
                           std::int64_t width) {
  graph_.family = std::move(family);
  LayerSpec in;
  in.name = "data";
  in.kind = LayerKind::kInput;
  in.out_channels = channels;
  in.height = height;
  in.width = width;
  in.row = "input";
  add(std::move(in));
}

const Shape& GraphBuilder::shape_of(const std::string& name) const {
  auto it = shapes_.find(name);
  if (it == shapes_.end()) throw Error("no layer named '" + name + "'");
  return it->second;
}

std::string GraphBuilder::add(LayerSpec layer) {
  if (layer.kind != LayerKind::kInput) {
    layer.row = row_;
    layer.head = head_;
  }
  check_geometry(layer);
  if (shapes_.count(layer.name)) throw LayerError(layer.name, "duplicate layer name");
  std::vector<Shape> in;
  for (const std::string& name : layer.inputs) {
    auto it = shapes_.find(name);
    if (it == shapes_.end()) throw LayerError(layer.name, "unknown input '" + name + "'");
    in.push_back(it->second);
  }
  shapes_[layer.name] = infer_node_shape(layer, in);
  graph_.nodes.push_back(std::move(layer));
  return graph_.nodes.back().name;
}

std::string GraphBuilder::conv(const std::string& name, const std::string& input,
                               std::int64_t filters, int kernel, int stride, int pad) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kConv;
  l.inputs = {input};
  l.kernel = kernel;
  l.stride = stride;
  l.pad = pad;
  l.out_channels = filters;
  return add(std::move(l));
}

std::string GraphBuilder::conv_relu(const std::string& name, const std::string& input,
                                    std::int64_t filters, int kernel, int stride, int pad) {
  const std::string c = conv(name, input, filters, kernel, stride, pad);
  return relu(name + "/relu", c);
}

std::string GraphBuilder::max_pool(const std::string& name, const std::string& input, int kernel,
                                   int stride, int pad, bool ceil_mode) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kMaxPool;
  l.inputs = {input};
  l.kernel = kernel;
  l.stride = stride;
  l.pad = pad;
  l.ceil_mode = ceil_mode;
  return add(std::move(l));
}

std::string GraphBuilder::avg_pool(const std::string& name, const std::string& input, int kernel,
                                   int stride) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kAvgPool;
  l.inputs = {input};
  l.kernel = kernel;
  l.stride = stride;
  return add(std::move(l));
}

std::string GraphBuilder::relu(const std::string& name, const std::string& input) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kRelu;
  l.inputs = {input};
  return add(std::move(l));
}

std::string GraphBuilder::dropout(const std::string& name, const std::string& input, double rate) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kDropout;
  l.inputs = {input};
  l.rate = rate;
  return add(std::move(l));
}

std::string GraphBuilder::linear(const std::string& name, const std::string& input,
                                 std::int64_t outputs) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kLinear;
  l.inputs = {input};
  l.out_channels = outputs;
  return add(std::move(l));
}

std::string GraphBuilder::softmax(const std::string& name, const std::string& input) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kSoftmax;
  l.inputs = {input};
  return add(std::move(l));
}

std::string GraphBuilder::concat(const std::string& name, const std::vector<std::string>& inputs) {
  LayerSpec l;
  l.name = name;
  l.kind = LayerKind::kConcat;
  l.inputs = inputs;
  return add(std::move(l));
}

void GraphBuilder::set_output(const std::string& key, const std::string& node) {
  shape_of(node);
  graph_.outputs[key] = node;
}

GraphSpec GraphBuilder::build() const {
  validate(graph_);
  return graph_;
}

}  // namespace incnet
