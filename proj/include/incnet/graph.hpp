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

// Declarative network description.
//
// A GraphSpec is a list of LayerSpecs in topological order: every input of a
// node names an earlier node. Node 0 is always the input placeholder. Each
// node carries the label of the table row it belongs to (`row`), so that
// multi-node blocks such as an Inception module can be costed as one unit,
// and the head it belongs to (main trunk or one of the auxiliary classifiers).

#ifndef INCNET_GRAPH_HPP_
#define INCNET_GRAPH_HPP_

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "incnet/tensor.hpp"

namespace incnet {

enum class LayerKind { kInput, kConv, kMaxPool, kAvgPool, kRelu, kDropout, kLinear, kSoftmax, kConcat };

enum class Head { kMain, kAux1, kAux2 };

const char* to_string(LayerKind k);
const char* to_string(Head h);
std::optional<LayerKind> parse_layer_kind(const std::string& s);
std::optional<Head> parse_head(const std::string& s);

struct LayerSpec {
  std::string name;
  LayerKind kind = LayerKind::kInput;
  std::vector<std::string> inputs;

  // conv, pools
  int kernel = 0;
  int stride = 0;
  int pad = 0;
  // pools
  bool ceil_mode = false;
  // conv (filters), linear (output features)
  std::int64_t out_channels = 0;
  // dropout
  double rate = 0.0;
  // input placeholder (channels live in out_channels)
  std::int64_t height = 0;
  std::int64_t width = 0;

  std::string row;
  Head head = Head::kMain;

  bool has_params() const { return kind == LayerKind::kConv || kind == LayerKind::kLinear; }
  friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

struct GraphSpec {
  // Free-form tag identifying how the graph was built ("googlenet",
  // "googlenet-mini", "inception", ...).
  std::string family = "custom";
  std::vector<LayerSpec> nodes;
  // "main", "aux1", "aux2" -> node name.
  std::map<std::string, std::string> outputs;

  const LayerSpec& input() const { return nodes.front(); }
  std::optional<std::size_t> index_of(const std::string& name) const;
  const LayerSpec& at(const std::string& name) const;
  bool has_aux() const { return outputs.count("aux1") || outputs.count("aux2"); }

  friend bool operator==(const GraphSpec&, const GraphSpec&) = default;
};

// Shape of a single node's output given its input shapes.
Shape infer_node_shape(const LayerSpec& layer, const std::vector<Shape>& inputs);

// Structural checks: unique names, topological inputs, geometry fields
// present exactly where the kind needs them, a main output. Also runs shape
// inference. Throws Error / LayerError.
void validate(const GraphSpec& g);

// Output shape of every node for the given batch size.
std::vector<Shape> infer_shapes(const GraphSpec& g, std::int64_t batch = 1);

// Longest chain of parameterised (conv / linear) layers from the input to
// the main output.
int parameterized_depth(const GraphSpec& g);

// Text form: one line per layer, round-trippable through parse_graph_text.
std::string graph_to_text(const GraphSpec& g);
GraphSpec parse_graph_text(const std::string& text);

// Incremental builder that tracks output shapes as nodes are added, so that
// builders can check preconditions on intermediate extents.
class GraphBuilder {
 public:
  GraphBuilder(std::string family, std::int64_t channels, std::int64_t height, std::int64_t width);

  // Row label and head attached to subsequently added nodes.
  void set_row(std::string row) { row_ = std::move(row); }
  void set_head(Head head) { head_ = head; }

  std::string input_name() const { return graph_.nodes.front().name; }
  const Shape& shape_of(const std::string& name) const;

  std::string conv(const std::string& name, const std::string& input, std::int64_t filters,
                   int kernel, int stride, int pad);
  // conv followed by relu; returns the relu node.
  std::string conv_relu(const std::string& name, const std::string& input, std::int64_t filters,
                        int kernel, int stride, int pad);
  std::string max_pool(const std::string& name, const std::string& input, int kernel, int stride,
                       int pad, bool ceil_mode);
  std::string avg_pool(const std::string& name, const std::string& input, int kernel, int stride);
  std::string relu(const std::string& name, const std::string& input);
  std::string dropout(const std::string& name, const std::string& input, double rate);
  std::string linear(const std::string& name, const std::string& input, std::int64_t outputs);
  std::string softmax(const std::string& name, const std::string& input);
  std::string concat(const std::string& name, const std::vector<std::string>& inputs);

  void set_output(const std::string& key, const std::string& node);
  GraphSpec build() const;

 private:
  std::string add(LayerSpec layer);

  GraphSpec graph_;
  std::map<std::string, Shape> shapes_;
  std::string row_;
  Head head_ = Head::kMain;
};

}  // namespace incnet

#endif  // INCNET_GRAPH_HPP_
