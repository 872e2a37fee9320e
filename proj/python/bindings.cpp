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


// Python bindings for the main operations.

#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>

#include "incnet/accounting.hpp"
#include "incnet/augment.hpp"
#include "incnet/crops.hpp"
#include "incnet/eval.hpp"
#include "incnet/googlenet.hpp"
#include "incnet/gradcheck.hpp"
#include "incnet/model_io.hpp"
#include "incnet/ops.hpp"
#include "incnet/optim.hpp"

namespace py = pybind11;

namespace incnet {
namespace {

using FloatArray = py::array_t<float, py::array::c_style | py::array::forcecast>;
using DoubleArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

TensorF to_tensor(const FloatArray& a) {
  if (a.ndim() != 4) throw Error("expected a 4-d (N, C, H, W) array, got " + std::to_string(a.ndim()) + " dims");
  const Shape s{a.shape(0), a.shape(1), a.shape(2), a.shape(3)};
  validate_shape(s);
  return TensorF(s, std::vector<float>(a.data(), a.data() + a.size()));
}

FloatArray from_tensor(const TensorF& t) {
  const Shape& s = t.shape();
  FloatArray a({s.n, s.c, s.h, s.w});
  std::memcpy(a.mutable_data(), t.data().data(), t.data().size() * sizeof(float));
  return a;
}

Image to_image(const FloatArray& a) {
  if (a.ndim() != 3 || a.shape(2) != 3) throw Error("expected an (H, W, 3) array");
  return Image(a.shape(0), a.shape(1), std::vector<float>(a.data(), a.data() + a.size()));
}

FloatArray from_image(const Image& img) {
  FloatArray a({img.height(), img.width(), Image::kChannels});
  std::memcpy(a.mutable_data(), img.data().data(), img.data().size() * sizeof(float));
  return a;
}

ParamStore<float> to_params(const std::map<std::string, FloatArray>& in) {
  ParamStore<float> out;
  for (const auto& [name, a] : in) out.emplace(name, to_tensor(a));
  return out;
}

std::map<std::string, FloatArray> from_params(const ParamStore<float>& in) {
  std::map<std::string, FloatArray> out;
  for (const auto& [name, t] : in) out.emplace(name, from_tensor(t));
  return out;
}

CropMode crop_mode(const std::string& s) {
  const auto m = parse_crop_mode(s);
  if (!m) throw Error("crop mode must be one of c1, c10, c144 (got '" + s + "')");
  return *m;
}

py::tuple shape_tuple(const Shape& s) { return py::make_tuple(s.n, s.c, s.h, s.w); }

py::dict row_dict(const CostRow& r) {
  py::dict d;
  d["name"] = r.name;
  d["head"] = to_string(r.head);
  d["params"] = r.params_with_bias;
  d["params_weights_only"] = r.params_weights_only;
  d["mult_adds"] = r.mult_adds;
  d["table1_params"] = r.table1_params;
  d["table1_ops"] = r.table1_ops;
  d["rel_diff_params"] = r.rel_diff_params;
  d["rel_diff_ops"] = r.rel_diff_ops;
  const auto cls = r.classification();
  d["classification"] = cls ? py::object(py::str(to_string(*cls))) : py::object(py::none());
  return d;
}

py::dict totals_dict(const CostTotals& t) {
  py::dict d;
  d["params"] = t.params_with_bias;
  d["params_weights_only"] = t.params_weights_only;
  d["mult_adds"] = t.mult_adds;
  return d;
}

}  // namespace
}  // namespace incnet

PYBIND11_MODULE(_incnet, m) {
  using namespace incnet;
  m.doc() = "GoogLeNet / Inception engine";

  py::register_exception<Error>(m, "IncnetError", PyExc_ValueError);

  py::class_<GraphSpec>(m, "Graph")
      .def_readonly("family", &GraphSpec::family)
      .def_readonly("outputs", &GraphSpec::outputs)
      .def_property_readonly("has_aux", &GraphSpec::has_aux)
      .def_property_readonly("depth", [](const GraphSpec& g) { return parameterized_depth(g); })
      .def_property_readonly("layer_names",
                             [](const GraphSpec& g) {
                               std::vector<std::string> names;
                               for (const LayerSpec& l : g.nodes) names.push_back(l.name);
                               return names;
                             })
      .def("__len__", [](const GraphSpec& g) { return g.nodes.size(); })
      .def("__eq__", [](const GraphSpec& a, const GraphSpec& b) { return a == b; })
      .def("to_text", &graph_to_text)
      .def_static("from_text", &parse_graph_text, py::arg("text"))
      .def(
          "shapes",
          [](const GraphSpec& g, std::int64_t batch) {
            const auto shapes = infer_shapes(g, batch);
            py::dict out;
            for (std::size_t i = 0; i < g.nodes.size(); ++i) out[py::str(g.nodes[i].name)] = shape_tuple(shapes[i]);
            return out;
          },
          py::arg("batch") = 1, "Output shape (N, C, H, W) of every node.");

  m.def("googlenet", &build_googlenet, py::arg("with_aux") = false);
  m.def("googlenet_mini", &build_googlenet_mini, py::arg("divisor"), py::arg("classes") = 1000,
        py::arg("with_aux") = false);
  m.def("strip_aux", &strip_aux, py::arg("graph"));

  m.def(
      "count",
      [](const GraphSpec& g, bool compare) {
        CostReport r = count_ops(g);
        if (compare) r = diff_against_table1(std::move(r));
        py::list rows;
        for (const CostRow& row : r.rows) rows.append(row_dict(row));
        py::dict out;
        out["rows"] = rows;
        out["totals"] = totals_dict(r.totals());
        out["inference"] = totals_dict(r.inference_totals());
        const BudgetVerdicts b = budget_check(r);
        if (b.applicable) {
          py::dict budget;
          budget["inference_params"] = b.inference_params;
          budget["inference_mult_adds"] = b.inference_mult_adds;
          budget["alexnet_ratio"] = b.alexnet_ratio;
          budget["mult_adds_ok"] = b.mult_adds_ok;
          budget["params_ok"] = b.params_ok;
          budget["ratio_ok"] = b.ratio_ok;
          out["budget"] = budget;
        }
        return out;
      },
      py::arg("graph"), py::arg("compare_table1") = false,
      "Per-row parameter and multiply-add counts.");

  m.def("table1_shapes", []() {
    py::list out;
    for (const ShapeCheck& c : check_table1_shapes(build_googlenet(false))) {
      py::dict d;
      d["row"] = c.row;
      d["expected"] = py::make_tuple(c.expected[0], c.expected[1], c.expected[2]);
      d["actual"] = py::make_tuple(c.actual.h, c.actual.w, c.actual.c);
      d["ok"] = c.ok;
      out.append(d);
    }
    return out;
  });

  m.def(
      "conv2d",
      [](const FloatArray& x, const FloatArray& w, const FloatArray& b, int stride, int pad) {
        return from_tensor(conv2d(to_tensor(x), ConvParams<float>{to_tensor(w), to_tensor(b), stride, pad}));
      },
      py::arg("x"), py::arg("weights"), py::arg("bias"), py::arg("stride") = 1, py::arg("pad") = 0);

  m.def(
      "init_params",
      [](const GraphSpec& g, std::uint64_t seed) { return from_params(init_params<float>(g, seed)); },
      py::arg("graph"), py::arg("seed") = 0);

  m.def(
      "forward",
      [](const GraphSpec& g, const std::map<std::string, FloatArray>& params, const FloatArray& x,
         bool train, std::uint64_t seed) {
        Rng rng(seed);
        std::map<std::string, FloatArray> out;
        for (const auto& [key, t] :
             forward(g, to_params(params), to_tensor(x), train ? Mode::kTrain : Mode::kInfer, rng)) {
          out.emplace(key, from_tensor(t));
        }
        return out;
      },
      py::arg("graph"), py::arg("params"), py::arg("x"), py::arg("train") = false, py::arg("seed") = 0,
      "Softmax outputs by head name; infer mode returns only 'main'.");

  m.def(
      "gradcheck",
      [](int points, double eps, std::uint64_t seed) {
        py::list out;
        for (const GradCheckSummary& s : run_grad_check_suite(standard_grad_check_cases(), points, eps, seed)) {
          py::dict d;
          d["name"] = s.name;
          d["points"] = s.points;
          d["max_rel_error"] = s.result.max_rel_error;
          d["checked"] = s.result.checked;
          d["excluded"] = s.result.excluded;
          out.append(d);
        }
        return out;
      },
      py::arg("points") = 10, py::arg("eps") = 1e-4, py::arg("seed") = 0);

  m.def("lr_at", &lr_at, py::arg("epoch"), py::arg("base_lr"));

  m.def(
      "resize",
      [](const FloatArray& img, std::int64_t h, std::int64_t w, const std::string& method) {
        const auto mth = parse_interpolation(method);
        if (!mth) throw Error("unknown interpolation '" + method + "'");
        return from_image(resize(to_image(img), h, w, *mth));
      },
      py::arg("image"), py::arg("height"), py::arg("width"), py::arg("method") = "bilinear");

  m.def(
      "enumerate_crops",
      [](const FloatArray& img, const std::string& mode) {
        py::list out;
        for (const Crop& c : enumerate_crops(to_image(img), crop_mode(mode))) {
          out.append(py::make_tuple(crop_file_name(c.spec), from_image(c.image)));
        }
        return out;
      },
      py::arg("image"), py::arg("mode") = "c144",
      "(file name, 224x224x3 crop) pairs in enumeration order.");

  m.def(
      "sample_train_patch",
      [](const FloatArray& img, std::uint64_t seed) {
        Rng rng(seed);
        PatchSample p;
        Image out = sample_train_patch(to_image(img), rng, &p);
        py::dict d;
        d["y"] = p.y;
        d["x"] = p.x;
        d["h"] = p.h;
        d["w"] = p.w;
        d["method"] = to_string(p.method);
        d["fallback"] = p.fallback;
        return py::make_tuple(from_image(out), d);
      },
      py::arg("image"), py::arg("seed"));

  m.def(
      "mean_subtract",
      [](const FloatArray& img, const std::array<double, 3>& mean) {
        return from_tensor(mean_subtract(to_image(img), mean));
      },
      py::arg("image"), py::arg("mean"));

  m.def(
      "predict",
      [](const std::vector<std::pair<GraphSpec, std::map<std::string, FloatArray>>>& models,
         const std::vector<FloatArray>& inputs, const std::string& pooling) {
        const auto p = parse_pooling(pooling);
        if (!p) throw Error("pooling must be 'mean' or 'maxcrop'");
        std::vector<EnsembleMember> members;
        for (const auto& [g, params] : models) members.push_back({g, to_params(params)});
        std::vector<TensorF> xs;
        for (const auto& x : inputs) xs.push_back(to_tensor(x));
        const auto out = predict_inputs(members, xs, *p);
        return DoubleArray(static_cast<py::ssize_t>(out.size()), out.data());
      },
      py::arg("models"), py::arg("inputs"), py::arg("pooling") = "mean",
      "Pooled class distribution of (graph, params) models over (1, 3, H, W) inputs.");

  m.def(
      "topk_error",
      [](const DoubleArray& preds, const std::vector<int>& labels, std::int64_t k) {
        if (preds.ndim() != 2) throw Error("predictions must be a 2-d array");
        std::vector<std::vector<double>> rows;
        for (py::ssize_t i = 0; i < preds.shape(0); ++i) {
          rows.emplace_back(preds.data(i, 0), preds.data(i, 0) + preds.shape(1));
        }
        return topk_error(rows, labels, k);
      },
      py::arg("predictions"), py::arg("labels"), py::arg("k"));

  m.def(
      "ensemble_cost",
      [](std::int64_t models, const std::string& mode) { return ensemble_cost(models, crop_mode(mode)); },
      py::arg("models"), py::arg("mode"));

  m.def(
      "save_model",
      [](const std::string& path, const GraphSpec& g, const std::map<std::string, FloatArray>& params) {
        save_model(path, g, to_params(params));
      },
      py::arg("path"), py::arg("graph"), py::arg("params"));
  m.def(
      "load_model",
      [](const std::string& path) {
        Model model = load_model(path);
        return py::make_tuple(model.graph, from_params(model.params));
      },
      py::arg("path"));
}
