# Copyright 2026 The incnet Authors. All Rights Reserved.
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
# ==============================================================================
"""GoogLeNet / Inception engine."""

from incnet._incnet import (
    Graph,
    IncnetError,
    conv2d,
    count,
    ensemble_cost,
    enumerate_crops,
    forward,
    googlenet,
    googlenet_mini,
    gradcheck,
    init_params,
    load_model,
    lr_at,
    mean_subtract,
    predict,
    resize,
    sample_train_patch,
    save_model,
    strip_aux,
    table1_shapes,
    topk_error,
)

__all__ = [
    "Graph",
    "IncnetError",
    "conv2d",
    "count",
    "ensemble_cost",
    "enumerate_crops",
    "forward",
    "googlenet",
    "googlenet_mini",
    "gradcheck",
    "init_params",
    "load_model",
    "lr_at",
    "mean_subtract",
    "predict",
    "resize",
    "sample_train_patch",
    "save_model",
    "strip_aux",
    "table1_shapes",
    "topk_error",
]
