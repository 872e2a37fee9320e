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

// Static parameter and multiply-add accounting.
//
// Counts are grouped by table row (LayerSpec::row): every node of an
// Inception module contributes to one row. One multiply-add is one op; bias
// additions and pooling comparisons are not counted.

#ifndef INCNET_ACCOUNTING_HPP_
#define INCNET_ACCOUNTING_HPP_

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "incnet/graph.hpp"

namespace incnet {

enum class DiffClass { kMatch, kNear, kDiscrepant };

const char* to_string(DiffClass c);

// |rel| <= 5% match, <= 15% near, otherwise discrepant.
DiffClass classify(double rel_diff);

struct CostRow {
  std::string name;
  Head head = Head::kMain;
  std::int64_t params_with_bias = 0;
  std::int64_t params_weights_only = 0;
  std::int64_t mult_adds = 0;

  std::optional<std::int64_t> table1_params;
  std::optional<std::int64_t> table1_ops;
  std::optional<double> rel_diff_params;
  std::optional<double> rel_diff_ops;

  // Worst of the params / ops classifications; empty without a reference.
  std::optional<DiffClass> classification() const;
};

struct CostTotals {
  std::int64_t params_with_bias = 0;
  std::int64_t params_weights_only = 0;
  std::int64_t mult_adds = 0;
};

struct CostReport {
  std::string family;
  std::vector<CostRow> rows;

  // Column sums over all rows / over main-head rows only.
  CostTotals totals() const;
  CostTotals inference_totals() const;
  const CostRow& row(const std::string& name) const;
};

// Parameter columns only (mult_adds left at zero).
CostReport count_params(const GraphSpec& g);

// Parameter and multiply-add columns for one image of the graph's input
// shape.
CostReport count_ops(const GraphSpec& g);

// One printed row of the reference architecture table: values stored with
// their printed precision ("159K" -> 159000).
struct Table1Row {
  const char* row;
  const char* type;
  const char* patch;
  std::array<std::int64_t, 3> output;  // height, width, channels
  std::optional<std::int64_t> params;
  std::optional<std::int64_t> ops;
};

const std::vector<Table1Row>& table1();

// Output size of one table row (the main-head node that ends the row)
// against the printed "output size" cell.
struct ShapeCheck {
  std::string row;
  std::array<std::int64_t, 3> expected;  // height, width, channels
  Shape actual;
  bool ok = false;
};

// Shape trace of a graph on a single image against every table row. Throws
// Error if the graph has no node for a row.
std::vector<ShapeCheck> check_table1_shapes(const GraphSpec& g);

// Attaches reference values row by row and computes relative differences
// against params_with_bias and mult_adds. Throws Error if the report's rows
// and the table's parameterised rows disagree (topology drift).
CostReport diff_against_table1(CostReport report);

// Rows whose discrepancy with the printed table is documented rather than
// reconciled: the stem convolution's 2.7K / 34M cells are not reproduced by
// any counting convention.
bool is_expected_discrepancy(const std::string& row);

struct BudgetVerdicts {
  bool applicable = false;
  std::int64_t inference_mult_adds = 0;
  std::int64_t inference_params = 0;
  std::int64_t aux_params = 0;
  double alexnet_ratio = 0.0;  // 60e6 / inference_params
  bool mult_adds_ok = false;   // in [1.4e9, 1.7e9]
  bool params_ok = false;      // in [6.0e6, 7.5e6]
  bool ratio_ok = false;       // >= 8
};

// Budget claims apply only to the full-width GoogLeNet.
BudgetVerdicts budget_check(const CostReport& report);

std::string format_report_table(const CostReport& report);
std::string format_report_csv(const CostReport& report);

}  // namespace incnet

#endif  // INCNET_ACCOUNTING_HPP_
