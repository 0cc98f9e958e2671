/*
 * Copyright 2026 The BloomNet Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef BLOOMNET_REPORT_H_
#define BLOOMNET_REPORT_H_

#include <optional>
#include <string>
#include <vector>

#include "bloomnet/harness.hpp"

namespace bloomnet {

enum class ReportFormat { kJson, kMarkdownTable };

ReportFormat parse_report_format(const std::string& name);

// Stable column order: model, IID accuracy, IID macro-F1, OOD accuracy,
// OOD macro-F1, each mean +/- std. JSON output is byte-stable for identical
// inputs.
std::string render_report(const std::vector<RunResult>& results, ReportFormat format);
void emit_report(const std::vector<RunResult>& results, ReportFormat format,
                 const std::string& path);

struct ComparisonRow {
  RunResult result;
  // Absent for the reference row itself.
  std::optional<SignificanceResult> accuracy_vs_reference;
  std::optional<SignificanceResult> macro_f1_vs_reference;
};

struct ComparisonReport {
  std::string reference;
  std::vector<ComparisonRow> rows;
};

// Paired per-fold significance of every model against the reference row.
ComparisonReport build_comparison(const std::vector<RunResult>& results,
                                  const std::string& reference);
std::string render_comparison(const ComparisonReport& report, ReportFormat format);

// Table-3-shaped ablation rendering (plus OOD columns when present).
std::string render_ablation(const AblationTable& table, ReportFormat format);

}  // namespace bloomnet

#endif  // BLOOMNET_REPORT_H_
