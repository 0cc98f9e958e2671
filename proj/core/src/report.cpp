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

#include "bloomnet/report.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace bloomnet {

namespace {

std::string percent(double fraction) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.2f", fraction * 100.0);
  return buf;
}

std::string mean_std_cell(const std::map<std::string, MeanStd>& aggregates,
                          const std::string& key) {
  auto it = aggregates.find(key);
  if (it == aggregates.end()) return "-";
  return percent(it->second.mean) + " \xc2\xb1 " + percent(it->second.std);
}

std::string p_cell(const std::optional<SignificanceResult>& sig) {
  if (!sig) return "-";
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.4g / %.4g", sig->t_p, sig->permutation_p);
  return buf;
}

nlohmann::ordered_json result_json(const RunResult& r) {
  return nlohmann::ordered_json::parse(r.to_json());
}

}  // namespace

ReportFormat parse_report_format(const std::string& name) {
  std::string n = to_lower(trim(name));
  if (n == "json") return ReportFormat::kJson;
  if (n == "markdown" || n == "markdown-table" || n == "md") return ReportFormat::kMarkdownTable;
  throw ConfigError("unknown report format '" + name + "' (expected json or markdown-table)");
}

std::string render_report(const std::vector<RunResult>& results, ReportFormat format) {
  if (results.empty()) throw DataError("render_report: no results");
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json j = nlohmann::ordered_json::array();
    for (const RunResult& r : results) j.push_back(result_json(r));
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "| Model | Dataset1 (IID) Accuracy | Dataset1 (IID) Macro-F1 | "
         "Dataset2 (OOD) Accuracy | Dataset2 (OOD) Macro-F1 |\n";
  out << "|---|---|---|---|---|\n";
  for (const RunResult& r : results) {
    out << "| " << r.model_name << " | " << mean_std_cell(r.aggregates, "iid_accuracy") << " | "
        << mean_std_cell(r.aggregates, "iid_macro_f1") << " | "
        << mean_std_cell(r.aggregates, "ood_accuracy") << " | "
        << mean_std_cell(r.aggregates, "ood_macro_f1") << " |\n";
  }
  return out.str();
}

void emit_report(const std::vector<RunResult>& results, ReportFormat format,
                 const std::string& path) {
  std::string body = render_report(results, format);
  std::ofstream out(path);
  if (!out) throw DataError("emit_report: cannot write " + path);
  out << body;
}

ComparisonReport build_comparison(const std::vector<RunResult>& results,
                                  const std::string& reference) {
  if (results.empty()) throw DataError("build_comparison: no results");
  const RunResult* ref = nullptr;
  for (const RunResult& r : results) {
    if (r.model_name == reference) ref = &r;
  }
  if (ref == nullptr) {
    throw ConfigError("build_comparison: reference model '" + reference +
                      "' not among the results");
  }
  auto fold_values = [](const RunResult& r, bool f1) {
    std::vector<double> out;
    for (const FoldMetrics& m : r.per_fold) out.push_back(f1 ? m.iid_macro_f1 : m.iid_accuracy);
    return out;
  };

  ComparisonReport report;
  report.reference = reference;
  for (const RunResult& r : results) {
    ComparisonRow row;
    row.result = r;
    if (r.model_name != reference && r.per_fold.size() == ref->per_fold.size()) {
      row.accuracy_vs_reference =
          paired_significance(fold_values(*ref, false), fold_values(r, false));
      row.macro_f1_vs_reference =
          paired_significance(fold_values(*ref, true), fold_values(r, true));
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

std::string render_comparison(const ComparisonReport& report, ReportFormat format) {
  if (format == ReportFormat::kJson) {
    nlohmann::ordered_json j;
    j["reference"] = report.reference;
    j["rows"] = nlohmann::ordered_json::array();
    for (const ComparisonRow& row : report.rows) {
      nlohmann::ordered_json r;
      r["result"] = result_json(row.result);
      if (row.accuracy_vs_reference) {
        r["accuracy_vs_reference"] = {{"t_statistic", row.accuracy_vs_reference->t_statistic},
                                      {"t_p", row.accuracy_vs_reference->t_p},
                                      {"permutation_p", row.accuracy_vs_reference->permutation_p}};
      }
      if (row.macro_f1_vs_reference) {
        r["macro_f1_vs_reference"] = {{"t_statistic", row.macro_f1_vs_reference->t_statistic},
                                      {"t_p", row.macro_f1_vs_reference->t_p},
                                      {"permutation_p", row.macro_f1_vs_reference->permutation_p}};
      }
      j["rows"].push_back(std::move(r));
    }
    return j.dump(2) + "\n";
  }
  std::ostringstream out;
  out << "| Model | Dataset1 (IID) Accuracy | Dataset1 (IID) Macro-F1 | "
         "Dataset2 (OOD) Accuracy | Dataset2 (OOD) Macro-F1 | "
         "p vs "
      << report.reference << " (acc, t/perm) | p vs " << report.reference
      << " (F1, t/perm) |\n";
  out << "|---|---|---|---|---|---|---|\n";
  for (const ComparisonRow& row : report.rows) {
    const RunResult& r = row.result;
    out << "| " << r.model_name << " | " << mean_std_cell(r.aggregates, "iid_accuracy") << " | "
        << mean_std_cell(r.aggregates, "iid_macro_f1") << " | "
        << mean_std_cell(r.aggregates, "ood_accuracy") << " | "
        << mean_std_cell(r.aggregates, "ood_macro_f1") << " | "
        << p_cell(row.accuracy_vs_reference) << " | " << p_cell(row.macro_f1_vs_reference)
        << " |\n";
  }
  return out.str();
}

std::string render_ablation(const AblationTable& table, ReportFormat format) {
  if (table.rows.empty()) throw DataError("render_ablation: empty table");
  return render_report(table.rows, format);
}

}  // namespace bloomnet
