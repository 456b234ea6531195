//
// metamol - molecular meta-language toolkit
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "metamol/eval/metrics.h"

namespace metamol::eval {

struct GenerationRecord {
  std::string raw;
  bool valid = false;
  // Parser error category when invalid.
  std::string error;
  std::string canonical;
  // First occurrence of its canonical key.
  bool unique = false;
  std::optional<bool> lipinski;
  // Registry order; empty when invalid.
  std::vector<double> properties;
};

struct GenerationReport {
  std::size_t n_total = 0;
  std::size_t n_valid = 0;
  std::size_t n_unique = 0;
  // Present only when the Lipinski constraint set was requested.
  std::optional<std::size_t> n_success;
  std::vector<GenerationRecord> records;

  double valid_ratio() const;
  double unique_ratio() const;
};

struct ConditionReport {
  std::string property;
  // Valid outputs only.
  std::vector<double> conditions;
  std::vector<double> achieved;
  std::optional<LineFit> fit;
  std::optional<double> pearson;
  double pct_difference = 0;
};

/// Parses every output; dedupes valid ones by canonical key; counts
/// Lipinski successes over unique valid molecules when asked.
GenerationReport eval_generation(const std::vector<std::string> &outputs, bool lipinski = false);

/// Pairs conditions[i] with the achieved `property` of output i, skipping
/// invalid outputs. Throws MetricError on a size mismatch or unknown name.
ConditionReport condition_report(const GenerationReport &report, const std::string &property,
                                 const std::vector<double> &conditions);

std::string report_json(const GenerationReport &report,
                        const std::optional<ConditionReport> &condition = std::nullopt);
// Columns condition,achieved.
void write_plot_csv(std::ostream &out, const ConditionReport &c);

}  // namespace metamol::eval
