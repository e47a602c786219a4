#pragma once

#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "pointint/limit_analysis.hpp"

namespace pointint {

/// Columns fitted against |e_ell| in the summary.
const std::vector<std::string>& fitted_fields();

struct FitSummary {
  std::map<std::string, RateFit> fits;
  /// Fields that could not be fitted, with the reason.
  std::map<std::string, std::string> skipped;
};

FitSummary fit_records(const std::vector<ConvergenceRecord>& records, double min_r_squared = 0.98);

/// Header plus one row per record, %.17g, columns of record_columns().
std::string records_csv(const std::vector<ConvergenceRecord>& records);
nlohmann::json summary_json(const std::vector<ConvergenceRecord>& records, const FitSummary& fits);

/// Writes the CSV and the JSON summary. Throws PreconditionError on empty
/// records and ConfigError naming output.csv / output.json when a path
/// cannot be written.
void emit_reports(const std::vector<ConvergenceRecord>& records, const FitSummary& fits, const std::string& csv_path,
                  const std::string& json_path);

}  // namespace pointint
