#include "pointint/report.hpp"

#include <cmath>
#include <fstream>

#include <fmt/format.h>

#include "pointint/errors.hpp"

namespace pointint {

namespace {

void write_file(const std::string& path, const std::string& text, const char* key) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError(key, fmt::format("cannot write '{}'", path));
  out << text;
  out.close();
  if (!out) throw ConfigError(key, fmt::format("write to '{}' failed", path));
}

nlohmann::json number(double x) { return std::isfinite(x) ? nlohmann::json(x) : nlohmann::json(nullptr); }

}  // namespace

const std::vector<std::string>& fitted_fields() {
  static const std::vector<std::string> fields{
      "e_ell_minus", "D_norm",  "Q_norm",  "Q_solve_norm", "inv_proj_norm", "I_defect",   "II_norm",
      "rank1_defect_a", "rank1_defect_b", "cor4_m1", "cor4_m2", "cor4_m3", "cor4_m4", "eigfn_dist", "hw_bound",
  };
  return fields;
}

FitSummary fit_records(const std::vector<ConvergenceRecord>& records, double min_r_squared) {
  FitSummary out;
  for (const auto& field : fitted_fields()) {
    try {
      out.fits.emplace(field, fit_rate(records, field, min_r_squared));
    } catch (const PreconditionError& e) {
      out.skipped.emplace(field, e.what());
    }
  }
  return out;
}

std::string records_csv(const std::vector<ConvergenceRecord>& records) {
  const auto& cols = record_columns();
  std::string out;
  for (std::size_t j = 0; j < cols.size(); ++j) out += (j ? "," : "") + cols[j];
  out += '\n';
  for (const auto& r : records) {
    for (std::size_t j = 0; j < cols.size(); ++j) {
      if (j) out += ',';
      out += fmt::format("{:.17g}", record_field(r, cols[j]));
    }
    out += '\n';
  }
  return out;
}

nlohmann::json summary_json(const std::vector<ConvergenceRecord>& records, const FitSummary& fits) {
  nlohmann::json j;
  j["rows"] = records.size();
  j["abscissa"] = "|e_ell|";
  auto& f = j["fits"] = nlohmann::json::object();
  for (const auto& [name, fit] : fits.fits)
    f[name] = {{"exponent", number(fit.exponent)},
               {"intercept", number(fit.intercept)},
               {"r_squared", number(fit.r_squared)},
               {"points", fit.points},
               {"notes", fit.notes}};
  j["skipped"] = fits.skipped;
  if (!records.empty()) {
    const auto& first = records.front();
    const auto& last = records.back();
    j["D_norm_ratio"] = number(last.D_norm / first.D_norm);
    j["final"] = {{"ell", number(last.ell)},
                  {"e_ell", number(last.e_ell)},
                  {"D_norm", number(last.D_norm)},
                  {"bound_E", number(last.bound_E)},
                  {"eigfn_dist", number(last.eigfn_dist)}};
  }
  return j;
}

void emit_reports(const std::vector<ConvergenceRecord>& records, const FitSummary& fits, const std::string& csv_path,
                  const std::string& json_path) {
  if (records.empty()) throw PreconditionError("no records to report");
  write_file(csv_path, records_csv(records), "output.csv");
  write_file(json_path, summary_json(records, fits).dump(2) + "\n", "output.json");
}

}  // namespace pointint
