#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pointint/errors.hpp"
#include "pointint/report.hpp"

using namespace pointint;

namespace {

std::vector<ConvergenceRecord> synthetic(int n) {
  std::vector<ConvergenceRecord> out;
  for (int j = 0; j < n; ++j) {
    ConvergenceRecord r;
    r.ell = 0.2 / std::pow(2.0, j);
    r.e_ell = -0.7 * r.ell;
    r.D_norm = 3.0 * std::sqrt(std::abs(r.e_ell)) * (1.0 + 0.01 * j);
    r.Q_norm = 0.5 * std::pow(std::abs(r.e_ell), 0.4);
    r.bound_E = -1.0 - r.ell;
    r.eigfn_dist = std::nan("");
    out.push_back(r);
  }
  return out;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("csv shape and header") {
  const auto csv = records_csv(synthetic(7));
  std::istringstream in(csv);
  std::string line;
  std::vector<std::string> lines;
  while (std::getline(in, line)) lines.push_back(line);
  REQUIRE(lines.size() == 8);
  CHECK(lines[0] ==
        "ell,e_ell,e_ell_minus,a_bs,D_norm,Q_norm,Q_solve_norm,inv_proj_norm,I_defect,II_norm,rank1_defect_a,"
        "rank1_defect_b,cor4_m1,cor4_m2,cor4_m3,cor4_m4,J_phi_phi,bound_E,eigfn_dist,hw_bound");
  CHECK(lines[1].rfind("0.20000000000000001,", 0) == 0);
}

TEST_CASE("reports round trip through files") {
  const auto recs = synthetic(7);
  const auto fits = fit_records(recs);
  CHECK(fits.fits.count("D_norm") == 1);
  CHECK(fits.skipped.count("eigfn_dist") == 1);
  const auto dir = std::filesystem::temp_directory_path() / "pointint_report_test";
  std::filesystem::create_directories(dir);
  const auto csv = (dir / "rows.csv").string();
  const auto json = (dir / "summary.json").string();
  emit_reports(recs, fits, csv, json);
  CHECK(slurp(csv) == records_csv(recs));
  const auto j = nlohmann::json::parse(slurp(json));
  for (const auto& [name, fit] : fits.fits) {
    CHECK(j["fits"][name]["exponent"].get<double>() == fit.exponent);
    CHECK(j["fits"][name]["intercept"].get<double>() == fit.intercept);
    CHECK(j["fits"][name]["r_squared"].get<double>() == fit.r_squared);
  }
  CHECK(j["fits"]["Q_norm"]["exponent"].get<double>() == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(j["final"]["eigfn_dist"].is_null());
  std::filesystem::remove_all(dir);
}

TEST_CASE("report errors") {
  CHECK_THROWS_AS(emit_reports({}, {}, "a.csv", "a.json"), PreconditionError);
  try {
    emit_reports(synthetic(4), {}, "/nonexistent/dir/rows.csv", "/tmp/x.json");
    FAIL("expected an error");
  } catch (const ConfigError& e) {
    CHECK(e.key() == "output.csv");
  }
}
