#pragma once

#include <string>
#include <vector>

#include "pointint/operators.hpp"
#include "pointint/radial_potential.hpp"
#include "pointint/tuner.hpp"

namespace pointint {

struct AssumptionOptions {
  double exponent_tol = 0.2;
  /// A sequence counts as bounded when max/min stays within this factor.
  double bounded_ratio = 3.0;
  double gap_floor = 0.5;
};

struct AssumptionItem {
  std::string id;
  std::string description;
  double measured = 0.0;
  double target = 0.0;
  bool passed = false;
  std::string note;
};

struct AssumptionRow {
  double ell = 0.0;
  double e_ell = 0.0;
  double e_ell_minus = 0.0;
  double ratio = 0.0;
  double gap = 0.0;
  double l1 = 0.0;
  double l1_minus = 0.0;
  double x2 = 0.0;
  double x2_minus = 0.0;
  double a = 0.0;
};

struct AssumptionReport {
  std::vector<AssumptionRow> rows;
  std::vector<AssumptionItem> items;
  bool passed() const;
};

/// Audits (A1)-(A5) along a sweep of potentials with their spectra.
/// Needs >= 4 strictly decreasing ells and e_ell != 0 everywhere.
AssumptionReport check_assumptions(const std::vector<RadialPotential>& potentials, const std::vector<double>& ells,
                                   const std::vector<SpectralData>& spectra, const AssumptionOptions& opts = {});
/// Fixed-depth family instantiated at each ell.
AssumptionReport check_assumptions(const PotentialFamily& family, const std::vector<double>& ells,
                                   const std::vector<SpectralData>& spectra, const AssumptionOptions& opts = {});
AssumptionReport check_assumptions(const TunedSweep& sweep, const AssumptionOptions& opts = {});

}  // namespace pointint
