#pragma once

#include <optional>
#include <vector>

#include "pointint/grid.hpp"
#include "pointint/operators.hpp"
#include "pointint/radial_potential.hpp"

namespace pointint {

/// fix_a: a(V_ell) = value. fix_e: e_ell = value * ell.
struct TuneTarget {
  enum class Kind { a, e };
  Kind kind = Kind::a;
  double value = 1.0;

  static TuneTarget fix_a(double a_star) { return {Kind::a, a_star}; }
  static TuneTarget fix_e(double c) { return {Kind::e, c}; }
};

struct TunerOptions {
  /// Upper end of the lambda scan.
  double lambda_max = 100.0;
  /// Step of the cold-start lambda scan for a-targets.
  double scan_step = 0.01;
  /// Relative tolerance on lambda.
  double rel_tol = 1e-10;
  /// Admissible objective residual at lambda*, in the target's units.
  double residual_tol = 1e-8;
  bool warm_start = true;
  GridOptions grid;
};

/// Well depth lambda* on the branch adjacent to the first resonance: the
/// smallest lambda >= 0 meeting the target. `hint` is a previous lambda*
/// used to seed the bracket.
double tune_depth(const PotentialFamily& family, double ell, const TuneTarget& target,
                  const TunerOptions& opts = {}, std::optional<double> hint = std::nullopt);

/// Objective whose zero is the target: (R_V - a*) u' - u on the normalized
/// zero-energy state for a-targets (continuous through resonances), and
/// e_ell - c ell for e-targets.
double tuning_objective(const PotentialFamily& family, double ell, double lambda, const TuneTarget& target,
                        const GridOptions& grid = {});

struct TunedEntry {
  double ell = 0.0;
  double lambda_star = 0.0;
  RadialPotential potential;
  SpectralData spectrum;
  /// Exact scattering length of the tuned potential.
  double a = 0.0;
};

struct TunedSweep {
  std::vector<TunedEntry> entries;
  TuneTarget target;
  PotentialFamily family;
};

/// Tunes every ell (warm-started in order unless disabled), then attaches
/// spectral data using up to `jobs` threads.
TunedSweep build_sweep(const PotentialFamily& family, const std::vector<double>& ells, const TuneTarget& target,
                       const TunerOptions& opts = {}, int jobs = 1);

/// e_ell / ell of the fix_a(a_star) tuned potential at `ell`: the default
/// rate c of e-targets.
double fix_a_induced_rate(const PotentialFamily& family, double ell, double a_star = 1.0,
                          const TunerOptions& opts = {});

void check_ells(const std::vector<double>& ells);

}  // namespace pointint
