#pragma once

#include <complex>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

#include "pointint/grid.hpp"
#include "pointint/operators.hpp"
#include "pointint/radial_potential.hpp"
#include "pointint/tuner.hpp"

namespace pointint {

/// One row of the convergence table. Fields are NaN when undefined (no
/// bound state, for instance).
struct ConvergenceRecord {
  double ell = 0.0;
  double e_ell = 0.0;
  double e_ell_minus = 0.0;
  double a_bs = 0.0;
  double D_norm = 0.0;
  double Q_norm = 0.0;
  double Q_solve_norm = 0.0;
  double inv_proj_norm = 0.0;
  double I_defect = 0.0;
  double II_norm = 0.0;
  double rank1_defect_a = 0.0;
  double rank1_defect_b = 0.0;
  double cor4_m1 = 0.0;
  double cor4_m2 = 0.0;
  double cor4_m3 = 0.0;
  double cor4_m4 = 0.0;
  double J_phi_phi = 0.0;
  double bound_E = 0.0;
  double eigfn_dist = 0.0;
  double hw_bound = 0.0;

  // diagnostics outside the CSV column set
  double gap = 0.0;
  double tail_bound = 0.0;
  double decomposition_defect = 0.0;
  double hw_margin = 0.0;
};

/// CSV column names, in order.
const std::vector<std::string>& record_columns();
/// Value of a CSV column; throws PreconditionError for unknown names.
double record_field(const ConvergenceRecord& rec, std::string_view name);

struct RateFit {
  double exponent = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  int points = 0;
  std::vector<std::string> notes;
};

/// Point-interaction coefficient 4 pi / (a^{-1} + ik), with a = 0 giving 0
/// and a = +-inf giving 4 pi / (ik).
cplx point_coefficient(double a, cplx k);

/// Reduced kernel sin(k r<) e^{ik r>} / k - e^{ik(r + r')} / (a^{-1} + ik).
KernelOp target_resolvent(cplx k, double a, const RadialGrid& outer);

struct ResolventDifference {
  double D_norm = 0.0;
  /// Bound on the part of the norm lost beyond R_max.
  double tail_bound = 0.0;
  std::string truncation_note;
};

/// || (p^2 + V - k^2)^{-1} - target_resolvent(k, a) || on the outer grid.
ResolventDifference resolvent_difference_norm(const RadialPotential& v, const RadialGrid& inner,
                                              const RadialGrid& outer, cplx k, double a);

struct LemmaQuantities {
  double a_bs = 0.0;
  double Q_norm = 0.0;
  double Q_solve_norm = 0.0;
  double inv_proj_norm = 0.0;
  double I_defect = 0.0;
  double II_norm = 0.0;
  double rank1_defect_a = 0.0;
  double rank1_defect_b = 0.0;
  /// ||I + II + (1)(2)(3)|| / ||(1)(2)(3)||.
  double decomposition_defect = 0.0;
};

LemmaQuantities lemma_decomposition(const RadialPotential& v, const RadialGrid& inner, const RadialGrid& outer,
                                    cplx k, const SpectralData& spec);

struct CorollaryMetrics {
  double m1 = 0.0;
  double m2 = 0.0;
  double m3 = 0.0;
  double m4 = 0.0;
  double J_phi_phi = 0.0;
};

CorollaryMetrics corollary_metrics(const RadialPotential& v, const SpectralData& spec, const RadialGrid& grid);

/// Operator norm of the p-wave analogue of X.
double higher_wave_bound(const RadialPotential& v, const RadialGrid& inner);
/// 1 + lowest eigenvalue of J X^{(1)}.
double higher_wave_margin(const RadialPotential& v, const RadialGrid& inner);

/// ||psi - sqrt(2/a) e^{-r/a}|| in L2(dr) on psi's grid.
double eigenfunction_distance(const Eigen::VectorXd& psi, const RadialGrid& grid, double a);

struct SweepOptions {
  cplx k{0.0, 2.0};
  double a_star = 1.0;
  GridOptions grid;
  int jobs = 1;
};

ConvergenceRecord analyze_entry(const TunedEntry& entry, const SweepOptions& opts);
/// Records in sweep order, computed on up to opts.jobs threads.
std::vector<ConvergenceRecord> run_sweep(const TunedSweep& sweep, const SweepOptions& opts);

/// Least squares of log y against log x over the positive pairs.
RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
/// Fit of `field` against |e_ell|. Needs >= 4 records. Nonpositive values are
/// dropped with a note; if r^2 < min_r_squared the largest-ell point is
/// dropped once and the refit is kept.
RateFit fit_rate(const std::vector<ConvergenceRecord>& records, std::string_view field,
                 double min_r_squared = 0.98);

}  // namespace pointint
