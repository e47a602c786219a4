#pragma once

#include <optional>

#include <Eigen/Dense>

#include "pointint/grid.hpp"
#include "pointint/radial_potential.hpp"

namespace pointint {

enum class ScatteringMethod { bs, ode };

struct ScatteringResult {
  double a = 0.0;
  ScatteringMethod method = ScatteringMethod::ode;
  /// |a(grid n) - a(grid 2n)|; zero for the exact ODE method.
  double refinement_error = 0.0;
  /// Imaginary part left over by the complex solve (BS method only).
  double imag_residue = 0.0;
};

/// a = (1/4 pi) <|V|^{1/2}, (1 + B)^{-1} V^{1/2}> on the given grid.
ScatteringResult scattering_length_bs(const RadialPotential& v, const RadialGrid& grid);
/// As above on the default grid for `opts`, with the refinement error
/// against the grid with twice the points per segment.
ScatteringResult scattering_length_bs(const RadialPotential& v, const GridOptions& opts = {});

/// Zero-energy solution of -u'' + V u = 0, u(0) = 0, at r = R_V, returned
/// as the unit vector (u, u').
std::pair<double, double> zero_energy_state(const RadialPotential& v);
/// Exact scattering length from transfer matrices: a = R_V - u / u'.
ScatteringResult scattering_length_ode(const RadialPotential& v);

struct BoundState {
  double energy = 0.0;
  double kappa = 0.0;
  /// Ground state on `grid`, unit L2(dr) norm, positive integral.
  Eigen::VectorXd psi;
  RadialGrid grid;
  /// Number of bound states (negative eigenvalues of 1 + JX).
  int count = 0;
};

/// Ground state from the zero of the lowest eigenvalue of 1 + B_{i kappa};
/// empty when 1 + JX has no negative eigenvalue.
std::optional<BoundState> bound_state_energy(const RadialPotential& v, const RadialGrid& inner,
                                             const GridOptions& opts = {});

}  // namespace pointint
