#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "pointint/grid.hpp"
#include "pointint/radial_potential.hpp"

namespace pointint {

using cplx = std::complex<double>;

enum class KernelTag { X, Xplus, Xminus, Bk, R, PWave, Free, Target, Projector, Custom };

/// Dense representation of a reduced (s-wave) integral operator on
/// L2((0, R_max), dr).
///
/// The basis is e_i = l_i / sqrt(w_i), with l_i the Lagrange polynomial of
/// node i inside its panel; it is orthonormal because the panel rule is
/// exact for l_i l_j. Away from the diagonal panels the Galerkin entries
/// reduce to the Nystrom form sqrt(w_i) K(r_i, r_j) sqrt(w_j); the diagonal
/// panel blocks are integrated exactly across the kink of the kernel at
/// r = r'.
struct KernelOp {
  Eigen::MatrixXcd matrix;
  KernelTag tag = KernelTag::Custom;
  cplx k = 0.0;

  Eigen::Index size() const noexcept { return matrix.rows(); }
};

/// Grid on supp V whose panel boundaries include every jump of V.
RadialGrid make_inner_grid(const RadialPotential& v, const GridOptions& opts = {});
/// `inner` extended to R_V + rmax_factor / decay with tail panels no wider
/// than 1 / max(decay, |k|).
RadialGrid make_outer_grid(const RadialGrid& inner, cplx k, const GridOptions& opts = {});

/// Reduced kernel evaluated at (r_<, r_>).
using ReducedKernel = std::function<cplx(double r_min, double r_max)>;

/// Reduced free Green kernel sin(k r_<) e^{i k r_>} / k, equal to r_< at k = 0.
cplx green_kernel(cplx k, double r_min, double r_max);
/// green_kernel(k) - r_< - i k r_< r_>: the reduced kernel of
/// -(ik / 4 pi) r(ik |x - y|), evaluated without cancellation.
cplx green_remainder(cplx k, double r_min, double r_max);
/// Reduced p-wave kernel of 1/p^2: r_<^2 / (3 r_>).
double pwave_kernel(double r_min, double r_max);
/// r(z) = (e^z - 1 - z) / z, by Taylor series for |z| < 1e-2.
cplx r_function(cplx z);

/// Galerkin matrix of `kernel` on the grid basis.
Eigen::MatrixXcd assemble_kernel(const RadialGrid& grid, const ReducedKernel& kernel);

/// Values of the selected part of V at the grid nodes.
Eigen::VectorXd potential_samples(const RadialPotential& v, const RadialGrid& grid, Part part);
/// J = sgn V at the grid nodes.
Eigen::VectorXd sign_samples(const RadialPotential& v, const RadialGrid& grid);

/// Throws PreconditionError unless the grid spans supp V and every jump of V
/// is a panel boundary.
void check_grid_covers(const RadialPotential& v, const RadialGrid& grid);

/// X = |V_part|^{1/2} (1/p^2) |V_part|^{1/2}; real symmetric PSD.
KernelOp build_X(const RadialPotential& v, const RadialGrid& grid, Part part = Part::full);
/// B_k = V^{1/2} (p^2 - k^2)^{-1} |V|^{1/2}; B_0 = J X.
KernelOp build_Bk(const RadialPotential& v, const RadialGrid& grid, cplx k);
/// R = B_k - B_0 - (ik / 4 pi) |V^{1/2}><|V|^{1/2}|.
KernelOp build_R(const RadialPotential& v, const RadialGrid& grid, cplx k);
/// p-wave analogue of X.
KernelOp build_X_pwave(const RadialPotential& v, const RadialGrid& grid);
/// (p^2 - k^2)^{-1} on the grid.
KernelOp free_resolvent(const RadialGrid& grid, cplx k);

/// Reduced |V^{1/2}>, |V|^{1/2}> and g_k as weighted nodal vectors.
struct ReducedVectors {
  Eigen::VectorXcd v_sgn;
  Eigen::VectorXcd v_abs;
  Eigen::VectorXcd gk;
};
ReducedVectors reduced_vectors(const RadialPotential& v, const RadialGrid& grid, cplx k);
/// Weighted nodal vector of the reduced g_k, e^{ikr} / sqrt(4 pi).
Eigen::VectorXcd g_vector(const RadialGrid& grid, cplx k);

struct SpectralOptions {
  /// Relative eigenvalue separation below which the lowest eigenvalue counts
  /// as degenerate.
  double degeneracy_tol = 1e-8;
  /// Residual threshold for accepting the symmetric-route eigenvector.
  double residual_tol = 1e-8;
};

struct SpectralData {
  double e_ell = 0.0;
  double e_ell_minus = 0.0;
  /// Eigenvector of 1 + JX for e_ell, unit norm, largest component positive.
  Eigen::VectorXd phi;
  double gap = 0.0;
  double residual = 0.0;
  /// Eigenvalues of 1 + JX, ascending.
  std::vector<double> eigenvalues;
};

/// Lowest eigenpair of 1 + JX via the symmetric form 1 + X^{1/2} J X^{1/2}.
SpectralData lowest_eigenpairs(const RadialPotential& v, const RadialGrid& grid,
                               const SpectralOptions& opts = {});
/// Spectrum of 1 + B_{i kappa}, kappa >= 0; X_{i kappa} is then real PSD
/// and the symmetric route applies. No degeneracy check.
struct KappaSpectrum {
  double e = 0.0;
  Eigen::VectorXd phi;
  std::vector<double> eigenvalues;
};
KappaSpectrum spectrum_at(const RadialPotential& v, const RadialGrid& grid, double kappa);

/// P = |phi><J phi| / <J phi|phi>.
KernelOp projector_P(const SpectralData& spec, const RadialPotential& v, const RadialGrid& grid);

double op_norm(const Eigen::MatrixXcd& a);
double op_norm(const KernelOp& a);
double hs_norm(const Eigen::MatrixXcd& a);
double hs_norm(const KernelOp& a);

/// LU factorization of 1 + B, reusable across right-hand sides.
class OnePlusSolver {
 public:
  explicit OnePlusSolver(const Eigen::MatrixXcd& b);
  Eigen::VectorXcd solve(const Eigen::VectorXcd& rhs) const;
  Eigen::MatrixXcd solve(const Eigen::MatrixXcd& rhs) const;
  Eigen::MatrixXcd inverse() const;

 private:
  Eigen::MatrixXcd one_plus_;
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu_;
};

Eigen::VectorXcd solve_one_plus(const KernelOp& b, const Eigen::VectorXcd& rhs);

}  // namespace pointint
