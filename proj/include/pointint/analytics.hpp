#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "pointint/grid.hpp"
#include "pointint/radial_potential.hpp"

namespace pointint {

struct ClosedFormCheck {
  std::string name;
  std::complex<double> analytic_value;
  std::complex<double> numeric_value;
  double abs_error = 0.0;
};

/// F_k(y) = (2 pi / Im k) e^{-Im k y} sin(Re k y) / (Re k y).
double f_k_closed(double y, std::complex<double> k);
/// F_k(y) = int e^{ik|x|} e^{-i conj(k) |x - y|} / (|x| |x - y|) d^3x by
/// radial quadrature after the angular integral is done in closed form.
std::complex<double> f_k_numeric(double y, std::complex<double> k);
ClosedFormCheck check_f_k(double y, std::complex<double> k);

struct BoundCheck {
  double value = 0.0;
  double bound = 0.0;
  bool holds = true;
};

/// || g_k - g_k(. - y) ||^2 = 2 (F_k(0) - F_k(y)) / (4 pi)^2 against
/// (1 + |Re k| / (2 Im k)) |y| / (4 pi).
BoundCheck g_difference_l2(double y, std::complex<double> k);

using Vec3 = std::array<double, 3>;
/// Omega_k = F_k(|w - z|) + F_k(0) - F_k(|w|) - F_k(|z|) against
/// 2 pi (1 + |Re k| / (2 Im k)) (|z| + |w|), the bound that Cauchy-Schwarz and
/// g_difference_l2 give for (4 pi)^2 <g(. - z) - g, g(. - w) - g>.
BoundCheck omega_k(const Vec3& z, const Vec3& w, std::complex<double> k);
/// The same comparison with the prefactor 1 / (2 pi) in place of 2 pi.
/// This constant is too small: Omega_k(z, z) ~ 4 pi |z| for small |z|.
BoundCheck omega_k_small_constant(const Vec3& z, const Vec3& w, std::complex<double> k);

struct Lemma1Result {
  double lhs = 0.0;
  double rhs = 0.0;
};

/// lhs = sqrt(2) ||phi|| ||(J + X) phi||, rhs = <phi, (X+ + 1 - X-) phi>.
Lemma1Result lemma1_check(const RadialPotential& v, const RadialGrid& grid, const Eigen::VectorXcd& phi);

struct VerifyLine {
  std::string name;
  int samples = 0;
  int violations = 0;
  double worst = 0.0;
  double tolerance = 0.0;
  bool passed = true;
};

struct VerifyReport {
  std::uint64_t seed = 0;
  std::vector<VerifyLine> lines;
  bool passed() const;
};

constexpr std::uint64_t kDefaultSeed = 20240517;

/// Analytic self-test battery; randomized batches draw from `seed`.
VerifyReport run_verify(std::uint64_t seed = kDefaultSeed);

}  // namespace pointint
