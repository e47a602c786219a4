#include "pointint/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "pointint/errors.hpp"
#include "pointint/operators.hpp"

namespace pointint {

namespace {

constexpr double kPi = std::numbers::pi;

}  // namespace

ScatteringResult scattering_length_bs(const RadialPotential& v, const RadialGrid& grid) {
  const auto b = build_Bk(v, grid, 0.0);
  const auto vec = reduced_vectors(v, grid, 0.0);
  Eigen::VectorXcd x;
  try {
    x = OnePlusSolver(b.matrix).solve(vec.v_sgn);
  } catch (const ResonanceError& e) {
    throw ResonanceError(fmt::format("resonant potential: a infinite ({})", e.what()));
  }
  const cplx a = vec.v_abs.cwiseProduct(x).sum() / (4.0 * kPi);
  ScatteringResult out;
  out.a = a.real();
  out.method = ScatteringMethod::bs;
  out.imag_residue = std::abs(a.imag());
  if (out.imag_residue > 1e-8 * std::abs(out.a))
    throw Error(fmt::format("scattering length has imaginary residue {:.3g}", out.imag_residue));
  return out;
}

ScatteringResult scattering_length_bs(const RadialPotential& v, const GridOptions& opts) {
  auto coarse = scattering_length_bs(v, make_inner_grid(v, opts));
  GridOptions fine_opts = opts;
  fine_opts.points_per_segment *= 2;
  const auto fine = scattering_length_bs(v, make_inner_grid(v, fine_opts));
  coarse.refinement_error = std::abs(coarse.a - fine.a);
  return coarse;
}

std::pair<double, double> zero_energy_state(const RadialPotential& v) {
  double u = 0.0;
  double du = 1.0;
  for (const auto& s : v.segments()) {
    const double h = s.r_hi - s.r_lo;
    if (s.value > 0.0) {
      const double q = std::sqrt(s.value);
      const double t = std::tanh(q * h);
      const double nu = u + du * t / q;
      du = u * q * t + du;
      u = nu;
    } else if (s.value < 0.0) {
      const double q = std::sqrt(-s.value);
      const double c = std::cos(q * h);
      const double sn = std::sin(q * h);
      const double nu = u * c + du * sn / q;
      du = -u * q * sn + du * c;
      u = nu;
    } else {
      u += du * h;
    }
    const double n = std::hypot(u, du);
    u /= n;
    du /= n;
  }
  return {u, du};
}

ScatteringResult scattering_length_ode(const RadialPotential& v) {
  const auto [u, du] = zero_energy_state(v);
  if (std::abs(du) < 1e-12)
    throw ResonanceError(fmt::format("u'(R_V) = {:.3g}: zero-energy resonance, a infinite", du));
  ScatteringResult out;
  out.a = v.support_radius() - u / du;
  out.method = ScatteringMethod::ode;
  return out;
}

std::optional<BoundState> bound_state_energy(const RadialPotential& v, const RadialGrid& inner,
                                             const GridOptions& opts) {
  if (!v.has_negative_part()) return std::nullopt;
  const auto zero = spectrum_at(v, inner, 0.0);
  const int count = static_cast<int>(std::count_if(zero.eigenvalues.begin(), zero.eigenvalues.end(),
                                                   [](double e) { return e < 0.0; }));
  if (count == 0) return std::nullopt;

  auto f = [&](double kappa) { return spectrum_at(v, inner, kappa).e; };
  double hi = std::sqrt(v.max_abs());
  double f_hi = f(hi);
  for (int i = 0; i < 8 && f_hi <= 0.0; ++i) {
    hi *= 2.0;
    f_hi = f(hi);
  }
  if (f_hi <= 0.0) throw Error("bound-state search found no upper bracket for kappa");

  // scan downwards on a log grid; the first negative value brackets the
  // largest root (the ground state)
  const double floor = 1e-8 * hi;
  constexpr int steps = 48;
  double lo = 0.0;
  double f_lo = zero.e;
  double prev = hi;
  double f_prev = f_hi;
  for (int s = 1; s <= steps; ++s) {
    const double kappa = hi * std::pow(floor / hi, static_cast<double>(s) / steps);
    const double fk = f(kappa);
    if (fk <= 0.0) {
      lo = kappa;
      f_lo = fk;
      break;
    }
    prev = kappa;
    f_prev = fk;
  }

  double kappa = lo;
  if (f_lo != 0.0) {
    boost::uintmax_t iters = 100;
    const auto tol = [](double a, double b) { return std::abs(b - a) <= 1e-13 * std::max(1.0, std::abs(b)); };
    const auto root = boost::math::tools::toms748_solve(f, lo, prev, f_lo, f_prev, tol, iters);
    kappa = 0.5 * (root.first + root.second);
  }

  BoundState out;
  out.kappa = kappa;
  out.energy = -kappa * kappa;
  out.count = count;
  if (!(kappa > 0.0)) throw Error("bound state at threshold: kappa = 0");

  const auto spec = spectrum_at(v, inner, kappa);
  const cplx k{0.0, kappa};
  out.grid = make_outer_grid(inner, k, opts);
  const auto g = assemble_kernel(out.grid, [k](double a, double b) { return green_kernel(k, a, b); });
  const auto n_in = static_cast<Eigen::Index>(inner.size());
  const Eigen::VectorXd s = potential_samples(v, inner, Part::full).cwiseSqrt();
  out.psi = g.real().leftCols(n_in) * s.cwiseProduct(spec.phi);
  out.psi.normalize();
  const Eigen::Map<const Eigen::VectorXd> sw(out.grid.sqrt_weights().data(),
                                             static_cast<Eigen::Index>(out.grid.size()));
  if (sw.dot(out.psi) < 0.0) out.psi = -out.psi;
  return out;
}

}  // namespace pointint
