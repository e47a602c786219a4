#include "pointint/tuner.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/tools/roots.hpp>
#include <fmt/format.h>

#include "pointint/errors.hpp"
#include "pointint/parallel.hpp"
#include "pointint/scattering.hpp"

namespace pointint {

namespace {

struct Bracket {
  double lo, hi, f_lo, f_hi;
};

bool opposite(double a, double b) { return (a < 0.0) != (b < 0.0); }

template <class F>
std::optional<Bracket> scan_first_change(F&& f, double from, double to, double step) {
  double x0 = from;
  double f0 = f(x0);
  if (f0 == 0.0) return Bracket{x0, x0, f0, f0};
  while (x0 < to) {
    const double x1 = std::min(to, x0 + step);
    const double f1 = f(x1);
    if (f1 == 0.0 || opposite(f0, f1)) return Bracket{x0, x1, f0, f1};
    x0 = x1;
    f0 = f1;
  }
  return std::nullopt;
}

// Grows [hint - d, hint + d] until it straddles a sign change.
template <class F>
std::optional<Bracket> expand_around(F&& f, double hint, double step, double limit) {
  double d = std::max(step, 1e-3 * hint);
  while (true) {
    const double lo = std::max(0.0, hint - d);
    const double hi = std::min(limit, hint + d);
    const double f_lo = f(lo);
    const double f_hi = f(hi);
    if (f_lo == 0.0 || f_hi == 0.0 || opposite(f_lo, f_hi)) return Bracket{lo, hi, f_lo, f_hi};
    if (lo == 0.0 && hi == limit) return std::nullopt;
    d *= 2.0;
  }
}

template <class F>
double refine(F&& f, const Bracket& b, double rel_tol) {
  if (b.f_lo == 0.0) return b.lo;
  if (b.f_hi == 0.0) return b.hi;
  boost::uintmax_t iters = 200;
  const double tight = std::min(rel_tol, 1e-12);
  auto tol = [tight](double x, double y) { return std::abs(y - x) <= tight * std::max(1e-300, std::abs(y)); };
  const auto r = boost::math::tools::toms748_solve(f, b.lo, b.hi, b.f_lo, b.f_hi, tol, iters);
  return 0.5 * (r.first + r.second);
}

double ode_objective(const PotentialFamily& family, double ell, double lambda, double a_star) {
  const auto v = family.with_lambda(lambda).instantiate(ell);
  const auto [u, du] = zero_energy_state(v);
  return (v.support_radius() - a_star) * du - u;
}

}  // namespace

void check_ells(const std::vector<double>& ells) {
  if (ells.empty()) throw PreconditionError("sweep.ells is empty");
  for (std::size_t i = 0; i < ells.size(); ++i) {
    if (!(ells[i] > 0.0)) throw PreconditionError(fmt::format("sweep.ells entry {} is not positive", ells[i]));
    if (i > 0 && !(ells[i] < ells[i - 1])) throw PreconditionError("sweep.ells must be strictly decreasing");
  }
}

double tuning_objective(const PotentialFamily& family, double ell, double lambda, const TuneTarget& target,
                        const GridOptions& grid) {
  if (target.kind == TuneTarget::Kind::a) return ode_objective(family, ell, lambda, target.value);
  const auto v = family.with_lambda(lambda).instantiate(ell);
  if (v.is_zero()) return 1.0 - target.value * ell;
  return spectrum_at(v, make_inner_grid(v, grid), 0.0).e - target.value * ell;
}

double tune_depth(const PotentialFamily& family, double ell, const TuneTarget& target, const TunerOptions& opts,
                  std::optional<double> hint) {
  if (!(ell > 0.0)) throw PreconditionError(fmt::format("ell must be positive, got {}", ell));
  family.validate();
  auto f = [&](double lambda) { return tuning_objective(family, ell, lambda, target, opts.grid); };
  const bool warm = opts.warm_start && hint && *hint > 0.0;

  std::optional<Bracket> bracket;
  if (target.kind == TuneTarget::Kind::a) {
    if (warm) {
      bracket = expand_around(f, *hint, opts.scan_step, opts.lambda_max);
      // a warm bracket is only accepted if no earlier root exists
      if (bracket && bracket->lo > 0.0) {
        auto earlier = scan_first_change(f, 0.0, bracket->lo, opts.scan_step);
        if (earlier) bracket = earlier;
      }
    }
    if (!bracket) bracket = scan_first_change(f, 0.0, opts.lambda_max, opts.scan_step);
  } else {
    // the lowest eigenvalue of 1 + JX decreases monotonically with lambda
    double lo = 0.0;
    double hi = warm ? *hint * 1.05 : 1.0;
    if (warm) {
      const double l = *hint * 0.95;
      if (f(l) >= 0.0) lo = l;
    }
    double f_lo = f(lo);
    double f_hi = f(hi);
    if (f_lo >= 0.0) {
      while (f_hi > 0.0 && hi < opts.lambda_max) {
        lo = hi;
        f_lo = f_hi;
        hi = std::min(opts.lambda_max, 2.0 * hi);
        f_hi = f(hi);
      }
      if (f_hi <= 0.0) bracket = Bracket{lo, hi, f_lo, f_hi};
    }
  }
  if (!bracket)
    throw UnreachableError(fmt::format("target unreachable: no sign change for lambda in [0, {}] at ell = {}",
                                       opts.lambda_max, ell));

  const double lambda = refine(f, *bracket, opts.rel_tol);
  double residual;
  if (target.kind == TuneTarget::Kind::a) {
    residual = std::abs(scattering_length_ode(family.with_lambda(lambda).instantiate(ell)).a - target.value);
  } else {
    residual = std::abs(f(lambda));
  }
  if (residual > opts.residual_tol)
    throw UnreachableError(fmt::format("tuning residual {:.3g} at lambda = {} exceeds {:.1g} (ell = {})", residual,
                                       lambda, opts.residual_tol, ell));
  return lambda;
}

double fix_a_induced_rate(const PotentialFamily& family, double ell, double a_star, const TunerOptions& opts) {
  const double lambda = tune_depth(family, ell, TuneTarget::fix_a(a_star), opts);
  const auto v = family.with_lambda(lambda).instantiate(ell);
  return lowest_eigenpairs(v, make_inner_grid(v, opts.grid)).e_ell / ell;
}

TunedSweep build_sweep(const PotentialFamily& family, const std::vector<double>& ells, const TuneTarget& target,
                       const TunerOptions& opts, int jobs) {
  check_ells(ells);
  family.validate();
  TunedSweep sweep;
  sweep.target = target;
  sweep.family = family;
  sweep.entries.resize(ells.size());

  auto tune_one = [&](std::size_t i, std::optional<double> hint) {
    try {
      return tune_depth(family, ells[i], target, opts, hint);
    } catch (const UnreachableError& e) {
      throw UnreachableError(fmt::format("ell = {}: {}", ells[i], e.what()));
    } catch (const PreconditionError& e) {
      throw PreconditionError(fmt::format("ell = {}: {}", ells[i], e.what()));
    }
  };

  if (opts.warm_start) {
    std::optional<double> hint;
    for (std::size_t i = 0; i < ells.size(); ++i) {
      sweep.entries[i].lambda_star = tune_one(i, hint);
      hint = sweep.entries[i].lambda_star;
    }
  } else {
    parallel_for(ells.size(), jobs, [&](std::size_t i) { sweep.entries[i].lambda_star = tune_one(i, std::nullopt); });
  }

  parallel_for(ells.size(), jobs, [&](std::size_t i) {
    auto& e = sweep.entries[i];
    e.ell = ells[i];
    e.potential = family.with_lambda(e.lambda_star).instantiate(e.ell);
    try {
      e.spectrum = lowest_eigenpairs(e.potential, make_inner_grid(e.potential, opts.grid));
      e.a = scattering_length_ode(e.potential).a;
    } catch (const DegeneracyError& err) {
      throw DegeneracyError(fmt::format("ell = {}: {}", e.ell, err.what()));
    } catch (const ResonanceError& err) {
      throw ResonanceError(fmt::format("ell = {}: {}", e.ell, err.what()));
    }
  });
  return sweep;
}

}  // namespace pointint
