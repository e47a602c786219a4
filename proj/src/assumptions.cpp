#include "pointint/assumptions.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "pointint/errors.hpp"
#include "pointint/limit_analysis.hpp"
#include "pointint/scattering.hpp"

namespace pointint {

namespace {

double spread(const std::vector<double>& xs) {
  double lo = std::abs(xs.front()), hi = lo;
  for (double x : xs) {
    lo = std::min(lo, std::abs(x));
    hi = std::max(hi, std::abs(x));
  }
  return lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
}

AssumptionItem exponent_item(std::string id, std::string what, const std::vector<double>& e,
                             const std::vector<double>& y, double target, double tol) {
  AssumptionItem item{std::move(id), std::move(what), 0.0, target, false, {}};
  const auto fit = fit_loglog(e, y);
  item.measured = fit.exponent;
  item.passed = std::abs(fit.exponent - target) <= tol;
  item.note = fmt::format("r^2 = {:.4f}, tolerance {}", fit.r_squared, tol);
  return item;
}

}  // namespace

bool AssumptionReport::passed() const {
  return std::all_of(items.begin(), items.end(), [](const AssumptionItem& i) { return i.passed; });
}

AssumptionReport check_assumptions(const std::vector<RadialPotential>& potentials, const std::vector<double>& ells,
                                   const std::vector<SpectralData>& spectra, const AssumptionOptions& opts) {
  if (ells.size() < 4) throw PreconditionError(fmt::format("insufficient points: {} < 4 sweep entries", ells.size()));
  check_ells(ells);
  if (potentials.size() != ells.size() || spectra.size() != ells.size())
    throw PreconditionError("potentials, ells and spectra differ in length");

  AssumptionReport rep;
  bool finite = true;
  bool a_finite = true;
  for (std::size_t i = 0; i < ells.size(); ++i) {
    const auto& v = potentials[i];
    const auto& s = spectra[i];
    if (std::abs(s.e_ell) < 1e-12)
      throw ResonanceError(fmt::format("e_ell = 0 at ell = {}: 1 + B is not invertible", ells[i]));
    AssumptionRow row;
    row.ell = ells[i];
    row.e_ell = s.e_ell;
    row.e_ell_minus = s.e_ell_minus;
    row.ratio = s.e_ell_minus / s.e_ell;
    row.gap = s.gap;
    row.l1 = moment(v, 0, Part::full);
    row.l1_minus = moment(v, 0, Part::minus);
    row.x2 = moment(v, 2, Part::full);
    row.x2_minus = moment(v, 2, Part::minus);
    for (int q = 0; q <= 2; ++q) finite = finite && std::isfinite(moment(v, q, Part::full));
    try {
      row.a = scattering_length_ode(v).a;
    } catch (const ResonanceError&) {
      row.a = std::numeric_limits<double>::infinity();
      a_finite = false;
    }
    rep.rows.push_back(row);
  }

  std::vector<double> e, l1, l1m, x2, x2m, em;
  for (const auto& r : rep.rows) {
    e.push_back(std::abs(r.e_ell));
    l1.push_back(r.l1);
    l1m.push_back(r.l1_minus);
    x2.push_back(r.x2);
    x2m.push_back(r.x2_minus);
    em.push_back(std::abs(r.e_ell_minus));
  }
  const bool has_minus = std::any_of(l1m.begin(), l1m.end(), [](double x) { return x > 0.0; });

  rep.items.push_back({"A1", "moments int |V| |x|^q, q = 0, 1, 2 finite", 0.0, 0.0, finite, {}});

  {
    AssumptionItem item{"A3", "||V||_L1 bounded (max/min)", spread(l1), opts.bounded_ratio, false, {}};
    item.passed = item.measured <= opts.bounded_ratio;
    rep.items.push_back(item);
  }
  if (has_minus) {
    rep.items.push_back(exponent_item("A3", "exponent of ||V-||_L1 vs |e|", e, l1m, 1.0, opts.exponent_tol));
    rep.items.push_back(exponent_item("A4", "exponent of int |V-| |x|^2 vs |e|", e, x2m, 3.0, opts.exponent_tol));
  } else {
    rep.items.push_back({"A3", "exponent of ||V-||_L1 vs |e|", 0.0, 1.0, true, "vacuous: V- = 0"});
    rep.items.push_back({"A4", "exponent of int |V-| |x|^2 vs |e|", 0.0, 3.0, true, "vacuous: V- = 0"});
  }
  rep.items.push_back(exponent_item("A4", "exponent of int |V| |x|^2 vs |e|", e, x2, 2.0, opts.exponent_tol));

  {
    AssumptionItem item{"A2", "|e_ell| decreases towards 0", e.back() / e.front(), 0.0, true, {}};
    int inversions = 0;
    for (std::size_t i = 1; i < e.size(); ++i)
      if (e[i] >= e[i - 1]) ++inversions;
    item.passed = inversions == 0 && e.back() < e.front();
    item.note = fmt::format("{} non-decreasing steps; |e| final/initial = {:.4g}", inversions, item.measured);
    rep.items.push_back(item);
  }
  if (has_minus) {
    // e- = O(e): |e-| must shrink at least linearly with |e|
    auto item = exponent_item("A2'", "e_minus / e_ell bounded (exponent of |e-| vs |e|)", e, em, 1.0,
                              opts.exponent_tol);
    item.passed = item.measured >= 1.0 - opts.exponent_tol;
    double worst = 0.0;
    for (const auto& r : rep.rows) worst = std::max(worst, std::abs(r.ratio));
    item.note += fmt::format("; max |e-/e| = {:.4g}", worst);
    rep.items.push_back(item);
  } else {
    rep.items.push_back({"A2'", "e_minus / e_ell bounded", 0.0, 1.0, true, "vacuous: V- = 0"});
  }
  {
    double floor = rep.rows.front().gap;
    for (const auto& r : rep.rows) floor = std::min(floor, r.gap);
    AssumptionItem item{"A2", "spectral gap floor", floor, opts.gap_floor, floor >= opts.gap_floor, {}};
    rep.items.push_back(item);
  }
  {
    AssumptionItem item{"A5", "a(V_ell) finite and settling", 0.0, 0.0, a_finite, {}};
    if (a_finite) {
      const double last = rep.rows.back().a;
      const double prev = rep.rows[rep.rows.size() - 2].a;
      item.measured = std::abs(last - prev);
      item.target = 1e-3 * std::max(1.0, std::abs(last));
      item.passed = item.measured <= item.target;
      item.note = fmt::format("a at smallest ell = {:.10g}", last);
    } else {
      item.note = "a infinite at some ell";
    }
    rep.items.push_back(item);
  }
  return rep;
}

AssumptionReport check_assumptions(const PotentialFamily& family, const std::vector<double>& ells,
                                   const std::vector<SpectralData>& spectra, const AssumptionOptions& opts) {
  if (ells.size() < 4) throw PreconditionError(fmt::format("insufficient points: {} < 4 sweep entries", ells.size()));
  std::vector<RadialPotential> pots;
  for (double ell : ells) pots.push_back(family.instantiate(ell));
  return check_assumptions(pots, ells, spectra, opts);
}

AssumptionReport check_assumptions(const TunedSweep& sweep, const AssumptionOptions& opts) {
  std::vector<RadialPotential> pots;
  std::vector<double> ells;
  std::vector<SpectralData> spectra;
  for (const auto& e : sweep.entries) {
    pots.push_back(e.potential);
    ells.push_back(e.ell);
    spectra.push_back(e.spectrum);
  }
  return check_assumptions(pots, ells, spectra, opts);
}

}  // namespace pointint
