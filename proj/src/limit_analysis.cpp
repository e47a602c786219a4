#include "pointint/limit_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <fmt/format.h>

#include "pointint/errors.hpp"
#include "pointint/parallel.hpp"
#include "pointint/scattering.hpp"

namespace pointint {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Factors of -(1)(2)(3): (1) = G[outer, inner] |V|^{1/2},
// (3) = V^{1/2} G[inner, outer], and B_k = the inner block of (3) |V|^{1/2}.
struct Pieces {
  Eigen::MatrixXcd one;
  Eigen::MatrixXcd three;
  Eigen::MatrixXcd bk;
  Eigen::VectorXcd g;
};

Pieces assemble_pieces(const RadialPotential& v, const RadialGrid& inner, const RadialGrid& outer, cplx k) {
  if (!(k.imag() > 0.0)) throw PreconditionError("resolvent comparison needs Im k > 0");
  check_grid_covers(v, inner);
  const auto ni = static_cast<Eigen::Index>(inner.size());
  if (outer.size() < inner.size()) throw PreconditionError("outer grid is smaller than the inner grid");
  for (Eigen::Index i = 0; i < ni; ++i)
    if (outer.nodes()[i] != inner.nodes()[i]) throw PreconditionError("inner grid is not a prefix of the outer grid");

  const Eigen::VectorXd s = potential_samples(v, inner, Part::full).cwiseSqrt();
  const Eigen::VectorXd js = sign_samples(v, inner).cwiseProduct(s);
  const Eigen::MatrixXcd go = free_resolvent(outer, k).matrix;
  Pieces p;
  p.one = go.leftCols(ni) * s.cast<cplx>().asDiagonal();
  p.three = js.cast<cplx>().asDiagonal() * go.topRows(ni);
  p.bk = p.three.leftCols(ni) * s.cast<cplx>().asDiagonal();
  p.g = g_vector(outer, k);
  return p;
}

}  // namespace

const std::vector<std::string>& record_columns() {
  static const std::vector<std::string> cols{
      "ell",           "e_ell",          "e_ell_minus",    "a_bs",    "D_norm",  "Q_norm",    "Q_solve_norm",
      "inv_proj_norm", "I_defect",       "II_norm",        "rank1_defect_a", "rank1_defect_b", "cor4_m1", "cor4_m2",
      "cor4_m3",       "cor4_m4",        "J_phi_phi",      "bound_E", "eigfn_dist", "hw_bound"};
  return cols;
}

double record_field(const ConvergenceRecord& r, std::string_view name) {
  if (name == "ell") return r.ell;
  if (name == "e_ell") return r.e_ell;
  if (name == "e_ell_minus") return r.e_ell_minus;
  if (name == "a_bs") return r.a_bs;
  if (name == "D_norm") return r.D_norm;
  if (name == "Q_norm") return r.Q_norm;
  if (name == "Q_solve_norm") return r.Q_solve_norm;
  if (name == "inv_proj_norm") return r.inv_proj_norm;
  if (name == "I_defect") return r.I_defect;
  if (name == "II_norm") return r.II_norm;
  if (name == "rank1_defect_a") return r.rank1_defect_a;
  if (name == "rank1_defect_b") return r.rank1_defect_b;
  if (name == "cor4_m1") return r.cor4_m1;
  if (name == "cor4_m2") return r.cor4_m2;
  if (name == "cor4_m3") return r.cor4_m3;
  if (name == "cor4_m4") return r.cor4_m4;
  if (name == "J_phi_phi") return r.J_phi_phi;
  if (name == "bound_E") return r.bound_E;
  if (name == "eigfn_dist") return r.eigfn_dist;
  if (name == "hw_bound") return r.hw_bound;
  throw PreconditionError(fmt::format("unknown record field '{}'", name));
}

cplx point_coefficient(double a, cplx k) {
  if (std::isinf(a)) return 4.0 * kPi / (kI * k);
  const cplx denom = 1.0 + kI * k * a;
  if (std::abs(denom) < 1e-12 * std::max(1.0, std::abs(k * a)))
    throw PreconditionError(fmt::format("k = i/a (a = {}): point-interaction coefficient diverges", a));
  return 4.0 * kPi * a / denom;
}

KernelOp target_resolvent(cplx k, double a, const RadialGrid& outer) {
  if (!(k.imag() > 0.0)) throw PreconditionError("target resolvent needs Im k > 0");
  const cplx c = point_coefficient(a, k);
  KernelOp op = free_resolvent(outer, k);
  const Eigen::VectorXcd g = g_vector(outer, k);
  op.matrix -= c * g * g.transpose();
  op.tag = KernelTag::Target;
  return op;
}

ResolventDifference resolvent_difference_norm(const RadialPotential& v, const RadialGrid& inner,
                                              const RadialGrid& outer, cplx k, double a) {
  const auto p = assemble_pieces(v, inner, outer, k);
  const cplx c = point_coefficient(a, k);
  const Eigen::MatrixXcd d = -p.one * OnePlusSolver(p.bk).solve(p.three) + c * p.g * p.g.transpose();
  ResolventDifference out;
  out.D_norm = op_norm(d);
  // Beyond supp V every row and column of D is proportional to e^{ikr}, so
  // the discarded blocks are eps times the kept ones and enter ||D||^2 only
  // at order eps^2.
  const double decay = std::exp(-k.imag() * (outer.r_max() - v.support_radius()));
  const double eps2 = decay * decay / (1.0 - decay * decay);
  out.tail_bound = out.D_norm * eps2 / (1.0 - 2.0 * eps2);
  out.truncation_note = fmt::format("truncated at R_max = {:.6g}; tail <= {:.3g}", outer.r_max(), out.tail_bound);
  return out;
}

LemmaQuantities lemma_decomposition(const RadialPotential& v, const RadialGrid& inner, const RadialGrid& outer,
                                    cplx k, const SpectralData& spec) {
  const auto p = assemble_pieces(v, inner, outer, k);
  const auto ni = static_cast<Eigen::Index>(inner.size());
  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(ni, ni);
  const auto b0 = build_Bk(v, inner, 0.0);
  const auto r = build_R(v, inner, k);
  const auto vec = reduced_vectors(v, inner, k);
  const OnePlusSolver a0(b0.matrix);

  LemmaQuantities out;
  const Eigen::VectorXcd ainv_v = a0.solve(vec.v_sgn);
  const cplx a_c = vec.v_abs.cwiseProduct(ainv_v).sum() / (4.0 * kPi);
  out.a_bs = a_c.real();

  const cplx denom = 4.0 * kPi / (kI * k) + 4.0 * kPi * out.a_bs;
  if (std::abs(denom) < 1e-12) throw PreconditionError("a(V) = i/k: rank-one correction undefined");
  const cplx c = 1.0 / denom;
  const Eigen::MatrixXcd mproj = id - c * ainv_v * vec.v_abs.transpose();
  const Eigen::MatrixXcd q = a0.solve(r.matrix) * mproj;
  out.Q_norm = op_norm(q);

  const Eigen::MatrixXcd ainv3 = a0.solve(p.three);
  const Eigen::MatrixXcd q_ainv3 = q * ainv3;
  out.Q_solve_norm = op_norm(q_ainv3);

  const auto proj = projector_P(spec, v, inner);
  out.inv_proj_norm = op_norm(a0.solve((id - proj.matrix).eval()));

  const Eigen::MatrixXcd one_m = p.one * mproj;
  const Eigen::MatrixXcd term_i = -one_m * ainv3;
  const cplx coef = point_coefficient(out.a_bs, k);
  out.I_defect = op_norm(term_i + coef * p.g * p.g.transpose());

  const Eigen::PartialPivLU<Eigen::MatrixXcd> one_plus_q(id + q);
  const Eigen::MatrixXcd term_ii = one_m * one_plus_q.solve(q_ainv3);
  out.II_norm = op_norm(term_ii);

  const Eigen::MatrixXcd direct = p.one * OnePlusSolver(p.bk).solve(p.three);
  const double dn = op_norm(direct);
  out.decomposition_defect = dn > 0.0 ? op_norm(term_i + term_ii + direct) / dn : op_norm(term_i + term_ii);

  const Eigen::MatrixXcd diff = p.one - p.g * vec.v_abs.transpose();
  out.rank1_defect_a = (diff * ainv_v).norm();
  out.rank1_defect_b = op_norm(diff * ainv3);
  return out;
}

CorollaryMetrics corollary_metrics(const RadialPotential& v, const SpectralData& spec, const RadialGrid& grid) {
  const Eigen::VectorXd j = sign_samples(v, grid);
  if (spec.phi.size() != j.size()) throw PreconditionError("phi does not live on this grid");
  const auto vec = reduced_vectors(v, grid, 0.0);
  const Eigen::VectorXd v_abs = vec.v_abs.real();
  const Eigen::VectorXd abs_phi = spec.phi.cwiseAbs();
  const auto r = grid.nodes();
  const Eigen::Map<const Eigen::VectorXd> rv(r.data(), static_cast<Eigen::Index>(r.size()));
  CorollaryMetrics m;
  m.m1 = moment(v, 1, Part::full);
  m.J_phi_phi = j.cwiseProduct(spec.phi).dot(spec.phi);
  m.m2 = std::abs(m.J_phi_phi + 1.0);
  m.m3 = v_abs.dot(abs_phi);
  m.m4 = rv.cwiseProduct(v_abs).dot(abs_phi);
  return m;
}

double higher_wave_bound(const RadialPotential& v, const RadialGrid& inner) {
  return op_norm(build_X_pwave(v, inner));
}

double higher_wave_margin(const RadialPotential& v, const RadialGrid& inner) {
  const Eigen::MatrixXd x = build_X_pwave(v, inner).matrix.real();
  const Eigen::VectorXd j = sign_samples(v, inner);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(0.5 * (x + x.transpose()));
  const Eigen::VectorXd lam = ex.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd xh = ex.eigenvectors() * lam.asDiagonal() * ex.eigenvectors().transpose();
  Eigen::MatrixXd s = xh * j.asDiagonal() * xh;
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s, Eigen::EigenvaluesOnly);
  return 1.0 + es.eigenvalues().minCoeff();
}

double eigenfunction_distance(const Eigen::VectorXd& psi, const RadialGrid& grid, double a) {
  if (!(a > 0.0)) throw PreconditionError("eigenfunction target needs a > 0");
  if (psi.size() != static_cast<Eigen::Index>(grid.size())) throw PreconditionError("psi does not live on this grid");
  const auto r = grid.nodes();
  const auto sw = grid.sqrt_weights();
  Eigen::VectorXd target(psi.size());
  for (Eigen::Index i = 0; i < psi.size(); ++i) target[i] = sw[i] * std::sqrt(2.0 / a) * std::exp(-r[i] / a);
  return (psi - target).norm();
}

ConvergenceRecord analyze_entry(const TunedEntry& entry, const SweepOptions& opts) {
  const auto& v = entry.potential;
  const auto inner = make_inner_grid(v, opts.grid);
  const auto outer = make_outer_grid(inner, opts.k, opts.grid);
  ConvergenceRecord rec;
  rec.ell = entry.ell;
  rec.e_ell = entry.spectrum.e_ell;
  rec.e_ell_minus = entry.spectrum.e_ell_minus;
  rec.gap = entry.spectrum.gap;

  const auto d = resolvent_difference_norm(v, inner, outer, opts.k, opts.a_star);
  rec.D_norm = d.D_norm;
  rec.tail_bound = d.tail_bound;

  const auto lq = lemma_decomposition(v, inner, outer, opts.k, entry.spectrum);
  rec.a_bs = lq.a_bs;
  rec.Q_norm = lq.Q_norm;
  rec.Q_solve_norm = lq.Q_solve_norm;
  rec.inv_proj_norm = lq.inv_proj_norm;
  rec.I_defect = lq.I_defect;
  rec.II_norm = lq.II_norm;
  rec.rank1_defect_a = lq.rank1_defect_a;
  rec.rank1_defect_b = lq.rank1_defect_b;
  rec.decomposition_defect = lq.decomposition_defect;

  const auto cm = corollary_metrics(v, entry.spectrum, inner);
  rec.cor4_m1 = cm.m1;
  rec.cor4_m2 = cm.m2;
  rec.cor4_m3 = cm.m3;
  rec.cor4_m4 = cm.m4;
  rec.J_phi_phi = cm.J_phi_phi;

  const auto bound = bound_state_energy(v, inner, opts.grid);
  if (bound) {
    rec.bound_E = bound->energy;
    rec.eigfn_dist = opts.a_star > 0.0 ? eigenfunction_distance(bound->psi, bound->grid, opts.a_star) : kNaN;
  } else {
    rec.bound_E = kNaN;
    rec.eigfn_dist = kNaN;
  }
  rec.hw_bound = higher_wave_bound(v, inner);
  rec.hw_margin = higher_wave_margin(v, inner);
  return rec;
}

std::vector<ConvergenceRecord> run_sweep(const TunedSweep& sweep, const SweepOptions& opts) {
  std::vector<ConvergenceRecord> out(sweep.entries.size());
  parallel_for(out.size(), opts.jobs, [&](std::size_t i) {
    try {
      out[i] = analyze_entry(sweep.entries[i], opts);
    } catch (const ResonanceError& e) {
      throw ResonanceError(fmt::format("ell = {}: {}", sweep.entries[i].ell, e.what()));
    } catch (const PreconditionError& e) {
      throw PreconditionError(fmt::format("ell = {}: {}", sweep.entries[i].ell, e.what()));
    }
  });
  return out;
}

RateFit fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size()) throw PreconditionError("fit abscissa and ordinate differ in length");
  std::vector<double> lx, ly;
  RateFit fit;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0) || !std::isfinite(x[i]) || !std::isfinite(y[i])) {
      fit.notes.push_back(fmt::format("point {} dropped: nonpositive or non-finite value", i));
      continue;
    }
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  const auto n = lx.size();
  if (n < 2) throw PreconditionError("rate fit needs at least two positive points");
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  if (sxx == 0.0) throw PreconditionError("rate fit abscissa is constant");
  fit.exponent = sxy / sxx;
  fit.intercept = my - fit.exponent * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double d = ly[i] - (fit.intercept + fit.exponent * lx[i]);
    ss_res += d * d;
  }
  fit.r_squared = syy > 0.0 ? std::clamp(1.0 - ss_res / syy, 0.0, 1.0) : 1.0;
  fit.points = static_cast<int>(n);
  return fit;
}

RateFit fit_rate(const std::vector<ConvergenceRecord>& records, std::string_view field, double min_r_squared) {
  if (records.size() < 4) throw PreconditionError(fmt::format("rate fit needs >= 4 records, got {}", records.size()));
  std::vector<const ConvergenceRecord*> order;
  for (const auto& r : records) order.push_back(&r);
  std::stable_sort(order.begin(), order.end(), [](auto* a, auto* b) { return a->ell > b->ell; });
  auto fit_from = [&](std::size_t first) {
    std::vector<double> x, y;
    for (std::size_t i = first; i < order.size(); ++i) {
      x.push_back(std::abs(order[i]->e_ell));
      y.push_back(record_field(*order[i], field));
    }
    return fit_loglog(x, y);
  };
  auto fit = fit_from(0);
  if (fit.r_squared < min_r_squared) {
    auto refit = fit_from(1);
    refit.notes.insert(refit.notes.begin(),
                       fmt::format("{}: r^2 = {:.4f} < {}; dropped largest-ell point (ell = {})", field,
                                   fit.r_squared, min_r_squared, order.front()->ell));
    return refit;
  }
  return fit;
}

}  // namespace pointint
