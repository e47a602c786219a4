#include "pointint/operators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <limits>
#include <mutex>
#include <numbers>

#include <fmt/format.h>

#include "pointint/errors.hpp"

namespace pointint {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};

// sin(z)/z - 1
cplx sinc_minus_one(cplx z) {
  if (std::abs(z) < 1e-2) {
    const cplx z2 = z * z;
    return z2 * (-1.0 / 6.0 + z2 * (1.0 / 120.0 - z2 / 5040.0));
  }
  return std::sin(z) / z - 1.0;
}

std::vector<double> lagrange_values(const std::vector<double>& x, double xi) {
  std::vector<double> out(x.size(), 1.0);
  for (std::size_t i = 0; i < x.size(); ++i)
    for (std::size_t j = 0; j < x.size(); ++j)
      if (j != i) out[i] *= (xi - x[j]) / (x[i] - x[j]);
  return out;
}

// Reference-panel data for integrating l_i(r) l_j(s) K(r, s) over r < s.
// Outer variable s = sigma, inner r = -1 + (1 + sigma)(1 + tau)/2.
struct DiagonalRule {
  int p = 0;
  int q = 0;
  std::vector<double> sigma, wsigma, tau, wtau;
  std::vector<double> ls;  // [j * q + m] = l_j(sigma_m)
  std::vector<double> lr;  // [(m * q + t) * p + i] = l_i(r_mt)
};

DiagonalRule make_diagonal_rule(int order) {
  const auto& nodes = gauss_legendre(order);
  const auto& outer = gauss_legendre(2 * order);
  DiagonalRule rule;
  rule.p = order;
  rule.q = 2 * order;
  rule.sigma = outer.x;
  rule.wsigma = outer.w;
  rule.tau = outer.x;
  rule.wtau = outer.w;
  rule.ls.assign(static_cast<std::size_t>(rule.p * rule.q), 0.0);
  rule.lr.assign(static_cast<std::size_t>(rule.q * rule.q * rule.p), 0.0);
  for (int m = 0; m < rule.q; ++m) {
    const auto l = lagrange_values(nodes.x, rule.sigma[m]);
    for (int j = 0; j < rule.p; ++j) rule.ls[j * rule.q + m] = l[j];
    for (int t = 0; t < rule.q; ++t) {
      const double xr = -1.0 + 0.5 * (1.0 + rule.sigma[m]) * (1.0 + rule.tau[t]);
      const auto lt = lagrange_values(nodes.x, xr);
      for (int i = 0; i < rule.p; ++i) rule.lr[(m * rule.q + t) * rule.p + i] = lt[i];
    }
  }
  return rule;
}

const DiagonalRule& diagonal_rule(int order) {
  static std::mutex mutex;
  static std::map<int, DiagonalRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_diagonal_rule(order)).first;
  return it->second;
}

Eigen::VectorXd sqrt_abs(const Eigen::VectorXd& values) { return values.cwiseAbs().cwiseSqrt(); }

Eigen::MatrixXcd weight_both_sides(const Eigen::MatrixXcd& m, const Eigen::VectorXd& left,
                                   const Eigen::VectorXd& right) {
  return left.cast<cplx>().asDiagonal() * m * right.cast<cplx>().asDiagonal();
}

struct SymmetricResult {
  double e = 0.0;
  Eigen::VectorXd phi;
  std::vector<double> eigenvalues;
  double residual = 0.0;
};

void fix_sign(Eigen::VectorXd& phi) {
  Eigen::Index idx = 0;
  phi.cwiseAbs().maxCoeff(&idx);
  if (phi[idx] < 0.0) phi = -phi;
}

SymmetricResult symmetric_lowest(const Eigen::MatrixXd& x_in, const Eigen::VectorXd& j, double residual_tol) {
  const Eigen::MatrixXd x = 0.5 * (x_in + x_in.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> ex(x);
  if (ex.info() != Eigen::Success) throw Error("eigendecomposition of X failed");
  const Eigen::VectorXd lam = ex.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  const Eigen::MatrixXd xh = ex.eigenvectors() * lam.asDiagonal() * ex.eigenvectors().transpose();
  Eigen::MatrixXd s = xh * j.asDiagonal() * xh;
  s = 0.5 * (s + s.transpose());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(s);
  if (es.info() != Eigen::Success) throw Error("eigendecomposition of X^1/2 J X^1/2 failed");

  SymmetricResult out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) out.eigenvalues.push_back(1.0 + es.eigenvalues()[i]);
  out.e = out.eigenvalues.empty() ? 1.0 : out.eigenvalues.front();
  const Eigen::VectorXd psi = es.eigenvectors().col(0);
  Eigen::VectorXd phi = j.asDiagonal() * (xh * psi);
  if (phi.norm() < 1e-12) phi = psi;
  phi.normalize();

  const Eigen::MatrixXd jx = j.asDiagonal() * x;
  auto residual_of = [&](const Eigen::VectorXd& v, double e) { return (v + jx * v - e * v).norm(); };
  out.residual = residual_of(phi, out.e);
  const double scale = std::max(1.0, x.cwiseAbs().maxCoeff());
  if (out.residual > residual_tol * scale) {
    Eigen::EigenSolver<Eigen::MatrixXd> eg(jx);
    if (eg.info() != Eigen::Success) throw Error("nonsymmetric eigensolver failed");
    Eigen::Index best = 0;
    for (Eigen::Index i = 1; i < eg.eigenvalues().size(); ++i)
      if (eg.eigenvalues()[i].real() < eg.eigenvalues()[best].real()) best = i;
    Eigen::VectorXd alt = eg.eigenvectors().col(best).real();
    if (alt.norm() > 0.0) {
      alt.normalize();
      const double e_alt = 1.0 + eg.eigenvalues()[best].real();
      const double r_alt = residual_of(alt, e_alt);
      if (r_alt < out.residual) {
        phi = alt;
        out.e = e_alt;
        out.eigenvalues.front() = e_alt;
        out.residual = r_alt;
      }
    }
  }
  fix_sign(phi);
  out.phi = std::move(phi);
  return out;
}

}  // namespace

RadialGrid make_inner_grid(const RadialPotential& v, const GridOptions& opts) {
  const auto bp = v.breakpoints();
  return build_grid(bp, v.support_radius(), opts.points_per_segment, opts.order);
}

RadialGrid make_outer_grid(const RadialGrid& inner, cplx k, const GridOptions& opts) {
  if (!(k.imag() > 0.0)) throw PreconditionError("outer grid needs Im k > 0");
  if (!(opts.rmax_factor > 0.0)) throw PreconditionError("grid.rmax_factor must be positive");
  const double width = 1.0 / std::max(k.imag(), std::abs(k));
  return extend_grid(inner, inner.r_max() + opts.rmax_factor / k.imag(), width);
}

cplx green_kernel(cplx k, double r_min, double r_max) {
  if (k == 0.0) return r_min;
  const cplx z = k * r_min;
  if (std::abs(z) >= 1.0)
    return (std::exp(kI * k * (r_max + r_min)) - std::exp(kI * k * (r_max - r_min))) / (2.0 * kI * k);
  return r_min * (1.0 + sinc_minus_one(z)) * std::exp(kI * k * r_max);
}

cplx r_function(cplx z) {
  if (std::abs(z) < 1e-2) {
    return z * (1.0 / 2.0 + z * (1.0 / 6.0 + z * (1.0 / 24.0 + z * (1.0 / 120.0 + z / 720.0))));
  }
  return (std::exp(z) - 1.0 - z) / z;
}

cplx green_remainder(cplx k, double r_min, double r_max) {
  if (k == 0.0) return 0.0;
  const cplx z = k * r_min;
  if (std::abs(z) >= 1.0) return green_kernel(k, r_min, r_max) - r_min - kI * k * r_min * r_max;
  const cplx sm1 = sinc_minus_one(z);
  const cplx w = kI * k * r_max;
  return r_min * (sm1 * (1.0 + w) + (1.0 + sm1) * w * r_function(w));
}

double pwave_kernel(double r_min, double r_max) {
  if (r_max <= 0.0) return 0.0;
  return r_min * r_min / (3.0 * r_max);
}

Eigen::MatrixXcd assemble_kernel(const RadialGrid& grid, const ReducedKernel& kernel) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const auto r = grid.nodes();
  const auto sw = grid.sqrt_weights();
  Eigen::MatrixXcd m(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i; j < n; ++j) {
      const cplx val = sw[i] * kernel(r[i], r[j]) * sw[j];
      m(i, j) = val;
      m(j, i) = val;
    }

  const auto& rule = diagonal_rule(grid.order());
  const int p = rule.p;
  const int q = rule.q;
  Eigen::MatrixXcd a(p, p);
  std::vector<cplx> c(static_cast<std::size_t>(p));
  for (const auto& panel : grid.panels()) {
    const double h = panel.b - panel.a;
    a.setZero();
    for (int mi = 0; mi < q; ++mi) {
      const double s = panel.a + 0.5 * h * (1.0 + rule.sigma[mi]);
      const double inner_jac = 0.25 * h * (1.0 + rule.sigma[mi]);
      std::fill(c.begin(), c.end(), cplx{});
      for (int t = 0; t < q; ++t) {
        const double rr = panel.a + 0.5 * (s - panel.a) * (1.0 + rule.tau[t]);
        const cplx kv = rule.wtau[t] * kernel(rr, s);
        const double* l = &rule.lr[static_cast<std::size_t>((mi * q + t) * p)];
        for (int i = 0; i < p; ++i) c[i] += l[i] * kv;
      }
      const double pref = 0.5 * h * rule.wsigma[mi] * inner_jac;
      for (int j = 0; j < p; ++j) {
        const double lj = pref * rule.ls[j * q + mi];
        for (int i = 0; i < p; ++i) a(i, j) += c[i] * lj;
      }
    }
    const auto off = static_cast<Eigen::Index>(panel.offset);
    for (int i = 0; i < p; ++i)
      for (int j = 0; j < p; ++j) m(off + i, off + j) = (a(i, j) + a(j, i)) / (sw[off + i] * sw[off + j]);
  }
  return m;
}

Eigen::VectorXd potential_samples(const RadialPotential& v, const RadialGrid& grid, Part part) {
  const auto r = grid.nodes();
  Eigen::VectorXd out(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) out[static_cast<Eigen::Index>(i)] = v.part_at(r[i], part);
  return out;
}

Eigen::VectorXd sign_samples(const RadialPotential& v, const RadialGrid& grid) {
  const auto r = grid.nodes();
  Eigen::VectorXd out(static_cast<Eigen::Index>(r.size()));
  for (std::size_t i = 0; i < r.size(); ++i) out[static_cast<Eigen::Index>(i)] = v.sign_at(r[i]);
  return out;
}

void check_grid_covers(const RadialPotential& v, const RadialGrid& grid) {
  if (grid.size() == 0) throw PreconditionError("empty grid");
  const double rv = v.support_radius();
  const double tol = 1e-12 * std::max(1.0, rv);
  if (grid.r_max() < rv - tol)
    throw PreconditionError(fmt::format("grid ends at {} but supp V extends to {}", grid.r_max(), rv));
  auto is_edge = [&](double b) {
    for (const auto& p : grid.panels())
      if (std::abs(p.a - b) <= tol || std::abs(p.b - b) <= tol) return true;
    return false;
  };
  auto edges = v.breakpoints();
  edges.push_back(rv);
  for (double b : edges)
    if (!is_edge(b)) throw PreconditionError(fmt::format("jump of V at r = {} is not a panel boundary", b));
}

KernelOp build_X(const RadialPotential& v, const RadialGrid& grid, Part part) {
  check_grid_covers(v, grid);
  const Eigen::VectorXd s = sqrt_abs(potential_samples(v, grid, part == Part::net ? Part::full : part));
  const auto g = assemble_kernel(grid, [](double a, double b) { (void)b; return cplx(a, 0.0); });
  KernelOp op;
  op.matrix = weight_both_sides(g, s, s);
  op.tag = part == Part::plus ? KernelTag::Xplus : part == Part::minus ? KernelTag::Xminus : KernelTag::X;
  return op;
}

KernelOp build_Bk(const RadialPotential& v, const RadialGrid& grid, cplx k) {
  if (k.imag() < 0.0) throw PreconditionError("B_k needs Im k >= 0");
  check_grid_covers(v, grid);
  const Eigen::VectorXd s = sqrt_abs(potential_samples(v, grid, Part::full));
  const Eigen::VectorXd j = sign_samples(v, grid);
  const auto g = assemble_kernel(grid, [k](double a, double b) { return green_kernel(k, a, b); });
  KernelOp op;
  op.matrix = weight_both_sides(g, j.cwiseProduct(s), s);
  op.tag = KernelTag::Bk;
  op.k = k;
  return op;
}

KernelOp build_R(const RadialPotential& v, const RadialGrid& grid, cplx k) {
  if (!(k.imag() > 0.0)) throw PreconditionError("R needs Im k > 0");
  check_grid_covers(v, grid);
  const Eigen::VectorXd s = sqrt_abs(potential_samples(v, grid, Part::full));
  const Eigen::VectorXd j = sign_samples(v, grid);
  const auto g = assemble_kernel(grid, [k](double a, double b) { return green_remainder(k, a, b); });
  KernelOp op;
  op.matrix = weight_both_sides(g, j.cwiseProduct(s), s);
  op.tag = KernelTag::R;
  op.k = k;
  return op;
}

KernelOp build_X_pwave(const RadialPotential& v, const RadialGrid& grid) {
  check_grid_covers(v, grid);
  const Eigen::VectorXd s = sqrt_abs(potential_samples(v, grid, Part::full));
  const auto g = assemble_kernel(grid, [](double a, double b) { return cplx(pwave_kernel(a, b), 0.0); });
  KernelOp op;
  op.matrix = weight_both_sides(g, s, s);
  op.tag = KernelTag::PWave;
  return op;
}

KernelOp free_resolvent(const RadialGrid& grid, cplx k) {
  KernelOp op;
  op.matrix = assemble_kernel(grid, [k](double a, double b) { return green_kernel(k, a, b); });
  op.tag = KernelTag::Free;
  op.k = k;
  return op;
}

Eigen::VectorXcd g_vector(const RadialGrid& grid, cplx k) {
  if (!(k.imag() > 0.0)) throw PreconditionError("g_k needs Im k > 0");
  const auto r = grid.nodes();
  const auto sw = grid.sqrt_weights();
  Eigen::VectorXcd g(static_cast<Eigen::Index>(r.size()));
  const double norm = 1.0 / std::sqrt(4.0 * kPi);
  for (std::size_t i = 0; i < r.size(); ++i) g[static_cast<Eigen::Index>(i)] = sw[i] * norm * std::exp(kI * k * r[i]);
  return g;
}

ReducedVectors reduced_vectors(const RadialPotential& v, const RadialGrid& grid, cplx k) {
  const auto r = grid.nodes();
  const auto sw = grid.sqrt_weights();
  const Eigen::VectorXd s = sqrt_abs(potential_samples(v, grid, Part::full));
  const Eigen::VectorXd j = sign_samples(v, grid);
  ReducedVectors out;
  const auto n = static_cast<Eigen::Index>(r.size());
  out.v_abs.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.v_abs[i] = sw[i] * std::sqrt(4.0 * kPi) * r[i] * s[i];
  out.v_sgn = j.cast<cplx>().asDiagonal() * out.v_abs;
  if (k.imag() > 0.0) out.gk = g_vector(grid, k);
  return out;
}

SpectralData lowest_eigenpairs(const RadialPotential& v, const RadialGrid& grid, const SpectralOptions& opts) {
  if (v.is_zero()) throw PreconditionError("lowest_eigenpairs needs a nonzero potential");
  const Eigen::MatrixXd x = build_X(v, grid, Part::full).matrix.real();
  const Eigen::VectorXd j = sign_samples(v, grid);
  auto res = symmetric_lowest(x, j, opts.residual_tol);

  SpectralData out;
  out.e_ell = res.e;
  out.residual = res.residual;
  out.eigenvalues = res.eigenvalues;
  out.phi = std::move(res.phi);

  const auto& ev = out.eigenvalues;
  if (ev.size() > 1 && out.e_ell < 1.0 - opts.degeneracy_tol) {
    const double scale = std::max(1.0, std::abs(ev.front()));
    if (std::abs(ev[1] - ev[0]) <= opts.degeneracy_tol * scale)
      throw DegeneracyError(fmt::format("lowest eigenvalue {} of 1 + JX is degenerate", ev[0]));
  }
  out.gap = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < ev.size(); ++i) out.gap = std::min(out.gap, std::abs(ev[i]));

  if (v.has_negative_part()) {
    const Eigen::MatrixXd xm = build_X(v, grid, Part::minus).matrix.real();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> em(0.5 * (xm + xm.transpose()), Eigen::EigenvaluesOnly);
    out.e_ell_minus = 1.0 - em.eigenvalues().maxCoeff();
  } else {
    out.e_ell_minus = 1.0;
  }
  return out;
}

KappaSpectrum spectrum_at(const RadialPotential& v, const RadialGrid& grid, double kappa) {
  if (!(kappa >= 0.0)) throw PreconditionError("kappa must be >= 0");
  check_grid_covers(v, grid);
  const Eigen::VectorXd s = sqrt_abs(potential_samples(v, grid, Part::full));
  const Eigen::VectorXd j = sign_samples(v, grid);
  const cplx k{0.0, kappa};
  const auto g = assemble_kernel(grid, [k](double a, double b) { return green_kernel(k, a, b); });
  const Eigen::MatrixXd x = (s.asDiagonal() * g.real() * s.asDiagonal()).eval();
  auto res = symmetric_lowest(x, j, 1e-8);
  return {res.e, std::move(res.phi), std::move(res.eigenvalues)};
}

KernelOp projector_P(const SpectralData& spec, const RadialPotential& v, const RadialGrid& grid) {
  const Eigen::VectorXd j = sign_samples(v, grid);
  if (spec.phi.size() != j.size()) throw PreconditionError("phi does not live on this grid");
  const Eigen::VectorXd jphi = j.cwiseProduct(spec.phi);
  const double denom = jphi.dot(spec.phi);
  if (std::abs(denom) < 1e-14) throw PreconditionError("<J phi, phi> vanishes; projector undefined");
  KernelOp op;
  op.matrix = (spec.phi * jphi.transpose() / denom).cast<cplx>();
  op.tag = KernelTag::Projector;
  return op;
}

double op_norm(const Eigen::MatrixXcd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::BDCSVD<Eigen::MatrixXcd> svd(a);
  return svd.singularValues()[0];
}

double op_norm(const KernelOp& a) { return op_norm(a.matrix); }
double hs_norm(const Eigen::MatrixXcd& a) { return a.norm(); }
double hs_norm(const KernelOp& a) { return a.matrix.norm(); }

OnePlusSolver::OnePlusSolver(const Eigen::MatrixXcd& b)
    : one_plus_(Eigen::MatrixXcd::Identity(b.rows(), b.cols()) + b), lu_(one_plus_) {
  if (b.rows() != b.cols()) throw PreconditionError("1 + B needs a square B");
  if (lu_.rcond() < 1e-14) throw ResonanceError(fmt::format("1 + B is singular (rcond = {:.3g})", lu_.rcond()));
}

Eigen::VectorXcd OnePlusSolver::solve(const Eigen::VectorXcd& rhs) const {
  if (rhs.size() != one_plus_.rows()) throw PreconditionError("right-hand side length mismatch");
  Eigen::VectorXcd x = lu_.solve(rhs);
  const double res = (one_plus_ * x - rhs).norm();
  if (res > 1e-8 * std::max(1.0, rhs.norm()))
    throw ResonanceError(fmt::format("solve of 1 + B has residual {:.3g}", res));
  return x;
}

Eigen::MatrixXcd OnePlusSolver::solve(const Eigen::MatrixXcd& rhs) const {
  if (rhs.rows() != one_plus_.rows()) throw PreconditionError("right-hand side size mismatch");
  Eigen::MatrixXcd x = lu_.solve(rhs);
  const double res = (one_plus_ * x - rhs).norm();
  if (res > 1e-8 * std::max(1.0, rhs.norm()))
    throw ResonanceError(fmt::format("solve of 1 + B has residual {:.3g}", res));
  return x;
}

Eigen::MatrixXcd OnePlusSolver::inverse() const {
  return solve(Eigen::MatrixXcd::Identity(one_plus_.rows(), one_plus_.cols()).eval());
}

Eigen::VectorXcd solve_one_plus(const KernelOp& b, const Eigen::VectorXcd& rhs) {
  return OnePlusSolver(b.matrix).solve(rhs);
}

}  // namespace pointint
