#include "pointint/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <random>

#include <fmt/format.h>

#include "pointint/errors.hpp"
#include "pointint/operators.hpp"

namespace pointint {

namespace {

constexpr double kPi = std::numbers::pi;
const cplx kI{0.0, 1.0};
constexpr double kLowest = -std::numeric_limits<double>::infinity();

void require_upper(cplx k) {
  if (!(k.imag() > 0.0)) throw PreconditionError("F_k needs Im k > 0");
}

double norm3(const Vec3& a) { return std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]); }

double sinc(double x) { return std::abs(x) < 1e-8 ? 1.0 - x * x / 6.0 : std::sin(x) / x; }

double bound_factor(cplx k) { return 1.0 + std::abs(k.real()) / (2.0 * k.imag()); }

}  // namespace

double f_k_closed(double y, cplx k) {
  require_upper(k);
  if (y < 0.0) throw PreconditionError("F_k needs y >= 0");
  return 2.0 * kPi / k.imag() * std::exp(-k.imag() * y) * sinc(k.real() * y);
}

cplx f_k_numeric(double y, cplx k) {
  require_upper(k);
  if (y < 0.0) throw PreconditionError("F_k needs y >= 0");
  const double width = 0.5 / std::abs(k);
  const double tail = 40.0 / k.imag();
  const cplx kb = std::conj(k);
  cplx sum = 0.0;
  if (y == 0.0) {
    const auto g = extend_grid(build_grid({}, width, 16), tail, width);
    for (std::size_t i = 0; i < g.size(); ++i) sum += g.weights()[i] * 4.0 * kPi * std::exp(-2.0 * k.imag() * g.nodes()[i]);
    return sum;
  }
  const int pps = 16 * std::max(1, static_cast<int>(std::ceil(y / width)));
  const auto inner = build_grid({}, y, pps);
  const auto g = extend_grid(inner, y + tail, width);
  const cplx outer_factor = std::sin(kb * y) / (kb * y);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double r = g.nodes()[i];
    cplx f;
    if (i < inner.size())
      f = 4.0 * kPi / y * std::exp(kI * k * r) * std::exp(-kI * kb * y) * std::sin(kb * r) / kb;
    else
      f = 4.0 * kPi * std::exp(-2.0 * k.imag() * r) * outer_factor;
    sum += g.weights()[i] * f;
  }
  return sum;
}

ClosedFormCheck check_f_k(double y, cplx k) {
  ClosedFormCheck c;
  c.name = fmt::format("F_k(y = {:.6g}, k = {:.6g}{:+.6g}i)", y, k.real(), k.imag());
  c.analytic_value = f_k_closed(y, k);
  c.numeric_value = f_k_numeric(y, k);
  c.abs_error = std::abs(c.analytic_value - c.numeric_value);
  return c;
}

BoundCheck g_difference_l2(double y, cplx k) {
  BoundCheck b;
  b.value = 2.0 / (16.0 * kPi * kPi) * (f_k_closed(0.0, k) - f_k_closed(std::abs(y), k));
  b.bound = bound_factor(k) * std::abs(y) / (4.0 * kPi);
  b.holds = b.value <= b.bound * (1.0 + 1e-12) + 1e-15;
  return b;
}

BoundCheck omega_k(const Vec3& z, const Vec3& w, cplx k) {
  const Vec3 d{w[0] - z[0], w[1] - z[1], w[2] - z[2]};
  const double nz = norm3(z);
  const double nw = norm3(w);
  BoundCheck b;
  b.value = f_k_closed(norm3(d), k) + f_k_closed(0.0, k) - f_k_closed(nw, k) - f_k_closed(nz, k);
  b.bound = 2.0 * kPi * bound_factor(k) * (nz + nw);
  b.holds = std::abs(b.value) <= b.bound * (1.0 + 1e-12) + 1e-15;
  return b;
}

BoundCheck omega_k_small_constant(const Vec3& z, const Vec3& w, cplx k) {
  auto b = omega_k(z, w, k);
  b.bound /= 4.0 * kPi * kPi;
  b.holds = std::abs(b.value) <= b.bound * (1.0 + 1e-12) + 1e-15;
  return b;
}

Lemma1Result lemma1_check(const RadialPotential& v, const RadialGrid& grid, const Eigen::VectorXcd& phi) {
  if (phi.size() != static_cast<Eigen::Index>(grid.size())) throw PreconditionError("phi does not live on the grid");
  const Eigen::MatrixXcd x = build_X(v, grid, Part::full).matrix;
  const Eigen::MatrixXcd xp = build_X(v, grid, Part::plus).matrix;
  const Eigen::MatrixXcd xm = build_X(v, grid, Part::minus).matrix;
  const Eigen::VectorXcd j = sign_samples(v, grid).cast<cplx>();
  const Eigen::VectorXcd jx = j.cwiseProduct(phi) + x * phi;
  Lemma1Result r;
  r.lhs = std::sqrt(2.0) * phi.norm() * jx.norm();
  r.rhs = phi.dot(xp * phi + phi - xm * phi).real();
  return r;
}

bool VerifyReport::passed() const {
  return std::all_of(lines.begin(), lines.end(), [](const VerifyLine& l) { return l.passed; });
}

VerifyReport run_verify(std::uint64_t seed) {
  VerifyReport report;
  report.seed = seed;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  auto uni = [&](double a, double b) { return a + (b - a) * unit(rng); };
  auto finish = [&](VerifyLine line) {
    line.passed = line.violations == 0;
    report.lines.push_back(std::move(line));
  };

  {
    VerifyLine line{"F_k closed form vs radial quadrature", 10, 0, 0.0, 1e-8};
    for (int i = 0; i < line.samples; ++i) {
      const cplx k{uni(-2.0, 2.0), uni(0.3, 3.0)};
      const double y = i == 0 ? 0.0 : uni(0.0, 4.0);
      const double err = check_f_k(y, k).abs_error;
      line.worst = std::max(line.worst, err);
      if (err > line.tolerance) ++line.violations;
    }
    finish(line);
  }
  {
    VerifyLine line{"g-difference bound", 1000, 0, kLowest, 0.0};
    for (int i = 0; i < line.samples; ++i) {
      const auto b = g_difference_l2(uni(0.0, 6.0), {uni(-3.0, 3.0), uni(0.05, 3.0)});
      line.worst = std::max(line.worst, b.value - b.bound);
      if (!b.holds) ++line.violations;
    }
    finish(line);
  }
  {
    VerifyLine line{"Omega_k bound", 1000, 0, kLowest, 0.0};
    for (int i = 0; i < line.samples; ++i) {
      const Vec3 z{uni(-2.0, 2.0), uni(-2.0, 2.0), uni(-2.0, 2.0)};
      const Vec3 w{uni(-2.0, 2.0), uni(-2.0, 2.0), uni(-2.0, 2.0)};
      const auto b = omega_k(z, w, {uni(-3.0, 3.0), uni(0.05, 3.0)});
      line.worst = std::max(line.worst, std::abs(b.value) - b.bound);
      if (!b.holds) ++line.violations;
    }
    finish(line);
  }
  {
    VerifyLine line{"|r(z)| <= |z|/2 for Re z <= 0", 1000, 0, kLowest, 0.0};
    for (int i = 0; i < line.samples; ++i) {
      const double scale = std::pow(10.0, uni(-4.0, 2.0));
      const cplx z{-scale * unit(rng), scale * uni(-1.0, 1.0)};
      const double excess = std::abs(r_function(z)) - std::abs(z) / 2.0;
      line.worst = std::max(line.worst, excess);
      if (excess > 1e-15 * std::abs(z)) ++line.violations;
    }
    finish(line);
  }
  {
    VerifyLine line{"sqrt2 |phi| |(J+X)phi| >= <phi,(X+ + 1 - X-)phi>", 10000, 0, kLowest, 1e-12};
    std::normal_distribution<double> gauss;
    const int potentials = 10;
    for (int p = 0; p < potentials; ++p) {
      const int nseg = 2 + static_cast<int>(unit(rng) * 3.0);
      std::vector<Segment> segs;
      double r = 0.0;
      for (int s = 0; s < nseg; ++s) {
        const double h = uni(0.1, 0.7);
        segs.push_back({r, r + h, uni(-10.0, 10.0)});
        r += h;
      }
      const RadialPotential v(segs);
      const auto grid = make_inner_grid(v, {16, 16, 18.0});
      const auto n = static_cast<Eigen::Index>(grid.size());
      for (int t = 0; t < line.samples / potentials; ++t) {
        Eigen::VectorXcd phi(n);
        for (Eigen::Index i = 0; i < n; ++i) phi[i] = {gauss(rng), gauss(rng)};
        const auto res = lemma1_check(v, grid, phi);
        const double excess = (res.rhs - res.lhs) / phi.squaredNorm();
        line.worst = std::max(line.worst, excess);
        if (excess > line.tolerance) ++line.violations;
      }
    }
    finish(line);
  }
  return report;
}

}  // namespace pointint
