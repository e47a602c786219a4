#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "pointint/errors.hpp"
#include "pointint/operators.hpp"

using namespace pointint;
using std::numbers::pi;

namespace {

RadialGrid grid_for(const RadialPotential& v, int pps = 64) {
  const auto bp = v.breakpoints();
  return build_grid(bp, v.support_radius(), pps);
}

}  // namespace

TEST_CASE("pointwise kernels") {
  CHECK(std::abs(green_kernel(1e-12, 0.3, 0.7) - 0.3) < 1e-12);
  CHECK(green_kernel(0.0, 0.3, 0.7) == cplx(0.3));
  const cplx val = green_kernel({0.0, 1.0}, 1.0, 2.0);
  CHECK(std::abs(val - std::sinh(1.0) * std::exp(-2.0)) < 1e-15);
  CHECK(val.real() == doctest::Approx(0.159047).epsilon(1e-5));
  // both evaluation branches agree with the textbook form
  for (double x : {0.05, 0.5, 0.99, 1.01, 3.0}) {
    const cplx k{0.4, 0.7};
    const cplx direct = std::sin(k * x) * std::exp(cplx(0, 1) * k * 4.0) / k;
    CHECK(std::abs(green_kernel(k, x, 4.0) - direct) < 1e-14);
    const cplx rem = direct - x - cplx(0, 1) * k * x * 4.0;
    CHECK(std::abs(green_remainder(k, x, 4.0) - rem) < 1e-13);
  }
  CHECK(pwave_kernel(0.5, 2.0) == doctest::Approx(0.25 / 6.0));
}

TEST_CASE("r function") {
  for (double t : {1e-3, 1e-5, 1e-8}) {
    const cplx z{t, -t};
    CHECK(std::abs(r_function(z) / z - 0.5) < 2 * t);
  }
  const cplx z{0.3, 0.2};
  CHECK(std::abs(r_function(z) - (std::exp(z) - 1.0 - z) / z) < 1e-15);
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> re(-20.0, 0.0), im(-20.0, 20.0);
  int violations = 0;
  for (int i = 0; i < 1000; ++i) {
    const cplx w{re(rng), im(rng)};
    if (std::abs(r_function(w)) > std::abs(w) / 2 * (1 + 1e-14)) ++violations;
  }
  CHECK(violations == 0);
}

TEST_CASE("s-wave reduction of 1/p^2") {
  const auto g = build_grid({}, 1.0, 32);
  const auto m = assemble_kernel(g, [](double a, double) { return cplx(a); });
  Eigen::VectorXcd u(static_cast<Eigen::Index>(g.size()));
  for (std::size_t i = 0; i < g.size(); ++i) u[i] = g.sqrt_weights()[i] * std::sqrt(4 * pi) * g.nodes()[i];
  // 3D: int int 1/(4 pi |x - y|) over the unit ball twice
  CHECK(std::abs((u.transpose() * m * u)(0, 0) - 8 * pi / 15) < 1e-13);
}

TEST_CASE("square well spectrum of X") {
  const auto v = RadialPotential::square_well(-1.0, 1.0);
  const auto g = grid_for(v, 256);
  REQUIRE(g.size() >= 200);
  CHECK(build_X(RadialPotential::zero(), g).matrix.norm() == 0.0);
  const Eigen::MatrixXd xm = build_X(v, g, Part::minus).matrix.real();
  CHECK((xm - xm.transpose()).norm() < 1e-15 * xm.norm());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(xm, Eigen::EigenvaluesOnly);
  std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
  std::sort(ev.rbegin(), ev.rend());
  for (int n = 0; n < 5; ++n) {
    const double exact = 1.0 / ((n + 0.5) * (n + 0.5) * pi * pi);
    CHECK(std::abs(ev[n] - exact) < 1e-8 * exact);
  }
  CHECK(ev.back() > -1e-14);
  // plus part of a negative well vanishes
  CHECK(build_X(v, g, Part::plus).matrix.norm() == 0.0);
}

TEST_CASE("e_minus oracles") {
  const auto res = RadialPotential::square_well(-pi * pi / 4, 1.0);
  CHECK(std::abs(lowest_eigenpairs(res, grid_for(res)).e_ell_minus) < 1e-8);
  const auto unit = RadialPotential::square_well(-1.0, 1.0);
  const auto spec = lowest_eigenpairs(unit, grid_for(unit));
  CHECK(spec.e_ell_minus == doctest::Approx(1.0 - 4.0 / (pi * pi)).epsilon(1e-10));
  CHECK(spec.e_ell == doctest::Approx(spec.e_ell_minus).epsilon(1e-10));
  const auto core = RadialPotential::square_well(5.0, 1.0);
  const auto sc = lowest_eigenpairs(core, grid_for(core));
  CHECK(sc.e_ell >= 1.0 - 1e-12);
  CHECK(sc.e_ell_minus == 1.0);
  CHECK_THROWS_AS(lowest_eigenpairs(RadialPotential::zero(), grid_for(RadialPotential::zero())),
                  PreconditionError);
}

TEST_CASE("grid must follow the potential") {
  RadialPotential v({{0.0, 0.45, 2.0}, {0.45, 1.0, -3.0}});
  const auto g = build_grid({}, 1.0, 32);
  CHECK_THROWS_AS(build_X(v, g), PreconditionError);
  const auto short_grid = build_grid({}, 0.5, 32);
  CHECK_THROWS_AS(build_X(RadialPotential::square_well(1.0, 1.0), short_grid), PreconditionError);
}

TEST_CASE("B_k and R") {
  RadialPotential v({{0.0, 0.4, 6.0}, {0.4, 1.1, -4.0}});
  const auto g = grid_for(v);
  const Eigen::VectorXd j = sign_samples(v, g);
  const auto x = build_X(v, g);
  const auto b0 = build_Bk(v, g, 0.0);
  CHECK((b0.matrix - j.cast<cplx>().asDiagonal() * x.matrix).norm() == 0.0);
  CHECK_THROWS_AS(build_Bk(v, g, {0.0, -1.0}), PreconditionError);
  CHECK_THROWS_AS(build_R(v, g, {1.0, 0.0}), PreconditionError);

  for (cplx k : {cplx(0.0, 2.0), cplx(1.0, 1.0), cplx(0.0, 1e-3)}) {
    const auto bk = build_Bk(v, g, k);
    const auto r = build_R(v, g, k);
    const auto vec = reduced_vectors(v, g, k);
    const Eigen::MatrixXcd rank1 = (cplx(0, 1) * k / (4 * pi)) * vec.v_sgn * vec.v_abs.transpose();
    const Eigen::MatrixXcd alt = bk.matrix - b0.matrix - rank1;
    CHECK((r.matrix - alt).norm() < 1e-12 * std::max(1.0, bk.matrix.norm()));
  }
}

TEST_CASE("reduced vectors") {
  RadialPotential v({{0.0, 0.3, 2.0}, {0.3, 1.0, -1.5}});
  const auto g = grid_for(v);
  const auto vec = reduced_vectors(v, g, {0.0, 1.0});
  CHECK(std::abs(vec.v_abs.dot(vec.v_sgn) - moment(v, 0, Part::net)) < 1e-12);
  CHECK(std::abs(vec.v_abs.squaredNorm() - moment(v, 0, Part::full)) < 1e-12);

  const auto outer = extend_grid(build_grid({}, 1.0, 32), 1.0 + 18.0, 1.0);
  CHECK(std::abs(g_vector(outer, {0.0, 1.0}).squaredNorm() - 1.0 / (8 * pi)) < 1e-14);
  CHECK(std::abs(g_vector(outer, {0.5, 2.0}).squaredNorm() - 1.0 / (16 * pi)) < 1e-14);
  CHECK_THROWS_AS(g_vector(outer, {1.0, 0.0}), PreconditionError);

  const auto z = reduced_vectors(RadialPotential::zero(), g, {0.0, 1.0});
  CHECK(z.v_abs.norm() == 0.0);
  CHECK(z.v_sgn.norm() == 0.0);
}

TEST_CASE("isospectrality and eigenvector") {
  RadialPotential v({{0.0, 0.5, 8.0}, {0.5, 1.0, -9.0}});
  const auto g = grid_for(v);
  const auto spec = lowest_eigenpairs(v, g);
  const Eigen::MatrixXd jx = (sign_samples(v, g).asDiagonal() * build_X(v, g).matrix.real()).eval();
  Eigen::EigenSolver<Eigen::MatrixXd> eg(jx);
  std::vector<double> direct;
  for (Eigen::Index i = 0; i < eg.eigenvalues().size(); ++i) {
    CHECK(std::abs(eg.eigenvalues()[i].imag()) < 1e-8);
    direct.push_back(1.0 + eg.eigenvalues()[i].real());
  }
  std::sort(direct.begin(), direct.end());
  for (int i = 0; i < 5; ++i) CHECK(std::abs(direct[i] - spec.eigenvalues[i]) < 1e-10);
  CHECK(spec.residual < 1e-10);
  CHECK(std::abs(spec.phi.norm() - 1.0) < 1e-14);
  const Eigen::VectorXd lhs = spec.phi + jx * spec.phi;
  CHECK((lhs - spec.e_ell * spec.phi).norm() < 1e-10);
  CHECK(spec.gap > 0.0);
  Eigen::Index idx;
  spec.phi.cwiseAbs().maxCoeff(&idx);
  CHECK(spec.phi[idx] > 0.0);
}

TEST_CASE("projector") {
  RadialPotential v({{0.0, 0.5, 8.0}, {0.5, 1.0, -12.0}});
  const auto g = grid_for(v);
  const auto spec = lowest_eigenpairs(v, g);
  const auto p = projector_P(spec, v, g);
  CHECK(std::abs(p.matrix.trace() - 1.0) < 1e-12);
  CHECK((p.matrix * spec.phi.cast<cplx>() - spec.phi.cast<cplx>()).norm() < 1e-12);
  CHECK((p.matrix * p.matrix - p.matrix).norm() < 1e-10);
  const auto b = build_Bk(v, g, 0.0);
  CHECK((p.matrix * b.matrix - b.matrix * p.matrix).norm() < 1e-8);
  SpectralData bad = spec;
  bad.phi.setZero();
  CHECK_THROWS_AS(projector_P(bad, v, g), PreconditionError);
}

TEST_CASE("norms and solves") {
  CHECK(op_norm(Eigen::MatrixXcd::Zero(4, 4)) == 0.0);
  CHECK(hs_norm(Eigen::MatrixXcd::Identity(9, 9)) == doctest::Approx(3.0));
  std::srand(3);
  for (int t = 0; t < 100; ++t) {
    const Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(6, 6);
    CHECK(op_norm(a) <= hs_norm(a) * (1 + 1e-14));
  }
  RadialPotential v({{0.0, 0.5, 3.0}, {0.5, 1.0, -2.0}});
  const auto g = grid_for(v);
  const auto b = build_Bk(v, g, {0.0, 2.0});
  const Eigen::VectorXcd x0 = Eigen::VectorXcd::Random(b.size());
  const Eigen::VectorXcd rhs = x0 + b.matrix * x0;
  CHECK((solve_one_plus(b, rhs) - x0).norm() < 1e-10 * x0.norm());

  KernelOp singular;
  singular.matrix = -Eigen::MatrixXcd::Identity(3, 3);
  CHECK_THROWS_AS(solve_one_plus(singular, Eigen::VectorXcd::Ones(3)), ResonanceError);
}
