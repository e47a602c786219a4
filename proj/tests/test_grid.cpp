#include <doctest.h>

#include <cmath>
#include <numbers>
#include <vector>

#include "pointint/errors.hpp"
#include "pointint/grid.hpp"

using namespace pointint;

namespace {

std::vector<double> sample(const RadialGrid& g, double (*f)(double)) {
  std::vector<double> out;
  for (double r : g.nodes()) out.push_back(f(r));
  return out;
}

}  // namespace

TEST_CASE("gauss rule") {
  const auto& rule = gauss_legendre(16);
  REQUIRE(rule.x.size() == 16);
  double sum = 0.0;
  for (double w : rule.w) sum += w;
  CHECK(sum == doctest::Approx(2.0).epsilon(1e-15));
  for (std::size_t i = 1; i < rule.x.size(); ++i) CHECK(rule.x[i] > rule.x[i - 1]);
  const auto& odd = gauss_legendre(5);
  CHECK(odd.x.size() == 5);
  CHECK(odd.x[2] == 0.0);
}

TEST_CASE("weight sum and polynomial exactness") {
  const auto g = build_grid({}, 1.0, 16);
  CHECK(g.panels().size() == 1);
  double sum = 0.0;
  for (double w : g.weights()) sum += w;
  CHECK(std::abs(sum - 1.0) < 1e-15);
  CHECK(std::abs(integrate(g, sample(g, [](double r) { return r * r; })) - 1.0 / 3.0) < 1e-14);
  CHECK(integrate(g, std::vector<double>(g.size(), 0.0)) == 0.0);
}

TEST_CASE("breakpoints and smooth integrands") {
  const std::vector<double> bp{1.0};
  const auto g = build_grid(bp, 2.0, 64);
  const double val = integrate(g, sample(g, [](double r) { return std::exp(-2.0 * r); }));
  CHECK(std::abs(val - (1.0 - std::exp(-4.0)) / 2.0) < 1e-10);
  bool edge = false;
  for (const auto& p : g.panels()) edge = edge || p.b == 1.0;
  CHECK(edge);
  for (std::size_t i = 0; i < g.size(); ++i) {
    CHECK(g.weights()[i] > 0.0);
    CHECK(g.nodes()[i] != 1.0);
    if (i > 0) CHECK(g.nodes()[i] > g.nodes()[i - 1]);
  }

  const auto gs = build_grid({}, std::numbers::pi, 16);
  CHECK(std::abs(integrate(gs, sample(gs, [](double r) { return std::sin(r); })) - 2.0) < 1e-10);
}

TEST_CASE("grid preconditions") {
  const std::vector<double> unsorted{0.5, 0.2};
  CHECK_THROWS_AS(build_grid(unsorted, 1.0, 16), PreconditionError);
  const std::vector<double> beyond{1.0};
  CHECK_THROWS_AS(build_grid(beyond, 1.0, 16), PreconditionError);
  CHECK_THROWS_AS(build_grid({}, 1.0, 3), PreconditionError);
  const auto g = build_grid({}, 1.0, 16);
  CHECK_THROWS_AS(integrate(g, std::vector<double>(3, 1.0)), PreconditionError);
}

TEST_CASE("refinement and extension") {
  auto f = [](double r) { return 1.0 / (1.0 + 25.0 * r * r); };
  const double exact = std::atan(5.0) / 5.0;
  double prev = 1.0;
  for (int pps : {8, 16, 32}) {
    const auto g = build_grid({}, 1.0, pps, 8);
    std::vector<double> s;
    for (double r : g.nodes()) s.push_back(f(r));
    const double err = std::abs(integrate(g, s) - exact);
    CHECK(err < prev);
    prev = err;
  }

  const auto inner = build_grid({}, 1.0, 32);
  const auto outer = extend_grid(inner, 5.0, 0.5);
  CHECK(outer.r_max() == doctest::Approx(5.0));
  for (std::size_t i = 0; i < inner.size(); ++i) CHECK(outer.nodes()[i] == inner.nodes()[i]);
  for (std::size_t p = inner.panels().size(); p < outer.panels().size(); ++p)
    CHECK(outer.panels()[p].b - outer.panels()[p].a <= 0.5 + 1e-14);
}
