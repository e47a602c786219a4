#include <doctest.h>

#include <cmath>
#include <numbers>

#include "pointint/errors.hpp"
#include "pointint/scattering.hpp"
#include "pointint/tuner.hpp"

using namespace pointint;
using std::numbers::pi;

TEST_CASE("tuning a bare well onto its resonance") {
  // core of negligible width and zero height, well on [0, 1)
  PotentialFamily f{0.0, 1e-12, 0.0, 1.0};
  const double lam = tune_depth(f, 1.0, TuneTarget::fix_e(0.0));
  CHECK(std::abs(lam - pi * pi / 4) < 1e-9);
  CHECK_THROWS_AS(scattering_length_ode(f.with_lambda(pi * pi / 4).instantiate(1.0)), ResonanceError);
}

TEST_CASE("fix_a(0)") {
  PotentialFamily f;
  const double lam = tune_depth(f, 0.2, TuneTarget::fix_a(0.0));
  const auto v = f.with_lambda(lam).instantiate(0.2);
  CHECK(std::abs(scattering_length_ode(v).a) < 1e-8);
  CHECK(std::abs(scattering_length_bs(v).a) < 1e-8);
}

TEST_CASE("fix_a(1) sweep") {
  PotentialFamily f;
  const std::vector<double> ells{0.2, 0.1, 0.05};
  const auto sweep = build_sweep(f, ells, TuneTarget::fix_a(1.0));
  REQUIRE(sweep.entries.size() == 3);
  for (const auto& e : sweep.entries) {
    CHECK(std::abs(e.a - 1.0) <= 1e-8);
    CHECK(std::abs(scattering_length_bs(e.potential).a - 1.0) <= 1e-6);
  }
  // e_ell decreases towards zero, lambda* moves continuously
  CHECK(std::abs(sweep.entries[2].spectrum.e_ell) < std::abs(sweep.entries[0].spectrum.e_ell));
  for (std::size_t i = 1; i < 3; ++i)
    CHECK(std::abs(sweep.entries[i].lambda_star - sweep.entries[i - 1].lambda_star) < 0.3);

  // the tuned depth sits just beyond the first resonance: a single negative
  // eigenvalue of 1 + JX
  for (const auto& e : sweep.entries) {
    CHECK(e.spectrum.e_ell < 0.0);
    CHECK(e.spectrum.eigenvalues[1] > 0.5);
  }

  TunerOptions cold;
  cold.warm_start = false;
  const auto again = build_sweep(f, ells, TuneTarget::fix_a(1.0), cold, 3);
  for (std::size_t i = 0; i < 3; ++i)
    CHECK(std::abs(again.entries[i].lambda_star - sweep.entries[i].lambda_star) < 1e-8);
}

TEST_CASE("fix_e sweep") {
  PotentialFamily f;
  const std::vector<double> ells{0.2, 0.1, 0.05};
  const double c = -0.5;
  const auto sweep = build_sweep(f, ells, TuneTarget::fix_e(c));
  for (const auto& e : sweep.entries) CHECK(std::abs(e.spectrum.e_ell / e.ell - c) < 1e-8);
}

TEST_CASE("tuner errors") {
  PotentialFamily f;
  CHECK_THROWS_AS(build_sweep(f, {}, TuneTarget::fix_a(1.0)), PreconditionError);
  CHECK_THROWS_AS(build_sweep(f, {0.1, 0.2}, TuneTarget::fix_a(1.0)), PreconditionError);
  TunerOptions small;
  small.lambda_max = 0.5;
  CHECK_THROWS_AS(tune_depth(f, 0.2, TuneTarget::fix_a(1.0), small), UnreachableError);
  CHECK_THROWS_AS(tune_depth(f, 0.2, TuneTarget::fix_e(100.0)), UnreachableError);
}
