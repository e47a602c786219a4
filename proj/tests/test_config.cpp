#include <doctest.h>

#include "pointint/config.hpp"
#include "pointint/errors.hpp"

using namespace pointint;

namespace {

std::string key_of(const std::string& text) {
  try {
    parse_config(text);
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "<none>";
}

}  // namespace

TEST_CASE("complex syntax") {
  CHECK(parse_complex("0+2i") == cplx(0, 2));
  CHECK(parse_complex("2i") == cplx(0, 2));
  CHECK(parse_complex("-i") == cplx(0, -1));
  CHECK(parse_complex("3") == cplx(3, 0));
  CHECK(parse_complex("-1.5-0.25i") == cplx(-1.5, -0.25));
  CHECK(parse_complex("1e-3+2e1i") == cplx(1e-3, 20));
  CHECK(parse_complex(" 1 + i ") == cplx(1, 1));
  CHECK_THROWS_AS(parse_complex("2j"), ConfigError);
  CHECK_THROWS_AS(parse_complex(""), ConfigError);
  for (cplx z : {cplx(0, 2), cplx(-0.1, 1.0 / 3.0), cplx(1e-300, -7)}) CHECK(parse_complex(format_complex(z)) == z);
}

TEST_CASE("config round trip") {
  const RunConfig def;
  CHECK(parse_config(emit_config(def)) == def);

  RunConfig c;
  c.family.lambda = 0.1 + 0.2;
  c.family.a_plus = 1.0 / 3.0;
  c.grid.points_per_segment = 96;
  c.grid.rmax_factor = 1e-3;
  c.ells = {0.3, 1.0 / 7.0, 1e-5};
  c.k = {-0.5, 1.25};
  c.target = TuneTarget::fix_e(-1.0 / 3.0);
  c.csv_path = "out dir/rows.csv";
  c.seed = 18446744073709551615ull;
  c.jobs = 3;
  const auto back = parse_config(emit_config(c));
  CHECK(back == c);
  CHECK(emit_config(back) == emit_config(c));
}

TEST_CASE("partial files keep defaults") {
  const auto c = parse_config("[family]\nlambda = 1.5\n[sweep]\nk = 0+3i\n");
  CHECK(c.family.lambda == 1.5);
  CHECK(c.k == cplx(0, 3));
  CHECK(c.ells == RunConfig{}.ells);
}

TEST_CASE("errors name the key") {
  CHECK(key_of("[family]\nc_minus = 0.5\n") == "family.c_minus");
  CHECK(key_of("[family]\nlambda = -1\n") == "family.lambda");
  CHECK(key_of("[family]\nlambda = deep\n") == "family.lambda");
  CHECK(key_of("[family]\ncolour = red\n") == "family.colour");
  CHECK(key_of("[sweep]\nells = 0.1,0.2\n") == "sweep.ells");
  CHECK(key_of("[sweep]\nells = 0.1,,0.05\n") == "sweep.ells");
  CHECK(key_of("[sweep]\nk = 2-1i\n") == "sweep.k");
  CHECK(key_of("[sweep]\nk = 2 + 1j\n") == "sweep.k");
  CHECK(key_of("[grid]\norder = 1\n") == "grid.order");
  CHECK(key_of("[grid]\npoints_per_segment = 6.5\n") == "grid.points_per_segment");
  CHECK(key_of("[target]\nkind = b\n") == "target.kind");
  CHECK(key_of("[run]\njobs = 0\n") == "run.jobs");
  CHECK(key_of("[run]\nseed = -4\n") == "run.seed");
  CHECK(key_of("[family]\nlambda = 1\n") == "<none>");
}

TEST_CASE("overrides go through the same validation") {
  RunConfig c;
  set_config_value(c, "family.lambda", "2.5");
  CHECK(get_config_value(c, "family.lambda") == "2.5");
  CHECK_THROWS_AS(set_config_value(c, "grid.nodes", "4"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/pointint.ini"), ConfigError);
}

TEST_CASE("auto rate for e-targets") {
  const auto c = parse_config("[target]\nkind = e\nvalue = auto\n");
  CHECK(c.auto_rate);
  CHECK(parse_config(emit_config(c)) == c);
  CHECK(key_of("[target]\nkind = a\nvalue = auto\n") == "target.value");
  RunConfig small = c;
  small.ells = {0.1};
  const auto t = resolve_target(small);
  CHECK(t.kind == TuneTarget::Kind::e);
  // the induced rate reproduces the fix_a(1) eigenvalue
  const double lam = tune_depth(small.family, 0.1, TuneTarget::fix_a(1.0));
  const auto v = small.family.with_lambda(lam).instantiate(0.1);
  CHECK(t.value * 0.1 == doctest::Approx(lowest_eigenpairs(v, make_inner_grid(v)).e_ell).epsilon(1e-10));
}
