#include "pointint/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "pointint/assumptions.hpp"
#include "pointint/config.hpp"
#include "pointint/errors.hpp"
#include "pointint/report.hpp"
#include "pointint/scattering.hpp"

namespace pointint {

namespace {

struct Flags {
  std::string config;
  std::vector<std::string> set;
  std::string out;
  std::string ells;
  std::string k;
  std::optional<double> target_a;
  std::string target_e;
  std::optional<std::uint64_t> seed;
  std::optional<int> jobs;
};

RunConfig resolve(const Flags& f) {
  RunConfig cfg = f.config.empty() ? RunConfig{} : load_config(f.config);
  for (const auto& kv : f.set) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ConfigError(kv, "--set expects key=value");
    set_config_value(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!f.ells.empty()) set_config_value(cfg, "sweep.ells", f.ells);
  if (!f.k.empty()) set_config_value(cfg, "sweep.k", f.k);
  if (f.target_a && !f.target_e.empty()) throw ConfigError("target.kind", "--target-a and --target-e are exclusive");
  if (f.target_a) {
    cfg.target = TuneTarget::fix_a(*f.target_a);
    cfg.auto_rate = false;
  }
  if (!f.target_e.empty()) {
    set_config_value(cfg, "target.kind", "e");
    set_config_value(cfg, "target.value", f.target_e);
  }
  if (f.seed) cfg.seed = *f.seed;
  if (f.jobs) cfg.jobs = *f.jobs;
  if (!f.out.empty()) {
    cfg.csv_path = f.out;
    cfg.json_path = std::filesystem::path(f.out).replace_extension(".json").string();
  }
  validate_config(cfg);
  cfg.target = resolve_target(cfg);
  cfg.auto_rate = false;
  return cfg;
}

TunerOptions tuner_options(const RunConfig& cfg) {
  TunerOptions t;
  t.grid = cfg.grid;
  return t;
}

std::string target_name(const TuneTarget& t) {
  return t.kind == TuneTarget::Kind::a ? fmt::format("fix_a({})", t.value) : fmt::format("fix_e({})", t.value);
}

int cmd_scatter(const RunConfig& cfg, std::ostream& out) {
  for (double ell : cfg.ells) {
    const auto v = cfg.family.instantiate(ell);
    std::string ode, bs;
    try {
      const auto r = scattering_length_ode(v);
      ode = fmt::format("{:.6f} [{:.17g}]", r.a, r.a);
    } catch (const ResonanceError&) {
      ode = "inf (resonance)";
    }
    try {
      const auto r = scattering_length_bs(v, cfg.grid);
      bs = fmt::format("{:.6f} [{:.17g}] refinement {:.3g}", r.a, r.a, r.refinement_error);
    } catch (const ResonanceError&) {
      bs = "inf (resonance)";
    }
    fmt::print(out, "ell = {:.17g}\n  a_ode = {}\n  a_bs  = {}\n", ell, ode, bs);
  }
  return 0;
}

int cmd_tune(const RunConfig& cfg, std::ostream& out) {
  const auto sweep = build_sweep(cfg.family, cfg.ells, cfg.target, tuner_options(cfg), cfg.jobs);
  fmt::print(out, "target {}\n{:>24} {:>24} {:>24} {:>24}\n", target_name(cfg.target), "ell", "lambda_star", "e_ell",
             "a");
  for (const auto& e : sweep.entries)
    fmt::print(out, "{:>24.17g} {:>24.17g} {:>24.17g} {:>24.17g}\n", e.ell, e.lambda_star, e.spectrum.e_ell, e.a);
  return 0;
}

int cmd_sweep(const RunConfig& cfg, std::ostream& out) {
  for (const auto& [key, path] : {std::pair{"output.csv", cfg.csv_path}, std::pair{"output.json", cfg.json_path}}) {
    const auto dir = std::filesystem::path(path).parent_path();
    if (!dir.empty() && !std::filesystem::is_directory(dir))
      throw ConfigError(key, fmt::format("directory '{}' does not exist", dir.string()));
  }
  const auto sweep = build_sweep(cfg.family, cfg.ells, cfg.target, tuner_options(cfg), cfg.jobs);
  SweepOptions so;
  so.k = cfg.k;
  so.grid = cfg.grid;
  so.jobs = cfg.jobs;
  so.a_star = cfg.target.kind == TuneTarget::Kind::a ? cfg.target.value : sweep.entries.back().a;
  const auto records = run_sweep(sweep, so);
  const auto fits = fit_records(records);
  emit_reports(records, fits, cfg.csv_path, cfg.json_path);
  fmt::print(out, "wrote {} rows to {} and summary to {}\n", records.size(), cfg.csv_path, cfg.json_path);
  for (const auto& [name, fit] : fits.fits)
    fmt::print(out, "  {:<16} exponent {:>8.4f}  r^2 {:.4f}\n", name, fit.exponent, fit.r_squared);
  for (const auto& [name, why] : fits.skipped) fmt::print(out, "  {:<16} skipped: {}\n", name, why);
  return 0;
}

int cmd_check(const RunConfig& cfg, std::ostream& out) {
  const auto sweep = build_sweep(cfg.family, cfg.ells, cfg.target, tuner_options(cfg), cfg.jobs);
  const auto rep = check_assumptions(sweep);
  fmt::print(out, "{:>12} {:>12} {:>12} {:>10} {:>10} {:>12} {:>12} {:>12}\n", "ell", "e_ell", "e_minus", "gap",
             "||V||_1", "||V-||_1", "x2", "x2_minus");
  for (const auto& r : rep.rows)
    fmt::print(out, "{:>12.5g} {:>12.5g} {:>12.5g} {:>10.4f} {:>10.4f} {:>12.5g} {:>12.5g} {:>12.5g}\n", r.ell, r.e_ell,
               r.e_ell_minus, r.gap, r.l1, r.l1_minus, r.x2, r.x2_minus);
  for (const auto& i : rep.items)
    fmt::print(out, "{} {:<4} {:<52} measured {:<12.6g} target {:<10.4g} {}\n", i.passed ? "PASS" : "FAIL", i.id,
               i.description, i.measured, i.target, i.note);
  fmt::print(out, "{}\n", rep.passed() ? "all assumptions hold" : "assumption check failed");
  return rep.passed() ? 0 : 1;
}

int cmd_spectrum(const RunConfig& cfg, std::ostream& out) {
  for (double ell : cfg.ells) {
    const auto v = cfg.family.instantiate(ell);
    const auto s = lowest_eigenpairs(v, make_inner_grid(v, cfg.grid));
    fmt::print(out, "ell = {:.17g}\n  e_ell = {:.17g}\n  e_ell_minus = {:.17g}\n  gap = {:.17g}\n  lowest:", ell,
               s.e_ell, s.e_ell_minus, s.gap);
    for (std::size_t i = 0; i < std::min<std::size_t>(5, s.eigenvalues.size()); ++i)
      fmt::print(out, " {:.10g}", s.eigenvalues[i]);
    fmt::print(out, "\n");
  }
  return 0;
}

int cmd_verify(const RunConfig& cfg, std::ostream& out) {
  const auto rep = run_verify(cfg.seed);
  fmt::print(out, "seed {}\n", rep.seed);
  for (const auto& l : rep.lines)
    fmt::print(out, "{} {:<48} samples {:>6} violations {:>4} worst {:.3e} tolerance {:.1e}\n",
               l.passed ? "PASS" : "FAIL", l.name, l.samples, l.violations, l.worst, l.tolerance);
  return rep.passed() ? 0 : 1;
}

void add_common(CLI::App* sub, Flags& f) {
  sub->add_option("--config", f.config, "INI config file");
  sub->add_option("--set", f.set, "override a config key: section.name=value")->take_all();
  sub->add_option("--out", f.out, "output path (CSV for sweep, report copy otherwise)");
  sub->add_option("--ells", f.ells, "comma-separated, strictly decreasing lengths");
  sub->add_option("--k", f.k, "spectral parameter, e.g. 0+2i");
  sub->add_option("--target-a", f.target_a, "tune to scattering length a*");
  sub->add_option("--target-e", f.target_e, "tune to e_ell = c * ell (c or auto)");
  sub->add_option("--seed", f.seed, "seed of randomized batches");
  sub->add_option("--jobs", f.jobs, "worker threads");
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Birman-Schwinger analysis of two-scale radial potentials", "pointint"};
  app.require_subcommand(1, 1);
  Flags flags;
  using Handler = int (*)(const RunConfig&, std::ostream&);
  const std::vector<std::tuple<std::string, std::string, Handler>> commands{
      {"scatter", "scattering length by both methods for each ell", cmd_scatter},
      {"tune", "tuned well depth lambda* per ell", cmd_tune},
      {"sweep", "convergence table (CSV) and rate fits (JSON)", cmd_sweep},
      {"check", "assumption audit of the tuned sweep", cmd_check},
      {"spectrum", "lowest eigenvalues of 1 + JX per ell", cmd_spectrum},
      {"verify", "analytic self-test battery", cmd_verify},
  };
  for (const auto& [name, help, fn] : commands) add_common(app.add_subcommand(name, help), flags);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }
  const auto* sub = app.get_subcommands().front();
  Handler handler = nullptr;
  for (const auto& [name, help, fn] : commands)
    if (name == sub->get_name()) handler = fn;

  try {
    const RunConfig cfg = resolve(flags);
    std::ostringstream text;
    const int code = handler(cfg, text);
    out << text.str();
    if (!flags.out.empty() && sub->get_name() != "sweep") {
      std::ofstream file(flags.out);
      if (!file) throw ConfigError("--out", fmt::format("cannot write '{}'", flags.out));
      file << text.str();
    }
    return code;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
}

}  // namespace pointint
