#include "pointint/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <regex>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/format.h>

#include "pointint/errors.hpp"

namespace pointint {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::string fmt_double(double x) { return fmt::format("{:.17g}", x); }

double to_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  double x = 0.0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size() || !std::isfinite(x))
    throw ConfigError(std::string(key), fmt::format("expected a finite number, got '{}'", s));
  return x;
}

template <typename Int>
Int to_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  Int x = 0;
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || end != s.data() + s.size())
    throw ConfigError(std::string(key), fmt::format("expected an integer, got '{}'", s));
  return x;
}

}  // namespace

bool RunConfig::operator==(const RunConfig& o) const {
  const auto& f = family;
  const auto& g = o.family;
  return f.a_plus == g.a_plus && f.c_plus == g.c_plus && f.lambda == g.lambda && f.c_minus == g.c_minus &&
         f.core_exponent == g.core_exponent && f.well_exponent == g.well_exponent &&
         grid.points_per_segment == o.grid.points_per_segment && grid.order == o.grid.order &&
         grid.rmax_factor == o.grid.rmax_factor && ells == o.ells && k == o.k && target.kind == o.target.kind &&
         target.value == o.target.value && auto_rate == o.auto_rate && csv_path == o.csv_path && json_path == o.json_path && seed == o.seed &&
         jobs == o.jobs;
}

cplx parse_complex(std::string_view text) {
  static const std::regex full(R"(^([+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?)([+-](?:[0-9.]+(?:[eE][+-]?[0-9]+)?)?)i$)");
  static const std::regex imag(R"(^([+-]?(?:[0-9.]+(?:[eE][+-]?[0-9]+)?)?)i$)");
  std::string s;
  for (char c : text)
    if (c != ' ' && c != '\t') s.push_back(c);
  std::smatch m;
  const auto number = [&](std::string t) {
    if (t.empty() || t == "+") return 1.0;
    if (t == "-") return -1.0;
    if (t.front() == '+') t.erase(0, 1);
    return to_double("sweep.k", t);
  };
  if (std::regex_match(s, m, full)) return {number(m[1].str()), number(m[2].str())};
  if (std::regex_match(s, m, imag)) return {0.0, number(m[1].str())};
  static const std::regex real(R"(^[+-]?[0-9.]+(?:[eE][+-]?[0-9]+)?$)");
  if (std::regex_match(s, real)) return {to_double("sweep.k", s), 0.0};
  throw ConfigError("sweep.k", fmt::format("expected complex number like 0+2i, got '{}'", std::string(text)));
}

std::string format_complex(cplx z) {
  return fmt::format("{}{}{}i", fmt_double(z.real()), std::signbit(z.imag()) ? "-" : "+", fmt_double(std::abs(z.imag())));
}

std::vector<double> parse_list(std::string_view text) {
  std::vector<double> out;
  std::string s(text);
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double("sweep.ells", item));
  if (out.empty()) throw ConfigError("sweep.ells", "empty list");
  return out;
}

const std::vector<std::string>& config_keys() {
  static const std::vector<std::string> keys{
      "family.a_plus",    "family.c_plus",  "family.lambda",       "family.c_minus",
      "family.core_exponent", "family.well_exponent", "grid.points_per_segment", "grid.order",
      "grid.rmax_factor", "sweep.ells",     "sweep.k",             "target.kind",
      "target.value",     "output.csv",     "output.json",         "run.seed",
      "run.jobs",
  };
  return keys;
}

void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value) {
  const std::string k(key);
  if (k == "family.a_plus") cfg.family.a_plus = to_double(k, value);
  else if (k == "family.c_plus") cfg.family.c_plus = to_double(k, value);
  else if (k == "family.lambda") cfg.family.lambda = to_double(k, value);
  else if (k == "family.c_minus") cfg.family.c_minus = to_double(k, value);
  else if (k == "family.core_exponent") cfg.family.core_exponent = to_double(k, value);
  else if (k == "family.well_exponent") cfg.family.well_exponent = to_double(k, value);
  else if (k == "grid.points_per_segment") cfg.grid.points_per_segment = to_int<int>(k, value);
  else if (k == "grid.order") cfg.grid.order = to_int<int>(k, value);
  else if (k == "grid.rmax_factor") cfg.grid.rmax_factor = to_double(k, value);
  else if (k == "sweep.ells") cfg.ells = parse_list(value);
  else if (k == "sweep.k") cfg.k = parse_complex(value);
  else if (k == "target.kind") {
    const std::string v = trim(value);
    if (v == "a") cfg.target.kind = TuneTarget::Kind::a;
    else if (v == "e") cfg.target.kind = TuneTarget::Kind::e;
    else throw ConfigError(k, fmt::format("expected 'a' or 'e', got '{}'", v));
  } else if (k == "target.value") {
    cfg.auto_rate = trim(value) == "auto";
    cfg.target.value = cfg.auto_rate ? 0.0 : to_double(k, value);
  }
  else if (k == "output.csv") cfg.csv_path = trim(value);
  else if (k == "output.json") cfg.json_path = trim(value);
  else if (k == "run.seed") cfg.seed = to_int<std::uint64_t>(k, value);
  else if (k == "run.jobs") cfg.jobs = to_int<int>(k, value);
  else throw ConfigError(k, "unknown config key");
}

std::string get_config_value(const RunConfig& cfg, std::string_view key) {
  const std::string k(key);
  if (k == "family.a_plus") return fmt_double(cfg.family.a_plus);
  if (k == "family.c_plus") return fmt_double(cfg.family.c_plus);
  if (k == "family.lambda") return fmt_double(cfg.family.lambda);
  if (k == "family.c_minus") return fmt_double(cfg.family.c_minus);
  if (k == "family.core_exponent") return fmt_double(cfg.family.core_exponent);
  if (k == "family.well_exponent") return fmt_double(cfg.family.well_exponent);
  if (k == "grid.points_per_segment") return std::to_string(cfg.grid.points_per_segment);
  if (k == "grid.order") return std::to_string(cfg.grid.order);
  if (k == "grid.rmax_factor") return fmt_double(cfg.grid.rmax_factor);
  if (k == "sweep.ells") {
    std::string out;
    for (std::size_t i = 0; i < cfg.ells.size(); ++i) out += (i ? "," : "") + fmt_double(cfg.ells[i]);
    return out;
  }
  if (k == "sweep.k") return format_complex(cfg.k);
  if (k == "target.kind") return cfg.target.kind == TuneTarget::Kind::a ? "a" : "e";
  if (k == "target.value") return cfg.auto_rate ? "auto" : fmt_double(cfg.target.value);
  if (k == "output.csv") return cfg.csv_path;
  if (k == "output.json") return cfg.json_path;
  if (k == "run.seed") return std::to_string(cfg.seed);
  if (k == "run.jobs") return std::to_string(cfg.jobs);
  throw ConfigError(k, "unknown config key");
}

void validate_config(const RunConfig& cfg) {
  const auto& f = cfg.family;
  if (!(f.a_plus >= 0.0)) throw ConfigError("family.a_plus", "must be >= 0");
  if (!(f.c_plus > 0.0)) throw ConfigError("family.c_plus", "must be > 0");
  if (!(f.lambda >= 0.0)) throw ConfigError("family.lambda", "must be >= 0");
  if (!(f.c_minus > f.c_plus)) throw ConfigError("family.c_minus", "must exceed family.c_plus");
  if (cfg.grid.points_per_segment < 4) throw ConfigError("grid.points_per_segment", "must be >= 4");
  if (cfg.grid.order < 2 || cfg.grid.order > 64) throw ConfigError("grid.order", "must lie in [2, 64]");
  if (!(cfg.grid.rmax_factor > 0.0)) throw ConfigError("grid.rmax_factor", "must be > 0");
  if (cfg.ells.empty()) throw ConfigError("sweep.ells", "empty list");
  for (std::size_t i = 0; i < cfg.ells.size(); ++i) {
    if (!(cfg.ells[i] > 0.0)) throw ConfigError("sweep.ells", fmt::format("entry {} is not positive", cfg.ells[i]));
    if (i > 0 && !(cfg.ells[i] < cfg.ells[i - 1])) throw ConfigError("sweep.ells", "must be strictly decreasing");
  }
  if (!(cfg.k.imag() > 0.0)) throw ConfigError("sweep.k", "Im k must be > 0");
  if (cfg.auto_rate && cfg.target.kind != TuneTarget::Kind::e)
    throw ConfigError("target.value", "'auto' needs target.kind = e");
  if (cfg.csv_path.empty()) throw ConfigError("output.csv", "empty path");
  if (cfg.json_path.empty()) throw ConfigError("output.json", "empty path");
  if (cfg.jobs < 1) throw ConfigError("run.jobs", "must be >= 1");
}

TuneTarget resolve_target(const RunConfig& cfg) {
  if (!cfg.auto_rate) return cfg.target;
  TunerOptions opts;
  opts.grid = cfg.grid;
  return TuneTarget::fix_e(fix_a_induced_rate(cfg.family, cfg.ells.back(), 1.0, opts));
}

RunConfig parse_config(const std::string& text) {
  namespace pt = boost::property_tree;
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("", fmt::format("malformed config: {}", e.message()));
  }
  RunConfig cfg;
  for (const auto& [section, body] : tree) {
    if (!body.data().empty()) throw ConfigError(section, "key outside a section");
    for (const auto& [name, value] : body) set_config_value(cfg, section + "." + name, value.data());
  }
  validate_config(cfg);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("--config", fmt::format("cannot read '{}'", path));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string emit_config(const RunConfig& cfg) {
  std::string out;
  std::string section;
  for (const auto& key : config_keys()) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      out += fmt::format("{}[{}]\n", section.empty() ? "" : "\n", sec);
      section = sec;
    }
    out += fmt::format("{} = {}\n", key.substr(dot + 1), get_config_value(cfg, key));
  }
  return out;
}

}  // namespace pointint
