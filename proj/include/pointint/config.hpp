#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "pointint/analytics.hpp"
#include "pointint/grid.hpp"
#include "pointint/operators.hpp"
#include "pointint/radial_potential.hpp"
#include "pointint/tuner.hpp"

namespace pointint {

/// Everything a run needs. Serialized as a sectioned INI file:
///
///   [family]  a_plus c_plus lambda c_minus core_exponent well_exponent
///   [grid]    points_per_segment order rmax_factor
///   [sweep]   ells (comma list) k (re+imi)
///   [target]  kind (a | e) value (number, or "auto" for e: the rate
///             e_ell / ell of the fix_a(1) sweep at the smallest ell)
///   [output]  csv json
///   [run]     seed jobs
struct RunConfig {
  PotentialFamily family;
  GridOptions grid;
  std::vector<double> ells{0.2, 0.1, 0.05, 0.025, 0.0125, 0.00625, 0.003125};
  cplx k{0.0, 2.0};
  TuneTarget target = TuneTarget::fix_a(1.0);
  bool auto_rate = false;
  std::string csv_path = "sweep.csv";
  std::string json_path = "summary.json";
  std::uint64_t seed = kDefaultSeed;
  int jobs = 1;

  bool operator==(const RunConfig&) const;
};

/// Target with an "auto" rate resolved.
TuneTarget resolve_target(const RunConfig& cfg);

/// Keys accepted by set_config_value, in emission order.
const std::vector<std::string>& config_keys();

/// Assigns one "section.name" key from its string form. Throws ConfigError
/// naming the key on unknown keys or malformed values.
void set_config_value(RunConfig& cfg, std::string_view key, std::string_view value);
std::string get_config_value(const RunConfig& cfg, std::string_view key);

/// Throws ConfigError naming the first key that violates a precondition.
void validate_config(const RunConfig& cfg);

/// Parses INI text over the defaults, then validates.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::string& path);
/// INI text; parse_config(emit_config(c)) == c.
std::string emit_config(const RunConfig& cfg);

/// "re+imi" syntax: "0+2i", "-1.5-0.25i", "2i", "3".
cplx parse_complex(std::string_view text);
std::string format_complex(cplx z);
std::vector<double> parse_list(std::string_view text);

}  // namespace pointint
