#include "pointint/radial_potential.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <fmt/format.h>

#include "pointint/errors.hpp"

namespace pointint {

RadialPotential::RadialPotential(std::vector<Segment> segments) : segments_(std::move(segments)) {
  if (segments_.empty()) throw PreconditionError("potential needs at least one segment");
  if (segments_.front().r_lo != 0.0) throw PreconditionError("first segment must start at r = 0");
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& s = segments_[i];
    if (!std::isfinite(s.r_lo) || !std::isfinite(s.r_hi) || !std::isfinite(s.value))
      throw PreconditionError(fmt::format("segment {} has non-finite entries", i));
    if (!(s.r_lo < s.r_hi))
      throw PreconditionError(fmt::format("segment {} has r_lo >= r_hi", i));
    if (i > 0 && s.r_lo != segments_[i - 1].r_hi)
      throw PreconditionError(fmt::format("segment {} is not contiguous with its predecessor", i));
  }
}

RadialPotential RadialPotential::square_well(double value, double radius) {
  return RadialPotential({{0.0, radius, value}});
}

RadialPotential RadialPotential::zero(double radius) { return square_well(0.0, radius); }

double RadialPotential::support_radius() const noexcept {
  return segments_.empty() ? 0.0 : segments_.back().r_hi;
}

std::vector<double> RadialPotential::breakpoints() const {
  std::vector<double> out;
  for (std::size_t i = 0; i + 1 < segments_.size(); ++i) out.push_back(segments_[i].r_hi);
  return out;
}

double RadialPotential::value_at(double r) const noexcept {
  for (const auto& s : segments_)
    if (r >= s.r_lo && r < s.r_hi) return s.value;
  return 0.0;
}

double RadialPotential::part_at(double r, Part part) const noexcept {
  const double v = value_at(r);
  switch (part) {
    case Part::full: return std::abs(v);
    case Part::plus: return v > 0.0 ? v : 0.0;
    case Part::minus: return v < 0.0 ? -v : 0.0;
    case Part::net: return v;
  }
  return v;
}

double RadialPotential::max_abs() const noexcept {
  double m = 0.0;
  for (const auto& s : segments_) m = std::max(m, std::abs(s.value));
  return m;
}

bool RadialPotential::is_zero() const noexcept { return max_abs() == 0.0; }

bool RadialPotential::has_negative_part() const noexcept {
  return std::any_of(segments_.begin(), segments_.end(), [](const Segment& s) { return s.value < 0.0; });
}

RadialPotential RadialPotential::restricted(Part part) const {
  std::vector<Segment> out = segments_;
  for (auto& s : out) {
    switch (part) {
      case Part::full: s.value = std::abs(s.value); break;
      case Part::plus: s.value = std::max(s.value, 0.0); break;
      case Part::minus: s.value = std::min(s.value, 0.0); break;
      case Part::net: break;
    }
  }
  return RadialPotential(std::move(out));
}

double moment(const RadialPotential& v, int q, Part part) {
  if (q < 0 || q > 2) throw PreconditionError(fmt::format("moment order q = {} not in {{0, 1, 2}}", q));
  const int p = 3 + q;
  double sum = 0.0;
  for (const auto& s : v.segments()) {
    double w = 0.0;
    switch (part) {
      case Part::full: w = std::abs(s.value); break;
      case Part::plus: w = std::max(s.value, 0.0); break;
      case Part::minus: w = std::max(-s.value, 0.0); break;
      case Part::net: w = s.value; break;
    }
    sum += w * (std::pow(s.r_hi, p) - std::pow(s.r_lo, p)) / p;
  }
  return 4.0 * std::numbers::pi * sum;
}

void PotentialFamily::validate() const {
  if (!(a_plus >= 0.0)) throw PreconditionError("family.a_plus must be >= 0");
  if (!(lambda >= 0.0)) throw PreconditionError("family.lambda must be >= 0");
  if (!(c_plus > 0.0)) throw PreconditionError("family.c_plus must be > 0");
  if (!(c_minus > c_plus)) throw PreconditionError("family.c_minus must exceed family.c_plus");
}

PotentialFamily PotentialFamily::with_lambda(double new_lambda) const {
  PotentialFamily f = *this;
  f.lambda = new_lambda;
  return f;
}

RadialPotential PotentialFamily::instantiate(double ell) const {
  if (!(ell > 0.0)) throw PreconditionError(fmt::format("ell must be positive, got {}", ell));
  validate();
  std::vector<Segment> segs;
  segs.push_back({0.0, c_plus * ell, a_plus / std::pow(ell, core_exponent)});
  if (lambda > 0.0) segs.push_back({c_plus * ell, c_minus * ell, -lambda / std::pow(ell, well_exponent)});
  return RadialPotential(std::move(segs));
}

}  // namespace pointint
