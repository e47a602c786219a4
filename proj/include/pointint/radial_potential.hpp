#pragma once

#include <span>
#include <vector>

namespace pointint {

/// One constant piece of a radial potential, V(r) = value on [r_lo, r_hi).
struct Segment {
  double r_lo = 0.0;
  double r_hi = 0.0;
  double value = 0.0;
};

/// Selects a piece of the sign decomposition V = V+ - V-.
/// `plus` and `minus` are the nonnegative parts, `full` is |V| and
/// `net` is V itself.
enum class Part { full, plus, minus, net };

/// Piecewise-constant, compactly supported, spherically symmetric potential.
///
/// Segments are contiguous, start at r = 0 and each carry a single sign, so
/// the sign decomposition is exact and the supports of V+ and V- are
/// disjoint. A potential whose values are all zero is allowed and acts as
/// V = 0 on the grid it is discretized on.
class RadialPotential {
 public:
  RadialPotential() = default;
  explicit RadialPotential(std::vector<Segment> segments);

  /// V = `value` on [0, radius).
  static RadialPotential square_well(double value, double radius);
  /// V = 0 on [0, radius); convenient for the free problem.
  static RadialPotential zero(double radius = 1.0);

  const std::vector<Segment>& segments() const noexcept { return segments_; }
  double support_radius() const noexcept;
  /// Interior breakpoints, i.e. every r_hi except the last.
  std::vector<double> breakpoints() const;

  double value_at(double r) const noexcept;
  /// J(r) = sgn V(r), with J = +1 where V = 0.
  double sign_at(double r) const noexcept { return value_at(r) < 0.0 ? -1.0 : 1.0; }
  /// Pointwise value of the selected part (see Part).
  double part_at(double r, Part part) const noexcept;

  double max_abs() const noexcept;
  bool is_zero() const noexcept;
  bool has_negative_part() const noexcept;

  /// Returns the potential whose segment values are the selected part
  /// (negative part returned as -V- so that it is again a potential).
  RadialPotential restricted(Part part) const;

 private:
  std::vector<Segment> segments_;
};

/// 4 pi sum_segments value * int r^{2+q} dr over the selected part.
/// For Part::net this is the signed integral; the others are nonnegative.
double moment(const RadialPotential& v, int q, Part part);

/// Core+well two-scale family: core a_plus / ell^core_exponent on
/// [0, c_plus ell) and well -lambda / ell^well_exponent on
/// [c_plus ell, c_minus ell).
struct PotentialFamily {
  double a_plus = 1.0;
  double c_plus = 1.0;
  double lambda = 0.0;
  double c_minus = 2.0;
  double core_exponent = 3.0;
  double well_exponent = 2.0;

  void validate() const;
  PotentialFamily with_lambda(double new_lambda) const;
  RadialPotential instantiate(double ell) const;
};

}  // namespace pointint
