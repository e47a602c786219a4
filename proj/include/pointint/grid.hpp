#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace pointint {

/// One Gauss-Legendre panel [a, b] owning nodes [offset, offset + count).
struct Panel {
  double a = 0.0;
  double b = 0.0;
  std::size_t offset = 0;
  std::size_t count = 0;
};

/// Gauss-Legendre nodes and weights on [-1, 1], ascending.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_legendre(int order);

/// Composite Gauss-Legendre rule on [0, r_max].
///
/// All nodes are interior to their panel, so a piecewise-constant potential
/// whose jumps are panel boundaries has an unambiguous value at every node.
/// Vectors living on a grid are stored as weighted nodal values
/// u_i = sqrt(w_i) u(r_i): the Euclidean inner product of two such vectors
/// is the L2(dr) inner product of the functions.
class RadialGrid {
 public:
  RadialGrid() = default;
  RadialGrid(std::vector<Panel> panels, int order);

  std::span<const double> nodes() const noexcept { return nodes_; }
  std::span<const double> weights() const noexcept { return weights_; }
  std::span<const double> sqrt_weights() const noexcept { return sqrt_weights_; }
  std::span<const Panel> panels() const noexcept { return panels_; }
  std::size_t size() const noexcept { return nodes_.size(); }
  double r_max() const noexcept { return panels_.empty() ? 0.0 : panels_.back().b; }
  int order() const noexcept { return order_; }

 private:
  std::vector<Panel> panels_;
  std::vector<double> nodes_;
  std::vector<double> weights_;
  std::vector<double> sqrt_weights_;
  int order_ = 0;
};

struct GridOptions {
  int points_per_segment = 64;
  int order = 16;
  /// Outer truncation R_max = R_V + rmax_factor / Im k.
  double rmax_factor = 18.0;
};

/// Builds a grid on [0, r_max] whose panel boundaries include every
/// breakpoint. Each segment gets ceil(points_per_segment / order) equal
/// panels of `order` nodes.
RadialGrid build_grid(std::span<const double> breakpoints, double r_max, int points_per_segment,
                      int order = 16);

/// Appends equal panels of width <= max_panel_width on [inner.r_max(), r_max].
/// The first inner.size() nodes of the result coincide with `inner`.
RadialGrid extend_grid(const RadialGrid& inner, double r_max, double max_panel_width);

double integrate(const RadialGrid& grid, std::span<const double> samples);
std::complex<double> integrate(const RadialGrid& grid, std::span<const std::complex<double>> samples);

}  // namespace pointint
