#include "pointint/grid.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

#include <boost/math/special_functions/legendre.hpp>
#include <fmt/format.h>

#include "pointint/errors.hpp"

namespace pointint {

namespace {

GaussRule make_rule(int order) {
  // legendre_p_zeros returns the nonnegative zeros in ascending order.
  const auto zeros = boost::math::legendre_p_zeros<double>(order);
  std::vector<double> pos;
  for (double z : zeros) pos.push_back(z);
  GaussRule rule;
  for (auto it = pos.rbegin(); it != pos.rend(); ++it)
    if (*it != 0.0) rule.x.push_back(-*it);
  for (double z : pos) rule.x.push_back(z);
  for (double x : rule.x) {
    const double dp = boost::math::legendre_p_prime(order, x);
    rule.w.push_back(2.0 / ((1.0 - x * x) * dp * dp));
  }
  return rule;
}

}  // namespace

const GaussRule& gauss_legendre(int order) {
  if (order < 1) throw PreconditionError("Gauss order must be positive");
  static std::mutex mutex;
  static std::map<int, GaussRule> cache;
  std::lock_guard lock(mutex);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, make_rule(order)).first;
  return it->second;
}

RadialGrid::RadialGrid(std::vector<Panel> panels, int order) : panels_(std::move(panels)), order_(order) {
  const auto& rule = gauss_legendre(order);
  for (auto& p : panels_) {
    if (!(p.a < p.b)) throw PreconditionError("panel with a >= b");
    p.offset = nodes_.size();
    p.count = rule.x.size();
    const double half = 0.5 * (p.b - p.a);
    const double mid = 0.5 * (p.b + p.a);
    for (std::size_t i = 0; i < rule.x.size(); ++i) {
      nodes_.push_back(mid + half * rule.x[i]);
      weights_.push_back(half * rule.w[i]);
      sqrt_weights_.push_back(std::sqrt(half * rule.w[i]));
    }
  }
}

RadialGrid build_grid(std::span<const double> breakpoints, double r_max, int points_per_segment, int order) {
  if (points_per_segment < 4) throw PreconditionError("grid.points_per_segment must be >= 4");
  if (!(r_max > 0.0)) throw PreconditionError("grid r_max must be positive");
  std::vector<double> edges{0.0};
  for (double b : breakpoints) {
    if (!(b > edges.back())) throw PreconditionError("breakpoints must be sorted, distinct and > 0");
    if (!(b < r_max)) throw PreconditionError(fmt::format("breakpoint {} is not below r_max {}", b, r_max));
    edges.push_back(b);
  }
  edges.push_back(r_max);
  const int per_segment = std::max(1, (points_per_segment + order - 1) / order);
  std::vector<Panel> panels;
  for (std::size_t s = 0; s + 1 < edges.size(); ++s) {
    const double h = (edges[s + 1] - edges[s]) / per_segment;
    for (int p = 0; p < per_segment; ++p) {
      const double a = edges[s] + p * h;
      const double b = p + 1 == per_segment ? edges[s + 1] : edges[s] + (p + 1) * h;
      panels.push_back({a, b, 0, 0});
    }
  }
  return RadialGrid(std::move(panels), order);
}

RadialGrid extend_grid(const RadialGrid& inner, double r_max, double max_panel_width) {
  if (!(r_max > inner.r_max())) throw PreconditionError("extended r_max must exceed the inner grid radius");
  if (!(max_panel_width > 0.0)) throw PreconditionError("panel width must be positive");
  std::vector<Panel> panels(inner.panels().begin(), inner.panels().end());
  const double start = inner.r_max();
  const int n = std::max(1, static_cast<int>(std::ceil((r_max - start) / max_panel_width)));
  const double h = (r_max - start) / n;
  for (int p = 0; p < n; ++p)
    panels.push_back({start + p * h, p + 1 == n ? r_max : start + (p + 1) * h, 0, 0});
  return RadialGrid(std::move(panels), inner.order());
}

double integrate(const RadialGrid& grid, std::span<const double> samples) {
  if (samples.size() != grid.size())
    throw PreconditionError(fmt::format("sample count {} does not match grid size {}", samples.size(), grid.size()));
  double sum = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < samples.size(); ++i) sum += w[i] * samples[i];
  return sum;
}

std::complex<double> integrate(const RadialGrid& grid, std::span<const std::complex<double>> samples) {
  if (samples.size() != grid.size())
    throw PreconditionError(fmt::format("sample count {} does not match grid size {}", samples.size(), grid.size()));
  std::complex<double> sum = 0.0;
  const auto w = grid.weights();
  for (std::size_t i = 0; i < samples.size(); ++i) sum += w[i] * samples[i];
  return sum;
}

}  // namespace pointint
