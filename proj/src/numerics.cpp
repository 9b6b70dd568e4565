#include "cvwerner/numerics.hpp"

#include <sstream>

namespace cvw {

PhaseSpaceGrid PhaseSpaceGrid::make(double half_width, int points_per_axis, int dims) {
  if (!(half_width > 0)) throw StructuralError("PhaseSpaceGrid: half_width must be positive");
  if (points_per_axis < 3 || points_per_axis % 2 == 0)
    throw StructuralError("PhaseSpaceGrid: points_per_axis must be odd and >= 3 so the grid contains the origin");
  if (dims != 2 && dims != 4) throw StructuralError("PhaseSpaceGrid: only 2D and 4D grids are supported");
  PhaseSpaceGrid g;
  g.half_width = half_width;
  g.points_per_axis = points_per_axis;
  g.dims = dims;
  g.values.assign(g.size(), 0.0);
  return g;
}

std::size_t PhaseSpaceGrid::size() const {
  std::size_t total = 1;
  for (int d = 0; d < dims; ++d) total *= static_cast<std::size_t>(points_per_axis);
  return total;
}

PhaseSpaceGrid sample_grid(const std::function<double(double, double)>& f, double half_width, int points_per_axis) {
  auto g = PhaseSpaceGrid::make(half_width, points_per_axis, 2);
  const int n = points_per_axis;
  for (int i = 0; i < n; ++i) {
    const double x = g.coordinate(i);
    for (int j = 0; j < n; ++j) g.values[static_cast<std::size_t>(i) * n + j] = f(x, g.coordinate(j));
  }
  return g;
}

PhaseSpaceGrid sample_grid(const std::function<double(double, double, double, double)>& f, double half_width,
                           int points_per_axis) {
  auto g = PhaseSpaceGrid::make(half_width, points_per_axis, 4);
  const std::size_t n = static_cast<std::size_t>(points_per_axis);
  std::vector<double> axis(n);
  for (std::size_t i = 0; i < n; ++i) axis[i] = g.coordinate(static_cast<int>(i));
  std::size_t k = 0;
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b)
      for (std::size_t c = 0; c < n; ++c)
        for (std::size_t d = 0; d < n; ++d) g.values[k++] = f(axis[a], axis[b], axis[c], axis[d]);
  return g;
}

namespace {

bool on_boundary(std::size_t flat, std::size_t n, int dims) {
  for (int d = 0; d < dims; ++d) {
    const std::size_t i = flat % n;
    if (i == 0 || i == n - 1) return true;
    flat /= n;
  }
  return false;
}

}  // namespace

double integrate_grid(const PhaseSpaceGrid& grid) {
  if (grid.values.size() != grid.size()) throw StructuralError("integrate_grid: value count does not match the grid");
  const std::size_t n = static_cast<std::size_t>(grid.points_per_axis);

  double peak = 0.0;
  double edge = 0.0;
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    const double v = std::abs(grid.values[k]);
    peak = std::max(peak, v);
    if (v > edge && on_boundary(k, n, grid.dims)) edge = v;
  }
  if (peak == 0.0) return 0.0;
  if (edge > tol::kGridBoundary * peak) {
    std::ostringstream msg;
    msg << "integrate_grid: integrand at the boundary is " << edge / peak
        << " of its peak; enlarge half_width (currently " << grid.half_width << ")";
    throw DomainTooSmall(msg.str());
  }

  // Trapezoid weights are products of per-axis weights (1/2 on the ends).
  const double h = grid.spacing();
  double total = 0.0;
  for (std::size_t k = 0; k < grid.values.size(); ++k) {
    double w = 1.0;
    std::size_t flat = k;
    for (int d = 0; d < grid.dims; ++d) {
      const std::size_t i = flat % n;
      if (i == 0 || i == n - 1) w *= 0.5;
      flat /= n;
    }
    total += w * grid.values[k];
  }
  return total * std::pow(h, grid.dims);
}

int odd_points_for_spacing(double half_width, double max_spacing, int min_points) {
  int n = static_cast<int>(std::ceil(2.0 * half_width / max_spacing)) + 1;
  n = std::max(n, min_points);
  if (n % 2 == 0) ++n;
  return n;
}

double bisect_transition(const std::function<bool(double)>& pred, double lo, double hi, double tolerance) {
  if (pred(lo) || !pred(hi)) throw NumericalError("bisect_transition: predicate does not switch on the bracket");
  while (hi - lo > tolerance) {
    const double mid = 0.5 * (lo + hi);
    (pred(mid) ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace cvw
