#include "qmanifold/grid.hpp"

#include <cmath>
#include <string>

#include "qmanifold/errors.hpp"

namespace qmfd {

void GridSpec::validate(int degree, double margin) const {
  if (half_width <= 0.0 || points_per_axis < 2) {
    throw GridError("GridSpec: half_width must be positive and points_per_axis >= 2");
  }
  const double needed = std::sqrt(2.0 * degree + 1.0) + margin;
  if (half_width < needed) {
    throw GridError("GridSpec: half_width " + std::to_string(half_width) +
                    " below required " + std::to_string(needed) + " for degree " +
                    std::to_string(degree));
  }
}

GridSpec GridSpec::for_degree(int degree, double margin, int points_per_axis) {
  return {std::sqrt(2.0 * degree + 1.0) + margin, points_per_axis};
}

std::vector<double> GridSpec::axis_points() const {
  std::vector<double> pts(static_cast<std::size_t>(points_per_axis));
  const double step = 2.0 * half_width / (points_per_axis - 1);
  for (int j = 0; j < points_per_axis; ++j) {
    pts[static_cast<std::size_t>(j)] = -half_width + step * j;
  }
  return pts;
}

}  // namespace qmfd
