#pragma once

#include <vector>

namespace qmfd {

/// Uniform symmetric evaluation grid used for sup-seminorm estimates.
/// The half width must dominate the classical turning point
/// sqrt(2K + 1) of the highest mode plus a safety margin, otherwise the
/// grid maximum is not a trustworthy stand-in for the supremum.
struct GridSpec {
  double half_width = 0.0;
  int points_per_axis = 0;

  /// Throws GridError when the grid cannot cover functions of `degree`.
  void validate(int degree, double margin) const;

  /// A grid adequate for the given degree.
  static GridSpec for_degree(int degree, double margin = 2.0, int points_per_axis = 2001);

  /// Nested refinement: keeps every existing point and adds midpoints,
  /// so grid maxima are monotone under refinement.
  GridSpec refined() const { return {half_width, 2 * points_per_axis - 1}; }

  std::vector<double> axis_points() const;
};

}  // namespace qmfd
