#pragma once

#include <string>
#include <vector>

namespace qmfd {

/// Tolerance bundle shared across the library. Every entry can be
/// overridden per run; the CLI maps --tol.<name> onto these fields.
struct Tolerances {
  /// Minimum L2 norm below which a function counts as zero.
  double nonzero = 1e-12;
  /// Relative mass defect allowed when sampling the Gaussian section.
  double section = 1e-9;
  /// Accuracy certificate bound for translation plans.
  double translation = 1e-9;
  /// |Qbar| band accepted for membership in the zero-expectation fiber.
  double fiber = 1e-9;
  /// Chart round-trip tolerance in the function-space norm.
  double chart = 1e-8;
  /// Agreement tolerance for manifold points.
  double point = 1e-7;
  /// Default width of the indistinguishability predicate.
  double indist = 1e-9;
  /// Extra half-width beyond the classical turning point required of
  /// evaluation grids.
  double grid_margin = 2.0;

  /// Named access used by the CLI; throws ConfigError for unknown names.
  void set(const std::string& name, double value);
  double get(const std::string& name) const;
  static const std::vector<std::string>& names();
};

}  // namespace qmfd
