#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace qmfd {

struct SweepRow {
  int degree = 0;
  double residual = 0.0;
  double wall_ms = 0.0;
};

struct SweepTable {
  std::string check_id;
  std::vector<SweepRow> rows;
  /// Columns: K, residual, wall_time (milliseconds).
  std::string to_csv() const;
};

std::vector<std::string> sweepable_checks();

/// Measures one truncation-sensitive residual across degrees. Accuracy
/// gates (section mass defect, plan certificates) are relaxed for the
/// measurement so that small degrees can be quantified instead of
/// rejected; the reported residual stays an honest error measure.
SweepTable convergence_sweep(const std::string& check_id, std::span<const int> degrees,
                             std::uint64_t seed);

}  // namespace qmfd
