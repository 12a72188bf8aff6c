#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "qmanifold/config.hpp"
#include "qmanifold/report.hpp"

namespace qmfd {

/// One verification run: a named suite at a fixed truncation degree with a
/// pinned seed. Every residual in the resulting report is reproducible
/// from this record.
struct SuiteConfig {
  std::string suite = "all";
  /// Used when `suite` is the generic "atlas": selects euclidean or circle.
  std::string manifold;
  /// 0: honor QM_DEFAULT_DEGREE, else the per-suite default.
  int degree = 0;
  std::uint64_t seed = 7;
  /// 0: per-check default sample counts.
  int samples = 0;
  Tolerances tol;
  /// When nonempty, the JSON report is written here.
  std::string out_path;
  /// Optional declarative manifold description consumed by the atlas
  /// suites: {"kind", "scale", "rotation", "with_rotated_copy", "n",
  /// "half_width", "sample_radius", "max_shift"}; see docs/FORMATS.md.
  nlohmann::json manifold_spec;

  nlohmann::json echo(const std::string& resolved_suite, int resolved_degree) const;
  static SuiteConfig from_json(const nlohmann::json& j);
};

std::vector<std::string> suite_names();

struct CheckInfo {
  std::string suite;
  std::string id;
  std::string anchor;
};
std::vector<CheckInfo> check_catalog();

/// Executes the named suite. Exceptions inside individual checks become
/// fail records; ConfigError is raised only for unusable configuration
/// (unknown suite, unwritable output path).
VerificationReport run_suite(const SuiteConfig& cfg);

}  // namespace qmfd
