#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace qmfd {

enum class CheckStatus { pass, fail, vacuous };

const char* to_string(CheckStatus s);

/// One verified identity or bound. `residual` is the measured miss and
/// passing means residual <= tolerance; slope-style checks store
/// (threshold - measured slope) so the same rule applies. `anchor` names
/// the identity under test, or "plumbing" for tool machinery.
struct CheckRecord {
  std::string id;
  std::string anchor;
  CheckStatus status = CheckStatus::pass;
  double residual = 0.0;
  double tolerance = 0.0;
  double wall_ms = 0.0;
  std::string note;  // optional extra detail (e.g. the fitted slope)

  static CheckRecord from_residual(std::string id, std::string anchor, double residual,
                                   double tolerance, std::string note = {});
};

struct VerificationReport {
  std::string tool = "qm";
  std::string version = "0.1.0";
  int schema_version = 1;
  nlohmann::json config;
  std::vector<CheckRecord> checks;

  void add(CheckRecord record) { checks.push_back(std::move(record)); }
  void add(std::vector<CheckRecord> records);

  /// Canonical order: sorted by check id, independent of execution order.
  void finalize();

  int fail_count() const;
  int pass_count() const;
  int vacuous_count() const;
  /// 0 when no check failed, 1 otherwise.
  int exit_code() const { return fail_count() == 0 ? 0 : 1; }

  /// `include_walltime = false` yields a byte-stable document for a fixed
  /// seed and config.
  nlohmann::json to_json(bool include_walltime = true) const;
};

}  // namespace qmfd
