#include "qmanifold/report.hpp"

#include <algorithm>

namespace qmfd {

const char* to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::pass:
      return "pass";
    case CheckStatus::fail:
      return "fail";
    case CheckStatus::vacuous:
      return "vacuous";
  }
  return "unknown";
}

CheckRecord CheckRecord::from_residual(std::string id, std::string anchor, double residual,
                                       double tolerance, std::string note) {
  CheckRecord r;
  r.id = std::move(id);
  r.anchor = std::move(anchor);
  r.residual = residual;
  r.tolerance = tolerance;
  r.status = residual <= tolerance ? CheckStatus::pass : CheckStatus::fail;
  r.note = std::move(note);
  return r;
}

void VerificationReport::add(std::vector<CheckRecord> records) {
  for (auto& r : records) checks.push_back(std::move(r));
}

void VerificationReport::finalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const CheckRecord& a, const CheckRecord& b) { return a.id < b.id; });
}

int VerificationReport::fail_count() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::fail ? 1 : 0;
  return n;
}

int VerificationReport::pass_count() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::pass ? 1 : 0;
  return n;
}

int VerificationReport::vacuous_count() const {
  int n = 0;
  for (const auto& c : checks) n += c.status == CheckStatus::vacuous ? 1 : 0;
  return n;
}

nlohmann::json VerificationReport::to_json(bool include_walltime) const {
  nlohmann::json checks_json = nlohmann::json::array();
  for (const auto& c : checks) {
    nlohmann::json entry{{"id", c.id},
                         {"anchor", c.anchor},
                         {"status", to_string(c.status)},
                         {"residual", c.residual},
                         {"tolerance", c.tolerance}};
    if (include_walltime) entry["wall_ms"] = c.wall_ms;
    if (!c.note.empty()) entry["note"] = c.note;
    checks_json.push_back(std::move(entry));
  }
  return nlohmann::json{{"tool", tool},
                        {"version", version},
                        {"schema_version", schema_version},
                        {"config", config},
                        {"checks", checks_json},
                        {"summary",
                         {{"pass", pass_count()},
                          {"fail", fail_count()},
                          {"vacuous", vacuous_count()}}}};
}

}  // namespace qmfd
