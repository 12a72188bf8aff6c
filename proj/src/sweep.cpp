#include "qmanifold/sweep.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>

#include "qmanifold/bundle.hpp"
#include "qmanifold/errors.hpp"
#include "qmanifold/expectation.hpp"
#include "qmanifold/rng.hpp"
#include "qmanifold/translation.hpp"

namespace qmfd {

namespace {

Tolerances measurement_tolerances() {
  Tolerances tol;
  tol.section = 1.0;      // build sections at any degree, report the defect
  tol.translation = 1.0;  // accept every plan, report the certificate
  return tol;
}

double measure(const std::string& check_id, int degree, Rng& rng) {
  const Tolerances tol = measurement_tolerances();
  if (check_id == "section-expectation") {
    const std::vector<double> two{2.0};
    const SchwartzFn psi = gaussian_section(two, degree, tol);
    return std::abs(position_expectation(psi, tol).value[0] - 2.0);
  }
  if (check_id == "translation-round-trip") {
    const std::vector<double> origin{0.0};
    const SchwartzFn f = gaussian_section(origin, degree, tol);
    const std::vector<double> x{1.0}, minus_x{-1.0};
    return verify_translation_group(f, x, minus_x, TranslationConfig::from(tol));
  }
  if (check_id == "tau-round-trip") {
    const std::vector<double> center{rng.uniform(-0.5, 0.5)};
    const SchwartzFn f = gaussian_section(center, degree, tol);
    const SchwartzFn back = untrivialize(trivialize(f, tol), tol);
    return (back - f).norm() / f.norm();
  }
  throw ConfigError("unknown sweep check '" + check_id + "'");
}

}  // namespace

std::string SweepTable::to_csv() const {
  std::string out = "K,residual,wall_time\n";
  char line[96];
  for (const SweepRow& row : rows) {
    std::snprintf(line, sizeof(line), "%d,%.17g,%.3f\n", row.degree, row.residual,
                  row.wall_ms);
    out += line;
  }
  return out;
}

std::vector<std::string> sweepable_checks() {
  return {"section-expectation", "translation-round-trip", "tau-round-trip"};
}

SweepTable convergence_sweep(const std::string& check_id, std::span<const int> degrees,
                             std::uint64_t seed) {
  const auto known = sweepable_checks();
  if (std::find(known.begin(), known.end(), check_id) == known.end()) {
    throw ConfigError("check '" + check_id + "' does not support sweeping");
  }
  SweepTable table;
  table.check_id = check_id;
  for (int k : degrees) {
    if (k < 1) throw ConfigError("sweep degrees must be positive");
    Rng rng = Rng::derive(seed, check_id);  // same draw at every degree
    const auto start = std::chrono::steady_clock::now();
    const double residual = measure(check_id, k, rng);
    const auto stop = std::chrono::steady_clock::now();
    SweepRow row;
    row.degree = k;
    row.residual = residual;
    row.wall_ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();
    table.rows.push_back(row);
  }
  return table;
}

}  // namespace qmfd
