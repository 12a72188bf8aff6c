#pragma once

#include <complex>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace qmfd {

/// Deterministic random source. All variates are derived from mt19937_64
/// through fixed arithmetic (no library distributions), so a seed pins the
/// produced stream on every platform.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller; consumes exactly two uniforms.
  double normal();

  std::complex<double> complex_normal() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  /// Uniform point of the cube [-radius, radius]^n.
  std::vector<double> box_point(int n, double radius);

  /// Derive an independent stream for a named sub-task. Checks seeded this
  /// way do not depend on execution order.
  static Rng derive(std::uint64_t seed, const std::string& tag);

 private:
  std::mt19937_64 gen_;
};

}  // namespace qmfd
