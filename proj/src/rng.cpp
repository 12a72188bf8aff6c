#include "qmanifold/rng.hpp"

#include <cmath>

namespace qmfd {

double Rng::normal() {
  // Box-Muller with the cosine branch only, so every call consumes the
  // same number of raw draws.
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double two_pi = 6.283185307179586476925;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(two_pi * u2);
}

std::vector<double> Rng::box_point(int n, double radius) {
  std::vector<double> x(static_cast<std::size_t>(n));
  for (auto& xi : x) xi = uniform(-radius, radius);
  return x;
}

Rng Rng::derive(std::uint64_t seed, const std::string& tag) {
  // FNV-1a over the tag, mixed with the base seed.
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : tag) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return Rng(seed ^ h);
}

}  // namespace qmfd
