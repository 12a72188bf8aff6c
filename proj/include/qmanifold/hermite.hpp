#pragma once

#include <vector>

namespace qmfd::hermite {

/// Values h_0(x) .. h_K(x) of the orthonormal Hermite functions
/// (harmonic-oscillator eigenfunctions), computed by the stable
/// three-term recurrence
///   h_0(x) = pi^{-1/4} exp(-x^2/2),
///   h_{k+1}(x) = sqrt(2/(k+1)) x h_k(x) - sqrt(k/(k+1)) h_{k-1}(x).
std::vector<double> function_values(int max_degree, double x);

/// Polynomial parts of the same functions, i.e. the polynomials
/// orthonormal with respect to the weight exp(-x^2). Same recurrence,
/// started from pi^{-1/4} without the Gaussian factor.
std::vector<double> polynomial_values(int max_degree, double x);

struct Quadrature {
  std::vector<double> nodes;
  std::vector<double> weights;
};

/// Gauss-Hermite rule with weight exp(-x^2): exact for polynomials of
/// degree <= 2m-1. Built by the Golub-Welsch eigenvalue method; nodes are
/// returned in ascending order. Intended for m up to a few hundred (node
/// magnitudes stay well inside the range where the polynomial recurrence
/// is representable).
Quadrature gauss_hermite(int m);

}  // namespace qmfd::hermite
