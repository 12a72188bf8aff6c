#include "qmanifold/hermite.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>

#include "qmanifold/errors.hpp"

namespace qmfd::hermite {

namespace {
constexpr double kPiQuarterInv = 0.7511255444649425;  // pi^{-1/4}

std::vector<double> recurrence(int max_degree, double x, double start) {
  std::vector<double> v(static_cast<std::size_t>(max_degree) + 1);
  v[0] = start;
  if (max_degree >= 1) v[1] = std::sqrt(2.0) * x * v[0];
  for (int k = 1; k < max_degree; ++k) {
    const auto ku = static_cast<std::size_t>(k);
    v[ku + 1] = std::sqrt(2.0 / (k + 1)) * x * v[ku] -
                std::sqrt(static_cast<double>(k) / (k + 1)) * v[ku - 1];
  }
  return v;
}
}  // namespace

std::vector<double> function_values(int max_degree, double x) {
  return recurrence(max_degree, x, kPiQuarterInv * std::exp(-0.5 * x * x));
}

std::vector<double> polynomial_values(int max_degree, double x) {
  return recurrence(max_degree, x, kPiQuarterInv);
}

Quadrature gauss_hermite(int m) {
  if (m < 1) throw Error("gauss_hermite: need at least one node");
  // Jacobi matrix of the weight exp(-x^2): zero diagonal, off-diagonal
  // sqrt(k/2). Eigenvalues are the nodes; the squared first eigenvector
  // components carry the weights (total mass sqrt(pi)).
  Eigen::MatrixXd jacobi = Eigen::MatrixXd::Zero(m, m);
  for (int k = 1; k < m; ++k) {
    const double b = std::sqrt(0.5 * k);
    jacobi(k, k - 1) = b;
    jacobi(k - 1, k) = b;
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(jacobi);
  if (solver.info() != Eigen::Success) throw Error("gauss_hermite: eigensolver failed");

  const double mu0 = std::sqrt(M_PI);
  Quadrature q;
  q.nodes.resize(static_cast<std::size_t>(m));
  q.weights.resize(static_cast<std::size_t>(m));
  for (int j = 0; j < m; ++j) {
    q.nodes[static_cast<std::size_t>(j)] = solver.eigenvalues()(j);
    const double v0 = solver.eigenvectors()(0, j);
    q.weights[static_cast<std::size_t>(j)] = mu0 * v0 * v0;
  }
  return q;
}

}  // namespace qmfd::hermite
