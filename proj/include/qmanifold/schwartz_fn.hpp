#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "qmanifold/errors.hpp"
#include "qmanifold/grid.hpp"
#include "qmanifold/multi_index.hpp"

namespace qmfd {

using Complex = std::complex<double>;

/// A rapidly decreasing function on R^n, stored as a truncated expansion
/// in the orthonormal Hermite (oscillator eigenfunction) basis. The
/// coefficient tensor holds (degree+1)^dim complex entries in row-major
/// multi-index order; coefficient c_k multiplies h_{k_1} x ... x h_{k_n}.
///
/// Values are immutable after construction. All operations return new
/// values, so instances may be shared freely between threads.
class SchwartzFn {
 public:
  SchwartzFn(int dim, int degree, std::vector<Complex> coeffs);

  static SchwartzFn zero(int dim, int degree);
  /// The basis function h_k, stored at the smallest sufficient degree.
  static SchwartzFn basis(const MultiIndex& k);
  static SchwartzFn basis(const MultiIndex& k, int degree);

  int dim() const { return dim_; }
  int degree() const { return degree_; }
  int extent() const { return degree_ + 1; }
  std::size_t size() const { return coeffs_.size(); }
  const std::vector<Complex>& coeffs() const { return coeffs_; }
  Complex coeff(const MultiIndex& k) const;

  double norm_sq() const { return norm_sq_; }
  double norm() const;
  bool is_nonzero(double tol) const { return norm() > tol; }

  /// Re-store at a higher degree (coefficients are preserved exactly).
  SchwartzFn padded_to(int degree) const;
  /// Drop modes above `degree`; reports the discarded L2 mass.
  SchwartzFn truncated_to(int degree, double* discarded_mass = nullptr) const;

  /// Recomputes the cached norm and verifies it against the stored value.
  void check_consistency() const;

  SchwartzFn operator-() const;

 private:
  int dim_ = 1;
  int degree_ = 0;
  std::vector<Complex> coeffs_;
  double norm_sq_ = 0.0;
};

// Linear combinations align degrees by zero padding.
SchwartzFn operator+(const SchwartzFn& f, const SchwartzFn& g);
SchwartzFn operator-(const SchwartzFn& f, const SchwartzFn& g);
SchwartzFn operator*(Complex scale, const SchwartzFn& f);
SchwartzFn operator*(double scale, const SchwartzFn& f);

/// L2 scalar product sum conj(c_f) c_g, conjugate-linear in the first
/// argument. Degrees may differ; dimensions must match.
Complex inner(const SchwartzFn& f, const SchwartzFn& g);

/// (Q^i f)(x) = x_i f(x). Exact: the degree grows by one.
SchwartzFn apply_position(const SchwartzFn& f, int axis);

/// (P_i f)(x) = -i d_i f(x). Exact: the degree grows by one.
SchwartzFn apply_momentum(const SchwartzFn& f, int axis);

/// Single partial derivative d_i. Exact: the degree grows by one.
SchwartzFn derivative_axis(const SchwartzFn& f, int axis);

/// Mixed derivative D_beta; degree grows by |beta|.
SchwartzFn derivative(const SchwartzFn& f, const MultiIndex& beta);

/// Multiplication by the monomial x^alpha; degree grows by |alpha|.
SchwartzFn monomial_multiply(const SchwartzFn& f, const MultiIndex& alpha);

/// Pointwise value sum_k c_k prod_i h_{k_i}(x_i).
Complex evaluate(const SchwartzFn& f, std::span<const double> x);

/// Values on the tensor grid spanned by `axes` (row-major order, the last
/// axis varies fastest).
std::vector<Complex> evaluate_grid(const SchwartzFn& f,
                                   const std::vector<std::vector<double>>& axes);

/// Grid approximation of sup |x^alpha D_beta f| from below. The grid must
/// satisfy its coverage invariant for the degree of x^alpha D_beta f.
double sup_seminorm(const SchwartzFn& f, const MultiIndex& alpha, const MultiIndex& beta,
                    const GridSpec& grid, double margin = 2.0);

/// Quadratic form <f, (Q^2 + P^2 + 1)^p f>. The operator is diagonal in
/// this basis with eigenvalue (2|k| + n + 1), so the value is exact.
double nuclear_form(const SchwartzFn& f, int p);

/// sqrt of the quadratic form; the p-th nuclear seminorm. p = 0 gives the
/// L2 norm.
double nuclear_seminorm(const SchwartzFn& f, int p);

}  // namespace qmfd
