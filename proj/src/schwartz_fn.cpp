#include "qmanifold/schwartz_fn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "qmanifold/hermite.hpp"

namespace qmfd {

namespace {

std::size_t pow_size(int extent, int dim) {
  std::size_t s = 1;
  for (int i = 0; i < dim; ++i) s *= static_cast<std::size_t>(extent);
  return s;
}

double sum_mass(const std::vector<Complex>& c) {
  double s = 0.0;
  for (const auto& z : c) s += std::norm(z);
  return s;
}

void require_same_dim(const SchwartzFn& f, const SchwartzFn& g, const char* op) {
  if (f.dim() != g.dim()) {
    throw DimensionMismatch(std::string(op) + ": dimensions " + std::to_string(f.dim()) +
                            " and " + std::to_string(g.dim()) + " differ");
  }
}

void require_axis(const SchwartzFn& f, int axis, const char* op) {
  if (axis < 0 || axis >= f.dim()) {
    throw AxisOutOfRange(std::string(op) + ": axis " + std::to_string(axis) +
                         " outside [0, " + std::to_string(f.dim()) + ")");
  }
}

// Iterates the row-major multi-indices of a cubical tensor.
class IndexWalker {
 public:
  IndexWalker(int dim, int extent)
      : digits_(static_cast<std::size_t>(dim), 0), extent_(extent) {}

  const std::vector<int>& digits() const { return digits_; }
  int order() const { return order_; }

  bool advance() {
    for (int a = static_cast<int>(digits_.size()) - 1; a >= 0; --a) {
      auto& d = digits_[static_cast<std::size_t>(a)];
      if (++d < extent_) {
        ++order_;
        return true;
      }
      order_ -= extent_ - 1;
      d = 0;
    }
    return false;
  }

 private:
  std::vector<int> digits_;
  int extent_;
  int order_ = 0;
};

// Shared implementation of the three ladder-type axis operators. Each
// input coefficient scatters onto the neighbours k -> k -/+ e_axis with
// factors down(k_a), up(k_a); the output degree grows by one.
template <typename Down, typename Up>
SchwartzFn axis_ladder(const SchwartzFn& f, int axis, Down down, Up up) {
  const int n = f.dim();
  const int ein = f.extent();
  const int eout = ein + 1;
  std::vector<Complex> out(pow_size(eout, n), Complex(0.0, 0.0));

  // Row-major strides of the output tensor.
  std::vector<std::size_t> stride(static_cast<std::size_t>(n), 1);
  for (int a = n - 2; a >= 0; --a) {
    stride[static_cast<std::size_t>(a)] =
        stride[static_cast<std::size_t>(a) + 1] * static_cast<std::size_t>(eout);
  }

  IndexWalker walker(n, ein);
  std::size_t flat_in = 0;
  do {
    const Complex c = f.coeffs()[flat_in];
    ++flat_in;
    if (c == Complex(0.0, 0.0)) continue;
    const auto& k = walker.digits();
    std::size_t base = 0;
    for (int a = 0; a < n; ++a) {
      base += static_cast<std::size_t>(k[static_cast<std::size_t>(a)]) *
              stride[static_cast<std::size_t>(a)];
    }
    const int ka = k[static_cast<std::size_t>(axis)];
    const std::size_t sa = stride[static_cast<std::size_t>(axis)];
    if (ka >= 1) out[base - sa] += down(ka) * c;
    out[base + sa] += up(ka) * c;
  } while (walker.advance());
  // (flat_in is advanced manually because input and output strides differ.)

  return SchwartzFn(n, eout - 1, std::move(out));
}

}  // namespace

SchwartzFn::SchwartzFn(int dim, int degree, std::vector<Complex> coeffs)
    : dim_(dim), degree_(degree), coeffs_(std::move(coeffs)) {
  if (dim_ < 1) throw Error("SchwartzFn: dimension must be positive");
  if (degree_ < 0) throw Error("SchwartzFn: degree must be non-negative");
  if (coeffs_.size() != pow_size(degree_ + 1, dim_)) {
    throw Error("SchwartzFn: coefficient count " + std::to_string(coeffs_.size()) +
                " does not match (degree+1)^dim");
  }
  for (const auto& c : coeffs_) {
    if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) {
      throw Error("SchwartzFn: coefficients must be finite");
    }
  }
  norm_sq_ = sum_mass(coeffs_);
}

SchwartzFn SchwartzFn::zero(int dim, int degree) {
  return SchwartzFn(dim, degree, std::vector<Complex>(pow_size(degree + 1, dim)));
}

SchwartzFn SchwartzFn::basis(const MultiIndex& k) {
  int deg = 0;
  for (int i = 0; i < k.dim(); ++i) deg = std::max(deg, k[i]);
  return basis(k, deg);
}

SchwartzFn SchwartzFn::basis(const MultiIndex& k, int degree) {
  std::vector<Complex> c(pow_size(degree + 1, k.dim()));
  c[flat_index(k, degree + 1)] = Complex(1.0, 0.0);
  return SchwartzFn(k.dim(), degree, std::move(c));
}

Complex SchwartzFn::coeff(const MultiIndex& k) const {
  if (k.dim() != dim_) throw DimensionMismatch("SchwartzFn::coeff: index dim mismatch");
  return coeffs_[flat_index(k, extent())];
}

double SchwartzFn::norm() const { return std::sqrt(norm_sq_); }

SchwartzFn SchwartzFn::padded_to(int degree) const {
  if (degree < degree_) throw Error("padded_to: target degree below current degree");
  if (degree == degree_) return *this;
  const int eout = degree + 1;
  std::vector<Complex> out(pow_size(eout, dim_));
  IndexWalker walker(dim_, extent());
  std::size_t flat_in = 0;
  do {
    std::size_t flat_out = 0;
    for (int a = 0; a < dim_; ++a) {
      flat_out = flat_out * static_cast<std::size_t>(eout) +
                 static_cast<std::size_t>(walker.digits()[static_cast<std::size_t>(a)]);
    }
    out[flat_out] = coeffs_[flat_in++];
  } while (walker.advance());
  return SchwartzFn(dim_, degree, std::move(out));
}

SchwartzFn SchwartzFn::truncated_to(int degree, double* discarded_mass) const {
  if (degree >= degree_) {
    if (discarded_mass != nullptr) *discarded_mass = 0.0;
    return *this;
  }
  const int eout = degree + 1;
  std::vector<Complex> out(pow_size(eout, dim_));
  double lost = 0.0;
  IndexWalker walker(dim_, extent());
  std::size_t flat_in = 0;
  do {
    const Complex c = coeffs_[flat_in++];
    bool kept = true;
    for (int v : walker.digits()) kept = kept && v <= degree;
    if (kept) {
      std::size_t flat_out = 0;
      for (int a = 0; a < dim_; ++a) {
        flat_out = flat_out * static_cast<std::size_t>(eout) +
                   static_cast<std::size_t>(walker.digits()[static_cast<std::size_t>(a)]);
      }
      out[flat_out] = c;
    } else {
      lost += std::norm(c);
    }
  } while (walker.advance());
  if (discarded_mass != nullptr) *discarded_mass = lost;
  return SchwartzFn(dim_, degree, std::move(out));
}

void SchwartzFn::check_consistency() const {
  const double recomputed = sum_mass(coeffs_);
  const double scale = std::max(1.0, recomputed);
  if (std::abs(recomputed - norm_sq_) >
      16.0 * std::numeric_limits<double>::epsilon() * scale) {
    throw Error("SchwartzFn: cached norm is inconsistent with coefficients");
  }
}

SchwartzFn SchwartzFn::operator-() const { return Complex(-1.0, 0.0) * (*this); }

SchwartzFn operator+(const SchwartzFn& f, const SchwartzFn& g) {
  require_same_dim(f, g, "operator+");
  const int deg = std::max(f.degree(), g.degree());
  const SchwartzFn fp = f.padded_to(deg);
  const SchwartzFn gp = g.padded_to(deg);
  std::vector<Complex> out = fp.coeffs();
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += gp.coeffs()[i];
  return SchwartzFn(f.dim(), deg, std::move(out));
}

SchwartzFn operator-(const SchwartzFn& f, const SchwartzFn& g) { return f + (-g); }

SchwartzFn operator*(Complex scale, const SchwartzFn& f) {
  std::vector<Complex> out = f.coeffs();
  for (auto& c : out) c *= scale;
  return SchwartzFn(f.dim(), f.degree(), std::move(out));
}

SchwartzFn operator*(double scale, const SchwartzFn& f) {
  return Complex(scale, 0.0) * f;
}

Complex inner(const SchwartzFn& f, const SchwartzFn& g) {
  require_same_dim(f, g, "inner");
  if (f.degree() != g.degree()) {
    const int deg = std::max(f.degree(), g.degree());
    return inner(f.padded_to(deg), g.padded_to(deg));
  }
  Complex s(0.0, 0.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    s += std::conj(f.coeffs()[i]) * g.coeffs()[i];
  }
  return s;
}

SchwartzFn apply_position(const SchwartzFn& f, int axis) {
  require_axis(f, axis, "apply_position");
  return axis_ladder(
      f, axis, [](int k) { return std::sqrt(0.5 * k); },
      [](int k) { return std::sqrt(0.5 * (k + 1)); });
}

SchwartzFn apply_momentum(const SchwartzFn& f, int axis) {
  require_axis(f, axis, "apply_momentum");
  return axis_ladder(
      f, axis, [](int k) { return Complex(0.0, -std::sqrt(0.5 * k)); },
      [](int k) { return Complex(0.0, std::sqrt(0.5 * (k + 1))); });
}

SchwartzFn derivative_axis(const SchwartzFn& f, int axis) {
  require_axis(f, axis, "derivative_axis");
  return axis_ladder(
      f, axis, [](int k) { return std::sqrt(0.5 * k); },
      [](int k) { return -std::sqrt(0.5 * (k + 1)); });
}

SchwartzFn derivative(const SchwartzFn& f, const MultiIndex& beta) {
  if (beta.dim() != f.dim()) throw DimensionMismatch("derivative: index dim mismatch");
  SchwartzFn out = f;
  for (int a = 0; a < f.dim(); ++a) {
    for (int r = 0; r < beta[a]; ++r) out = derivative_axis(out, a);
  }
  return out;
}

SchwartzFn monomial_multiply(const SchwartzFn& f, const MultiIndex& alpha) {
  if (alpha.dim() != f.dim()) throw DimensionMismatch("monomial_multiply: index dim mismatch");
  SchwartzFn out = f;
  for (int a = 0; a < f.dim(); ++a) {
    for (int r = 0; r < alpha[a]; ++r) out = apply_position(out, a);
  }
  return out;
}

Complex evaluate(const SchwartzFn& f, std::span<const double> x) {
  if (static_cast<int>(x.size()) != f.dim()) {
    throw DimensionMismatch("evaluate: point dimension mismatch");
  }
  std::vector<std::vector<double>> tables;
  tables.reserve(x.size());
  for (double xi : x) tables.push_back(hermite::function_values(f.degree(), xi));

  Complex s(0.0, 0.0);
  IndexWalker walker(f.dim(), f.extent());
  std::size_t flat = 0;
  do {
    const Complex c = f.coeffs()[flat++];
    if (c == Complex(0.0, 0.0)) continue;
    double w = 1.0;
    for (int a = 0; a < f.dim(); ++a) {
      w *= tables[static_cast<std::size_t>(a)]
                 [static_cast<std::size_t>(walker.digits()[static_cast<std::size_t>(a)])];
    }
    s += w * c;
  } while (walker.advance());
  return s;
}

std::vector<Complex> evaluate_grid(const SchwartzFn& f,
                                   const std::vector<std::vector<double>>& axes) {
  if (static_cast<int>(axes.size()) != f.dim()) {
    throw DimensionMismatch("evaluate_grid: axis count mismatch");
  }
  const int n = f.dim();
  const int ext = f.extent();

  // Contract one axis at a time, last axis first. The working buffer has
  // shape (lead coefficient block) x (already-resolved grid block).
  std::vector<Complex> work = f.coeffs();
  std::size_t coeff_block = work.size();
  std::size_t grid_block = 1;
  for (int a = n - 1; a >= 0; --a) {
    const auto& pts = axes[static_cast<std::size_t>(a)];
    const std::size_t npts = pts.size();
    // Basis values table: npts x ext.
    std::vector<double> table(npts * static_cast<std::size_t>(ext));
    for (std::size_t g = 0; g < npts; ++g) {
      const auto vals = hermite::function_values(f.degree(), pts[g]);
      std::copy(vals.begin(), vals.end(), table.begin() + g * static_cast<std::size_t>(ext));
    }
    coeff_block /= static_cast<std::size_t>(ext);
    std::vector<Complex> next(coeff_block * npts * grid_block);
    for (std::size_t lead = 0; lead < coeff_block; ++lead) {
      for (std::size_t g = 0; g < npts; ++g) {
        const double* trow = table.data() + g * static_cast<std::size_t>(ext);
        for (std::size_t tr = 0; tr < grid_block; ++tr) {
          Complex acc(0.0, 0.0);
          const Complex* src = work.data() + (lead * static_cast<std::size_t>(ext)) * grid_block + tr;
          for (int k = 0; k < ext; ++k) {
            acc += trow[k] * src[static_cast<std::size_t>(k) * grid_block];
          }
          next[(lead * npts + g) * grid_block + tr] = acc;
        }
      }
    }
    work = std::move(next);
    grid_block *= npts;
  }
  return work;
}

double sup_seminorm(const SchwartzFn& f, const MultiIndex& alpha, const MultiIndex& beta,
                    const GridSpec& grid, double margin) {
  const SchwartzFn g = monomial_multiply(derivative(f, beta), alpha);
  grid.validate(g.degree(), margin);
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(f.dim()),
                                        grid.axis_points());
  double best = 0.0;
  for (const Complex& v : evaluate_grid(g, axes)) best = std::max(best, std::abs(v));
  return best;
}

double nuclear_form(const SchwartzFn& f, int p) {
  if (p < 0) throw Error("nuclear_form: p must be non-negative");
  double s = 0.0;
  IndexWalker walker(f.dim(), f.extent());
  std::size_t flat = 0;
  do {
    const double mass = std::norm(f.coeffs()[flat++]);
    if (mass == 0.0) continue;
    const double eig = 2.0 * walker.order() + f.dim() + 1.0;
    s += mass * std::pow(eig, p);
  } while (walker.advance());
  return s;
}

double nuclear_seminorm(const SchwartzFn& f, int p) { return std::sqrt(nuclear_form(f, p)); }

}  // namespace qmfd
