#pragma once

// Test-side oracles. Everything here recomputes expected values through
// routes that are independent of the library code under test: composite
// Simpson quadrature on wide grids, explicit monomial expansions of the
// basis functions, and a stand-alone ladder-matrix tensor type.

#include <cmath>
#include <complex>
#include <functional>
#include <vector>

namespace oracle {

using Cx = std::complex<double>;

// Composite Simpson rule with `intervals` subintervals (rounded up to even).
inline double simpson(const std::function<double(double)>& f, double lo, double hi,
                      int intervals) {
  if (intervals % 2 != 0) ++intervals;
  const double h = (hi - lo) / intervals;
  double s = f(lo) + f(hi);
  for (int i = 1; i < intervals; ++i) {
    s += f(lo + h * i) * (i % 2 == 1 ? 4.0 : 2.0);
  }
  return s * h / 3.0;
}

// Monomial coefficients of the physicists' Hermite polynomial H_k, from
// the integer recurrence H_{k+1} = 2x H_k - 2k H_{k-1}. Exact in double
// for the small k used in tests.
inline std::vector<double> hermite_poly_monomials(int k) {
  std::vector<std::vector<double>> h(static_cast<std::size_t>(k) + 1);
  h[0] = {1.0};
  if (k >= 1) h[1] = {0.0, 2.0};
  for (int m = 1; m < k; ++m) {
    std::vector<double> next(static_cast<std::size_t>(m) + 2, 0.0);
    for (std::size_t j = 0; j < h[static_cast<std::size_t>(m)].size(); ++j) {
      next[j + 1] += 2.0 * h[static_cast<std::size_t>(m)][j];
    }
    for (std::size_t j = 0; j < h[static_cast<std::size_t>(m) - 1].size(); ++j) {
      next[j] -= 2.0 * m * h[static_cast<std::size_t>(m) - 1][j];
    }
    h[static_cast<std::size_t>(m) + 1] = std::move(next);
  }
  return h[static_cast<std::size_t>(k)];
}

// h_k(x) by direct polynomial evaluation (Horner) times the Gaussian and
// the normalization 1/sqrt(2^k k! sqrt(pi)).
inline double hermite_value_direct(int k, double x) {
  const auto mono = hermite_poly_monomials(k);
  double poly = 0.0;
  for (std::size_t j = mono.size(); j-- > 0;) poly = poly * x + mono[j];
  double norm = std::pow(M_PI, 0.25);
  for (int m = 1; m <= k; ++m) norm *= std::sqrt(2.0 * m);
  return poly * std::exp(-0.5 * x * x) / norm;
}

// Minimal tensor of Hermite coefficients with its own ladder arithmetic;
// used as the matrix-application oracle for the diagonal seminorm formula.
struct Tensor {
  int dim = 1;
  int ext = 1;  // entries per axis
  std::vector<Cx> c;

  static Tensor basis(int dim, const std::vector<int>& k, int degree) {
    Tensor t;
    t.dim = dim;
    t.ext = degree + 1;
    std::size_t total = 1;
    for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(t.ext);
    t.c.assign(total, Cx(0.0, 0.0));
    std::size_t flat = 0;
    for (int a = 0; a < dim; ++a) {
      flat = flat * static_cast<std::size_t>(t.ext) + static_cast<std::size_t>(k[static_cast<std::size_t>(a)]);
    }
    t.c[flat] = Cx(1.0, 0.0);
    return t;
  }
};

// Apply one ladder-type operator along `axis`, growing the extent by one.
// kind: 0 -> Q, 1 -> P.
inline Tensor apply_ladder(const Tensor& in, int axis, int kind) {
  Tensor out;
  out.dim = in.dim;
  out.ext = in.ext + 1;
  std::size_t total = 1;
  for (int a = 0; a < in.dim; ++a) total *= static_cast<std::size_t>(out.ext);
  out.c.assign(total, Cx(0.0, 0.0));

  std::vector<int> digits(static_cast<std::size_t>(in.dim), 0);
  const std::size_t n_in = in.c.size();
  for (std::size_t flat = 0; flat < n_in; ++flat) {
    const Cx v = in.c[flat];
    if (v != Cx(0.0, 0.0)) {
      std::size_t base = 0;
      for (int a = 0; a < in.dim; ++a) {
        base = base * static_cast<std::size_t>(out.ext) +
               static_cast<std::size_t>(digits[static_cast<std::size_t>(a)]);
      }
      std::size_t stride = 1;
      for (int a = axis + 1; a < in.dim; ++a) stride *= static_cast<std::size_t>(out.ext);
      const int ka = digits[static_cast<std::size_t>(axis)];
      const Cx up = kind == 0 ? Cx(std::sqrt(0.5 * (ka + 1)), 0.0)
                              : Cx(0.0, std::sqrt(0.5 * (ka + 1)));
      const Cx down = kind == 0 ? Cx(std::sqrt(0.5 * ka), 0.0)
                                : Cx(0.0, -std::sqrt(0.5 * ka));
      out.c[base + stride] += up * v;
      if (ka >= 1) out.c[base - stride] += down * v;
    }
    for (int a = in.dim - 1; a >= 0; --a) {
      auto& d = digits[static_cast<std::size_t>(a)];
      if (++d < in.ext) break;
      d = 0;
    }
  }
  return out;
}

inline Tensor add(const Tensor& a, const Tensor& b) {
  const Tensor* big = a.ext >= b.ext ? &a : &b;
  const Tensor* small = a.ext >= b.ext ? &b : &a;
  Tensor out = *big;
  std::vector<int> digits(static_cast<std::size_t>(small->dim), 0);
  for (std::size_t flat = 0; flat < small->c.size(); ++flat) {
    std::size_t target = 0;
    for (int ax = 0; ax < small->dim; ++ax) {
      target = target * static_cast<std::size_t>(big->ext) +
               static_cast<std::size_t>(digits[static_cast<std::size_t>(ax)]);
    }
    out.c[target] += small->c[flat];
    for (int ax = small->dim - 1; ax >= 0; --ax) {
      auto& d = digits[static_cast<std::size_t>(ax)];
      if (++d < small->ext) break;
      d = 0;
    }
  }
  return out;
}

inline Cx dot(const Tensor& a, const Tensor& b) {
  const Tensor *lo = &a, *hi = &b;
  bool conj_first = true;
  if (a.ext > b.ext) {
    lo = &b;
    hi = &a;
    conj_first = false;
  }
  Cx s(0.0, 0.0);
  std::vector<int> digits(static_cast<std::size_t>(lo->dim), 0);
  for (std::size_t flat = 0; flat < lo->c.size(); ++flat) {
    std::size_t target = 0;
    for (int ax = 0; ax < lo->dim; ++ax) {
      target = target * static_cast<std::size_t>(hi->ext) +
               static_cast<std::size_t>(digits[static_cast<std::size_t>(ax)]);
    }
    s += conj_first ? std::conj(lo->c[flat]) * hi->c[target]
                    : std::conj(hi->c[target]) * lo->c[flat];
    for (int ax = lo->dim - 1; ax >= 0; --ax) {
      auto& d = digits[static_cast<std::size_t>(ax)];
      if (++d < lo->ext) break;
      d = 0;
    }
  }
  return s;
}

// <t, (Q^2 + P^2 + 1)^p t> by explicit operator application.
inline double nuclear_form_by_matrices(const Tensor& t, int p) {
  Tensor acc = t;
  for (int round = 0; round < p; ++round) {
    Tensor sum = acc;  // identity part
    for (int axis = 0; axis < t.dim; ++axis) {
      sum = add(sum, apply_ladder(apply_ladder(acc, axis, 0), axis, 0));
      sum = add(sum, apply_ladder(apply_ladder(acc, axis, 1), axis, 1));
    }
    acc = sum;
  }
  return dot(t, acc).real();
}

}  // namespace oracle
