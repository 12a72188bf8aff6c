#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstdio>
#include <vector>

#include "oracles.hpp"
#include "qmanifold/expectation.hpp"
#include "qmanifold/hermite.hpp"
#include "qmanifold/rng.hpp"
#include "qmanifold/schwartz_fn.hpp"
#include "qmanifold/serialize.hpp"

using namespace qmfd;

namespace {

// Frozen expected values (recomputed by the oracles in the tests below).
constexpr double kPiQuarterInv = 0.7511255444649425;    // pi^{-1/4}
constexpr double kSqrtHalfPi = 1.2533141373155001;      // sqrt(pi/2) = ||Psi(0)||^2
constexpr double kInvSqrt2 = 0.7071067811865475;

SchwartzFn random_fn(Rng& rng, int dim, int degree, bool real_only = false) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(degree) + 1;
  std::vector<Complex> c(total);
  for (auto& z : c) {
    z = real_only ? Complex(rng.normal(), 0.0) : rng.complex_normal();
  }
  return SchwartzFn(dim, degree, std::move(c));
}

}  // namespace

TEST_CASE("basis values match the direct polynomial expansion") {
  // 128 evaluation points across the bulk of the support, k <= 10.
  for (int k = 0; k <= 10; ++k) {
    const SchwartzFn hk = SchwartzFn::basis(MultiIndex{k});
    for (int i = 0; i < 128; ++i) {
      const double x = -6.0 + 12.0 * i / 127.0;
      const double direct = oracle::hermite_value_direct(k, x);
      const double got = evaluate(hk, std::vector<double>{x}).real();
      CHECK(got == doctest::Approx(direct).epsilon(1e-12));
    }
  }
}

TEST_CASE("evaluate: ground state at the origin, odd parity") {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0});
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1});
  CHECK(evaluate(h0, std::vector<double>{0.0}).real() ==
        doctest::Approx(kPiQuarterInv).epsilon(1e-14));
  CHECK(std::abs(evaluate(h1, std::vector<double>{0.0})) < 1e-15);
}

TEST_CASE("inner: orthonormality is exact as stored") {
  const int K = 12;
  for (int j = 0; j <= K; ++j) {
    for (int k = 0; k <= K; ++k) {
      const Complex v = inner(SchwartzFn::basis(MultiIndex{j}, K),
                              SchwartzFn::basis(MultiIndex{k}, K));
      CHECK(v.real() == (j == k ? 1.0 : 0.0));
      CHECK(v.imag() == 0.0);
    }
  }
}

TEST_CASE("inner: conjugate symmetry and degree padding") {
  Rng rng(31);
  for (int trial = 0; trial < 20; ++trial) {
    const SchwartzFn f = random_fn(rng, 1, 9);
    const SchwartzFn g = random_fn(rng, 1, 14);
    const Complex a = inner(f, g);
    const Complex b = inner(g, f);
    CHECK(std::abs(a - std::conj(b)) < 1e-14);
  }
  CHECK_THROWS_AS(inner(random_fn(rng, 1, 3), random_fn(rng, 2, 3)), DimensionMismatch);
}

TEST_CASE("inner of the Gaussian section with itself") {
  // Oracle: Simpson quadrature of integral exp(-2 y^2) dy.
  const double by_quadrature =
      oracle::simpson([](double y) { return std::exp(-2.0 * y * y); }, -9.0, 9.0, 4000);
  CHECK(by_quadrature == doctest::Approx(kSqrtHalfPi).epsilon(1e-12));

  const std::vector<double> origin{0.0};
  const SchwartzFn psi0 = gaussian_section(origin, 32);
  CHECK(inner(psi0, psi0).real() == doctest::Approx(kSqrtHalfPi).epsilon(1e-12));
}

TEST_CASE("apply_position acts as multiplication by x") {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0});
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1});

  // Oracle: integral h_1(x) * x * h_0(x) dx.
  const double overlap = oracle::simpson(
      [](double x) {
        return oracle::hermite_value_direct(1, x) * x * oracle::hermite_value_direct(0, x);
      },
      -10.0, 10.0, 4000);
  CHECK(overlap == doctest::Approx(kInvSqrt2).epsilon(1e-12));

  const SchwartzFn xh0 = apply_position(h0, 0);
  CHECK(xh0.degree() == 1);
  CHECK(std::abs(inner(h1, xh0) - Complex(kInvSqrt2, 0.0)) < 1e-15);
  CHECK(std::abs(inner(h0, apply_position(h1, 0)) - Complex(kInvSqrt2, 0.0)) < 1e-15);

  const SchwartzFn zero = SchwartzFn::zero(1, 5);
  CHECK(apply_position(zero, 0).norm() == 0.0);

  CHECK_THROWS_AS(apply_position(h0, 1), AxisOutOfRange);
  CHECK_THROWS_AS(apply_position(h0, -1), AxisOutOfRange);
}

TEST_CASE("apply_momentum acts as -i d/dx") {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0});
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1});

  // Oracle: -i h_0'(x) = i x h_0(x), so <h_1, P h_0> = i / sqrt(2).
  // Simpson on the imaginary part: integral h_1(x) * x * h_0(x) dx.
  const SchwartzFn ph0 = apply_momentum(h0, 0);
  CHECK(std::abs(inner(h1, ph0) - Complex(0.0, kInvSqrt2)) < 1e-15);

  Rng rng(7);
  const SchwartzFn f = random_fn(rng, 1, 16, /*real_only=*/true);
  const Complex fpf = inner(f, apply_momentum(f, 0));
  CHECK(std::abs(fpf.imag()) < 1e-13 * f.norm_sq());

  const Complex alpha(0.3, -1.7);
  const SchwartzFn lhs = apply_momentum(alpha * f, 0);
  const SchwartzFn rhs = alpha * apply_momentum(f, 0);
  CHECK((lhs - rhs).norm() < 1e-14);
}

TEST_CASE("derivative: ladder form of d/dx") {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0});
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1});

  // h_0'(x) = -x h_0(x): oracle by central differences at a few points.
  const SchwartzFn dh0 = derivative(h0, MultiIndex{1});
  for (double x : {-1.3, -0.2, 0.9, 2.1}) {
    const double h = 1e-6;
    const double fd = (oracle::hermite_value_direct(0, x + h) -
                       oracle::hermite_value_direct(0, x - h)) /
                      (2.0 * h);
    CHECK(evaluate(dh0, std::vector<double>{x}).real() == doctest::Approx(fd).epsilon(1e-8));
  }
  CHECK(std::abs(inner(h1, dh0) - Complex(-kInvSqrt2, 0.0)) < 1e-15);

  Rng rng(12);
  const SchwartzFn f = random_fn(rng, 1, 10);
  CHECK((derivative(f, MultiIndex{0}) - f).norm() == 0.0);

  const SchwartzFn twice = derivative(derivative(f, MultiIndex{1}), MultiIndex{1});
  const SchwartzFn second = derivative(f, MultiIndex{2});
  CHECK((twice - second).norm() < 1e-14);
}

TEST_CASE("monomial_multiply powers of x") {
  Rng rng(5);
  const SchwartzFn f = random_fn(rng, 1, 8);
  CHECK((monomial_multiply(f, MultiIndex{0}) - f).norm() == 0.0);

  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0});
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1});
  CHECK((monomial_multiply(h0, MultiIndex{1}) - kInvSqrt2 * h1.padded_to(1)).norm() < 1e-15);

  // <h_0, x^2 h_0> = 1/2 by the ladder algebra.
  const Complex q2 = inner(h0, monomial_multiply(h0, MultiIndex{2}));
  CHECK(std::abs(q2 - Complex(0.5, 0.0)) < 1e-15);
}

TEST_CASE("commutator [Q, P] = i on padded truncations") {
  Rng rng(99);
  for (int dim : {1, 2}) {
    for (int trial = 0; trial < 10; ++trial) {
      const int deg = dim == 1 ? 14 : 6;
      const SchwartzFn f = random_fn(rng, dim, deg);
      const SchwartzFn g = random_fn(rng, dim, deg);
      for (int axis = 0; axis < dim; ++axis) {
        const SchwartzFn qp = apply_position(apply_momentum(f, axis), axis);
        const SchwartzFn pq = apply_momentum(apply_position(f, axis), axis);
        const Complex lhs = inner(g, qp - pq);
        const Complex rhs = Complex(0.0, 1.0) * inner(g, f);
        CHECK(std::abs(lhs - rhs) < 1e-12 * f.norm() * g.norm());
      }
    }
  }
}

TEST_CASE("norm and position-action bounds against the first nuclear seminorm") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const int dim = trial % 2 == 0 ? 1 : 2;
    const int deg = dim == 1 ? 20 : 7;
    const SchwartzFn f = random_fn(rng, dim, deg);
    const double f1 = nuclear_seminorm(f, 1);
    CHECK(f.norm() <= f1 * (1.0 + 1e-12));
    for (int axis = 0; axis < dim; ++axis) {
      CHECK(apply_position(f, axis).norm() <= f1 * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("nuclear seminorms: diagonal formula against the matrix oracle") {
  // 1D: h_k has eigenvalue 2k + 2, so ||h_k||_p = (2k + 2)^{p/2}.
  for (int k = 0; k <= 8; ++k) {
    for (int p = 0; p <= 3; ++p) {
      const auto t = oracle::Tensor::basis(1, {k}, k);
      const double expected = std::sqrt(oracle::nuclear_form_by_matrices(t, p));
      const double got = nuclear_seminorm(SchwartzFn::basis(MultiIndex{k}), p);
      CHECK(got == doctest::Approx(expected).epsilon(1e-12));
      CHECK(got == doctest::Approx(std::pow(2.0 * k + 2.0, 0.5 * p)).epsilon(1e-12));
    }
  }
  CHECK(nuclear_seminorm(SchwartzFn::basis(MultiIndex{0}), 1) ==
        doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));

  // 2D tensor states and a random combination.
  for (int k1 : {0, 2, 5}) {
    for (int k2 : {0, 3}) {
      for (int p = 0; p <= 3; ++p) {
        const auto t = oracle::Tensor::basis(2, {k1, k2}, std::max(k1, k2));
        const double expected = std::sqrt(oracle::nuclear_form_by_matrices(t, p));
        const double got =
            nuclear_seminorm(SchwartzFn::basis(MultiIndex{k1, k2}), p);
        CHECK(got == doctest::Approx(expected).epsilon(1e-12));
      }
    }
  }

  Rng rng(64);
  const SchwartzFn f = random_fn(rng, 1, 8);
  oracle::Tensor t;
  t.dim = 1;
  t.ext = 9;
  t.c = f.coeffs();
  for (int p = 0; p <= 3; ++p) {
    const double expected = std::sqrt(oracle::nuclear_form_by_matrices(t, p));
    CHECK(nuclear_seminorm(f, p) == doctest::Approx(expected).epsilon(1e-12));
  }
  CHECK(nuclear_seminorm(f, 0) == doctest::Approx(f.norm()).epsilon(1e-14));
}

TEST_CASE("seminorm homogeneity and triangle inequality") {
  Rng rng(17);
  const GridSpec grid = GridSpec::for_degree(14, 2.0, 801);
  for (int trial = 0; trial < 25; ++trial) {
    const SchwartzFn f = random_fn(rng, 1, 10);
    const SchwartzFn g = random_fn(rng, 1, 10);
    const Complex lambda = rng.complex_normal();
    const MultiIndex alpha{1};
    const MultiIndex beta{1};

    const double nf = nuclear_seminorm(f, 2);
    const double ng = nuclear_seminorm(g, 2);
    CHECK(nuclear_seminorm(lambda * f, 2) ==
          doctest::Approx(std::abs(lambda) * nf).epsilon(1e-12));
    CHECK(nuclear_seminorm(f + g, 2) <= (nf + ng) * (1.0 + 1e-12));

    const double sf = sup_seminorm(f, alpha, beta, grid);
    const double sg = sup_seminorm(g, alpha, beta, grid);
    CHECK(sup_seminorm(lambda * f, alpha, beta, grid) ==
          doctest::Approx(std::abs(lambda) * sf).epsilon(1e-12));
    CHECK(sup_seminorm(f + g, alpha, beta, grid) <= (sf + sg) * (1.0 + 1e-12));
  }
}

TEST_CASE("sup seminorm basics") {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0});
  const MultiIndex none{0};
  const GridSpec grid = GridSpec::for_degree(0, 4.0, 1001);  // odd count: 0 on grid
  CHECK(sup_seminorm(h0, none, none, grid) ==
        doctest::Approx(kPiQuarterInv).epsilon(1e-14));

  CHECK(sup_seminorm(SchwartzFn::zero(1, 6), none, none, GridSpec::for_degree(6)) == 0.0);

  // Too-narrow grid for the degree: rejected.
  CHECK_THROWS_AS(sup_seminorm(SchwartzFn::basis(MultiIndex{16}), none, none,
                               GridSpec{3.0, 101}),
                  GridError);
}

TEST_CASE("sup seminorm: nested refinement is monotone and converges") {
  Rng rng(123);
  SchwartzFn f = random_fn(rng, 1, 16);
  f = (1.0 / f.norm()) * f;

  GridSpec grid = GridSpec::for_degree(18, 2.0, 2001);
  const MultiIndex alpha{1};
  const MultiIndex beta{1};
  double prev = sup_seminorm(f, alpha, beta, grid);
  for (int round = 0; round < 3; ++round) {
    grid = grid.refined();
    const double next = sup_seminorm(f, alpha, beta, grid);
    CHECK(next >= prev);  // nested grids: max over a superset
    prev = next;
  }

  // Dense-grid convergence: one further doubling moves the value < 1e-8.
  GridSpec dense{grid.half_width, 1 << 19 | 1};
  const double coarse = sup_seminorm(f, alpha, beta, dense);
  const double fine = sup_seminorm(f, alpha, beta, dense.refined());
  CHECK(std::abs(fine - coarse) < 1e-8);
}

TEST_CASE("2D evaluation matches the product structure") {
  // f = h_2 (x) h_3: value factorizes.
  const SchwartzFn f2d = SchwartzFn::basis(MultiIndex{2, 3});
  for (double x : {-1.0, 0.4}) {
    for (double y : {-0.7, 1.9}) {
      const double expected =
          oracle::hermite_value_direct(2, x) * oracle::hermite_value_direct(3, y);
      CHECK(evaluate(f2d, std::vector<double>{x, y}).real() ==
            doctest::Approx(expected).epsilon(1e-12));
    }
  }
}

TEST_CASE("SchwartzFn invariants and helpers") {
  CHECK_THROWS_AS(SchwartzFn(1, 1, {Complex(0.0, 0.0)}), Error);  // bad count
  std::vector<Complex> bad = {Complex(std::nan(""), 0.0), Complex(0.0, 0.0)};
  CHECK_THROWS_AS(SchwartzFn(1, 1, std::move(bad)), Error);

  Rng rng(3);
  const SchwartzFn f = random_fn(rng, 1, 12);
  f.check_consistency();

  double lost = 0.0;
  const SchwartzFn cut = f.truncated_to(6, &lost);
  CHECK(lost == doctest::Approx(f.norm_sq() - cut.norm_sq()).epsilon(1e-12));
  CHECK((cut.padded_to(12) - f).norm_sq() == doctest::Approx(lost).epsilon(1e-12));
}

TEST_CASE("coefficient records round-trip exactly") {
  Rng rng(21);
  for (int dim : {1, 2}) {
    const SchwartzFn f = random_fn(rng, dim, dim == 1 ? 17 : 5);
    const SchwartzFn via_json = schwartz_from_json(to_json(f));
    CHECK(via_json.dim() == f.dim());
    CHECK(via_json.degree() == f.degree());
    CHECK((via_json - f).norm() == 0.0);

    const std::string path = "roundtrip_test.qmc";
    write_binary(f, path);
    const SchwartzFn via_bin = read_binary(path);
    CHECK((via_bin - f).norm() == 0.0);
    std::remove(path.c_str());
  }
}
