#include <doctest.h>

#include <cmath>
#include <complex>
#include <vector>

#include "qmanifold/bundle.hpp"
#include "qmanifold/expectation.hpp"
#include "qmanifold/rng.hpp"
#include "qmanifold/schwartz_fn.hpp"

using namespace qmfd;

namespace {

SchwartzFn random_fn(Rng& rng, int dim, int degree) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(degree) + 1;
  std::vector<Complex> c(total);
  for (auto& z : c) z = rng.complex_normal();
  return SchwartzFn(dim, degree, std::move(c));
}

// Unit-norm function with |Qbar| <= 1: a displaced Gaussian with a small
// random admixture.
SchwartzFn bounded_base_fn(Rng& rng, int degree) {
  const std::vector<double> center{rng.uniform(-0.8, 0.8)};
  SchwartzFn f = gaussian_section(center, degree);
  f = f + 0.15 * random_fn(rng, 1, degree / 2).padded_to(degree);
  return (1.0 / f.norm()) * f;
}

// Direction tangent to the zero-expectation fiber at g0: subtract the
// Q g0 component that carries the expectation change.
SchwartzFn make_admissible(const SchwartzFn& g0, const SchwartzFn& g) {
  const SchwartzFn qg0 = apply_position(g0, 0);
  const double num = d_expectation(g0, g)[0];
  const double den = d_expectation(g0, qg0.truncated_to(g0.degree()))[0];
  const SchwartzFn corrector = qg0.truncated_to(g0.degree());
  return g - (num / den) * corrector;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

}  // namespace

TEST_CASE("project_to_fiber recenters the section family") {
  const std::vector<double> x{1.2};
  const SchwartzFn psi_x = gaussian_section(x, 48);
  const std::vector<double> origin{0.0};
  const SchwartzFn psi_0 = gaussian_section(origin, 48);

  const SchwartzFn fiber = project_to_fiber(psi_x);
  CHECK((fiber - psi_0).norm() < 1e-9);
  CHECK(inf_norm(position_expectation(fiber).value) < 1e-9);

  // Functions already in the fiber are fixed points (zero shift).
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1}, 8);
  CHECK((project_to_fiber(h1) - h1).norm() < 1e-12);

  // Idempotence up to translation round-off.
  Rng rng(3);
  const SchwartzFn f = bounded_base_fn(rng, 32);
  const SchwartzFn once = project_to_fiber(f);
  const SchwartzFn twice = project_to_fiber(once);
  CHECK((twice - once).norm() < 1e-9);

  CHECK_THROWS_AS(project_to_fiber(SchwartzFn::zero(1, 4)), NonzeroRequired);
}

TEST_CASE("trivialize splits base and fiber") {
  const std::vector<double> x{0.8};
  const FiberPoint p = trivialize(gaussian_section(x, 48));
  CHECK(p.base[0] == doctest::Approx(0.8).epsilon(1e-12));
  const std::vector<double> origin{0.0};
  CHECK((p.fiber - gaussian_section(origin, 48).padded_to(p.fiber.degree())).norm() < 1e-9);

  // A fiber element trivializes to base zero and itself.
  const SchwartzFn h2 = SchwartzFn::basis(MultiIndex{2}, 8);
  const FiberPoint q = trivialize(h2);
  CHECK(std::abs(q.base[0]) < 1e-12);
  CHECK((q.fiber - h2).norm() < 1e-12);
}

TEST_CASE("untrivialize validates its input") {
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1}, 8);
  const FiberPoint good{{0.0}, h1};
  CHECK((untrivialize(good) - h1).norm() == 0.0);

  // Zero fiber: rejected.
  CHECK_THROWS_AS(untrivialize(FiberPoint{{0.0}, SchwartzFn::zero(1, 4)}), NonzeroRequired);

  // Fiber with visibly nonzero expectation: rejected.
  const std::vector<double> off_center{0.5};
  CHECK_THROWS_AS(untrivialize(FiberPoint{{0.0}, gaussian_section(off_center, 32)}),
                  PreconditionError);

  // Base/fiber dimension mismatch: rejected.
  CHECK_THROWS_AS(untrivialize(FiberPoint{{0.0, 0.0}, h1}), DimensionMismatch);
}

TEST_CASE("tau and its inverse are mutually inverse on samples") {
  Rng rng(11);
  for (int trial = 0; trial < 30; ++trial) {
    const SchwartzFn f = bounded_base_fn(rng, 32);
    const FiberPoint p = trivialize(f);
    CHECK(inf_norm(position_expectation(p.fiber).value) < 1e-9);

    const SchwartzFn back = untrivialize(p);
    CHECK((back - f).norm() < 1e-8);

    const FiberPoint again = trivialize(back);
    CHECK(std::abs(again.base[0] - p.base[0]) < 1e-8);
    CHECK((again.fiber - p.fiber).norm() < 1e-8);
  }
}

TEST_CASE("d_trivialize: degenerate direction and linearity") {
  Rng rng(21);
  const SchwartzFn f0 = bounded_base_fn(rng, 32);

  // Direction f0 itself: base part vanishes, fiber part is the centered f0.
  const ProductDirection d = d_trivialize(f0, f0);
  CHECK(inf_norm(d.base) < 1e-12);
  const SchwartzFn centered = project_to_fiber(f0);
  CHECK((d.fiber - centered).norm() < 1e-12);

  // Real-linearity in the direction.
  const SchwartzFn g1 = random_fn(rng, 1, 32);
  const SchwartzFn g2 = random_fn(rng, 1, 32);
  const double a = rng.normal(), b = rng.normal();
  const ProductDirection lhs = d_trivialize(f0, a * g1 + b * g2);
  const ProductDirection d1 = d_trivialize(f0, g1);
  const ProductDirection d2 = d_trivialize(f0, g2);
  CHECK(std::abs(lhs.base[0] - (a * d1.base[0] + b * d2.base[0])) < 1e-12);
  CHECK((lhs.fiber - (a * d1.fiber + b * d2.fiber)).norm() <
        1e-12 * (1.0 + lhs.fiber.norm()));
}

TEST_CASE("d_trivialize agrees with finite differences") {
  Rng rng(33);
  const SchwartzFn f0 = bounded_base_fn(rng, 32);
  SchwartzFn g = random_fn(rng, 1, 32);
  g = (1.0 / g.norm()) * g;
  const ProductDirection d = d_trivialize(f0, g);

  double prev_err = 1e300;
  for (double t : {1e-3, 1e-4}) {
    const FiberPoint plus = trivialize(f0 + t * g);
    const FiberPoint base = trivialize(f0);
    std::vector<double> base_diff(plus.base.size());
    for (std::size_t i = 0; i < base_diff.size(); ++i) {
      base_diff[i] = (plus.base[i] - base.base[i]) / t - d.base[i];
    }
    const SchwartzFn fiber_diff =
        (1.0 / t) * (plus.fiber - base.fiber) - d.fiber;
    const double err = product_norm(base_diff, fiber_diff);
    CHECK(err < prev_err * 0.3);  // one-sided differences converge at O(t)
    prev_err = err;
  }
  CHECK(prev_err < 1e-2 * (1.0 + product_norm(d.base, d.fiber)));
}

TEST_CASE("remainders of both differentials are quadratically small") {
  Rng rng(44);
  const auto grid = default_t_grid();
  for (int trial = 0; trial < 3; ++trial) {
    const SchwartzFn f0 = bounded_base_fn(rng, 32);
    SchwartzFn g = random_fn(rng, 1, 32);
    g = (1.0 / g.norm()) * g;
    const ProductDirection d = d_trivialize(f0, g);
    const FiberPoint at_f0 = trivialize(f0);

    const auto tau_remainder = tangent_slope(
        [&](double t) {
          const FiberPoint moved = trivialize(f0 + t * g);
          std::vector<double> db(moved.base.size());
          for (std::size_t i = 0; i < db.size(); ++i) {
            db[i] = moved.base[i] - at_f0.base[i] - t * d.base[i];
          }
          const SchwartzFn df = moved.fiber - at_f0.fiber - t * d.fiber;
          return product_norm(db, df);
        },
        grid);
    CHECK(tau_remainder.fitted_slope >= 1.9);

    // Inverse map: start from a fiber point and an admissible direction.
    const SchwartzFn g0 = at_f0.fiber;
    const SchwartzFn dir = make_admissible(g0, random_fn(rng, 1, g0.degree()));
    const std::vector<double> dx{rng.uniform(-1.0, 1.0)};
    const SchwartzFn lin = d_untrivialize(at_f0.base, g0, dx, dir);
    const SchwartzFn base_fn = untrivialize(at_f0);
    const auto inv_remainder = tangent_slope(
        [&](double t) {
          std::vector<double> xt(at_f0.base.size());
          for (std::size_t i = 0; i < xt.size(); ++i) xt[i] = at_f0.base[i] + t * dx[i];
          const SchwartzFn moved =
              translate(g0 + t * dir, std::span<const double>(xt));
          return (moved - base_fn - t * lin).norm();
        },
        grid);
    CHECK(inv_remainder.fitted_slope >= 1.9);
  }
}

TEST_CASE("d_untrivialize: degenerate direction and tangency guard") {
  Rng rng(55);
  const SchwartzFn g0 = project_to_fiber(bounded_base_fn(rng, 32));
  const SchwartzFn dir = make_admissible(g0, random_fn(rng, 1, 32));
  const std::vector<double> x0{0.4};
  const std::vector<double> no_shift{0.0};

  // x = 0 reduces to translation of the function direction.
  const SchwartzFn d = d_untrivialize(x0, g0, no_shift, dir);
  const SchwartzFn expected = translate(dir, x0);
  CHECK((d - expected.padded_to(d.degree())).norm() < 1e-10);

  // A direction that visibly changes Qbar is refused.
  const SchwartzFn bad = apply_position(g0, 0).truncated_to(g0.degree());
  try {
    d_untrivialize(x0, g0, no_shift, bad);
    FAIL("expected DirectionNotTangent");
  } catch (const DirectionNotTangent& e) {
    CHECK(e.measured_value > 1e-3);
  }
}

TEST_CASE("the differentials are inverse to one another on admissible directions") {
  Rng rng(66);
  for (int trial = 0; trial < 5; ++trial) {
    const SchwartzFn f0 = bounded_base_fn(rng, 32);
    SchwartzFn g = random_fn(rng, 1, 32);
    g = (1.0 / g.norm()) * g;

    const FiberPoint p = trivialize(f0);
    const ProductDirection d = d_trivialize(f0, g);
    const SchwartzFn back = d_untrivialize(p.base, p.fiber, d.base, d.fiber);
    CHECK((back - g.padded_to(back.degree())).norm() < 1e-7);
  }
}

TEST_CASE("product norm mixes base and fiber scales") {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, 2);
  const std::vector<double> big{3.0};
  CHECK(product_norm(big, h0) == doctest::Approx(3.0));
  const std::vector<double> small{0.1};
  // nuclear-1 of h_0 is sqrt(2) > 0.1
  CHECK(product_norm(small, h0) == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}
