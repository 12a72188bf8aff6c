#include "qmanifold/suites.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>

#include "qmanifold/atlas.hpp"
#include "qmanifold/bundle.hpp"
#include "qmanifold/expectation.hpp"
#include "qmanifold/rng.hpp"
#include "qmanifold/schwartz_fn.hpp"
#include "qmanifold/translation.hpp"

namespace qmfd {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2 = 0.7071067811865475;
constexpr double kSectionC0 = 1.0870307726111885;  // <h_0, exp(-y^2)>

struct CheckContext {
  const SuiteConfig* cfg = nullptr;
  int degree = 0;

  int samples(int fallback) const { return cfg->samples > 0 ? cfg->samples : fallback; }
  Rng rng(const std::string& id) const { return Rng::derive(cfg->seed, id); }
  const Tolerances& tol() const { return cfg->tol; }
};

using CheckFn = std::function<std::vector<CheckRecord>(const CheckContext&)>;

struct CheckDef {
  std::string suite;
  std::string id;
  std::string anchor;
  CheckFn fn;
};

std::vector<CheckRecord> one(const CheckDef& def, double residual, double tolerance,
                             std::string note = {}) {
  return {CheckRecord::from_residual(def.id, def.anchor, residual, tolerance,
                                     std::move(note))};
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

double inf_dist(const std::vector<double>& a, const std::vector<double>& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

SchwartzFn random_fn(Rng& rng, int dim, int degree) {
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(degree) + 1;
  std::vector<Complex> c(total);
  for (auto& z : c) z = rng.complex_normal();
  return SchwartzFn(dim, degree, std::move(c));
}

// Unit-norm 1-d function with |Qbar| <= 1, smooth enough to translate.
SchwartzFn gaussian_like(Rng& rng, int degree, const Tolerances& tol) {
  const std::vector<double> center{rng.uniform(-0.8, 0.8)};
  SchwartzFn f = gaussian_section(center, degree, tol);
  f = f + 0.15 * random_fn(rng, 1, std::max(1, degree / 3)).padded_to(degree);
  return (1.0 / f.norm()) * f;
}

ManifoldPoint sample_in_overlap(const ClassicalAtlas& ca, int i, int j, Rng& rng) {
  for (int tries = 0; tries < 4096; ++tries) {
    const ManifoldPoint p = ca.sample(rng);
    if (ca.chart(i).contains(p) && ca.chart(j).contains(p)) return p;
  }
  throw Error("sampling failed to hit the chart overlap");
}

// ---------------------------------------------------------------------------
// model-space checks

std::vector<CheckRecord> check_orthonormality(const CheckDef& def, const CheckContext& ctx) {
  const int top = std::min(ctx.degree, 16);
  double worst = 0.0;
  for (int j = 0; j <= top; ++j) {
    for (int k = 0; k <= top; ++k) {
      const Complex v =
          inner(SchwartzFn::basis(MultiIndex{j}, top), SchwartzFn::basis(MultiIndex{k}, top));
      worst = std::max(worst, std::abs(v - Complex(j == k ? 1.0 : 0.0, 0.0)));
    }
  }
  return one(def, worst, 0.0);
}

std::vector<CheckRecord> check_commutator(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(20); ++trial) {
    const int dim = trial % 2 == 0 ? 1 : 2;
    const int deg = dim == 1 ? std::min(ctx.degree, 20) : std::min(ctx.degree, 8);
    const SchwartzFn f = random_fn(rng, dim, deg);
    const SchwartzFn g = random_fn(rng, dim, deg);
    for (int axis = 0; axis < dim; ++axis) {
      const Complex lhs = inner(g, apply_position(apply_momentum(f, axis), axis) -
                                       apply_momentum(apply_position(f, axis), axis));
      const Complex rhs = Complex(0.0, 1.0) * inner(g, f);
      worst = std::max(worst, std::abs(lhs - rhs) / (f.norm() * g.norm()));
    }
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_position_bounds(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(200); ++trial) {
    const int dim = trial % 4 == 3 ? 2 : 1;
    const int deg = dim == 1 ? std::min(ctx.degree, 24) : std::min(ctx.degree, 8);
    const SchwartzFn f = random_fn(rng, dim, deg);
    const double f1 = nuclear_seminorm(f, 1);
    worst = std::max(worst, (f.norm() - f1) / f1);
    for (int axis = 0; axis < dim; ++axis) {
      worst = std::max(worst, (apply_position(f, axis).norm() - f1) / f1);
    }
  }
  return one(def, std::max(0.0, worst), 1e-12);
}

std::vector<CheckRecord> check_seminorm_homogeneity(const CheckDef& def,
                                                    const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 12);
  const GridSpec grid = GridSpec::for_degree(deg + 2, ctx.tol().grid_margin, 2001);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(25); ++trial) {
    const SchwartzFn f = random_fn(rng, 1, deg);
    Complex lambda = rng.complex_normal();
    if (std::abs(lambda) < 1e-3) lambda = Complex(0.7, -0.4);
    const double n2 = nuclear_seminorm(f, 2);
    worst = std::max(worst, std::abs(nuclear_seminorm(lambda * f, 2) - std::abs(lambda) * n2) /
                                std::max(n2, 1e-30));
    const double s = sup_seminorm(f, MultiIndex{1}, MultiIndex{1}, grid, ctx.tol().grid_margin);
    worst = std::max(
        worst, std::abs(sup_seminorm(lambda * f, MultiIndex{1}, MultiIndex{1}, grid,
                                     ctx.tol().grid_margin) -
                        std::abs(lambda) * s) /
                   std::max(s, 1e-30));
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_seminorm_triangle(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 12);
  const GridSpec grid = GridSpec::for_degree(deg + 2, ctx.tol().grid_margin, 2001);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(25); ++trial) {
    const SchwartzFn f = random_fn(rng, 1, deg);
    const SchwartzFn g = random_fn(rng, 1, deg);
    const double rhs_nuc = nuclear_seminorm(f, 2) + nuclear_seminorm(g, 2);
    worst = std::max(worst, (nuclear_seminorm(f + g, 2) - rhs_nuc) / rhs_nuc);
    const double rhs_sup =
        sup_seminorm(f, MultiIndex{1}, MultiIndex{1}, grid, ctx.tol().grid_margin) +
        sup_seminorm(g, MultiIndex{1}, MultiIndex{1}, grid, ctx.tol().grid_margin);
    worst = std::max(worst, (sup_seminorm(f + g, MultiIndex{1}, MultiIndex{1}, grid,
                                          ctx.tol().grid_margin) -
                             rhs_sup) /
                                std::max(rhs_sup, 1e-30));
  }
  return one(def, std::max(0.0, worst), 1e-12);
}

std::vector<CheckRecord> check_sup_convergence(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 16);
  SchwartzFn f = random_fn(rng, 1, deg);
  f = (1.0 / f.norm()) * f;
  const GridSpec dense{GridSpec::for_degree(deg + 2, ctx.tol().grid_margin).half_width,
                       (1 << 19) | 1};
  const double coarse =
      sup_seminorm(f, MultiIndex{1}, MultiIndex{1}, dense, ctx.tol().grid_margin);
  const double fine =
      sup_seminorm(f, MultiIndex{1}, MultiIndex{1}, dense.refined(), ctx.tol().grid_margin);
  return one(def, std::abs(fine - coarse), 1e-8,
             "monotone by nesting; doubling the grid moved the estimate by " +
                 sci(std::abs(fine - coarse)));
}

std::vector<CheckRecord> check_nuclear_routes(const CheckDef& def, const CheckContext&) {
  double worst = 0.0;
  for (int dim : {1, 2}) {
    for (int k = 0; k <= 8; ++k) {
      MultiIndex idx = dim == 1 ? MultiIndex{k} : MultiIndex{k, std::min(k, 3)};
      const SchwartzFn h = SchwartzFn::basis(idx);
      for (int p = 0; p <= 3; ++p) {
        // Operator route: apply (Q^2 + P^2 + 1)^p explicitly.
        SchwartzFn acc = h;
        for (int round = 0; round < p; ++round) {
          SchwartzFn next = acc;
          for (int axis = 0; axis < dim; ++axis) {
            next = next + apply_position(apply_position(acc, axis), axis);
            next = next + apply_momentum(apply_momentum(acc, axis), axis);
          }
          acc = next;
        }
        const double via_ops = std::sqrt(inner(h, acc).real());
        worst = std::max(worst, std::abs(via_ops - nuclear_seminorm(h, p)) /
                                    std::max(via_ops, 1.0));
      }
    }
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_ladder_values(const CheckDef& def, const CheckContext&) {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, 1);
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1}, 1);
  double worst = 0.0;
  worst = std::max(worst, (monomial_multiply(h0, MultiIndex{1}) - kInvSqrt2 * h1.padded_to(2))
                              .norm());
  worst = std::max(worst, std::abs(inner(h0, apply_position(h1, 0)) - Complex(kInvSqrt2, 0)));
  worst = std::max(worst,
                   std::abs(inner(h1, apply_momentum(h0, 0)) - Complex(0.0, kInvSqrt2)));
  worst = std::max(worst,
                   std::abs(inner(h1, derivative(h0, MultiIndex{1})) + Complex(kInvSqrt2, 0)));
  worst = std::max(worst, std::abs(inner(h0, monomial_multiply(h0, MultiIndex{2})) -
                                   Complex(0.5, 0.0)));
  worst = std::max(worst, std::abs(nuclear_seminorm(h0, 1) - kSqrt2));
  return one(def, worst, 1e-14);
}

std::vector<CheckRecord> check_zero_rejection(const CheckDef& def, const CheckContext& ctx) {
  const SchwartzFn zero = SchwartzFn::zero(1, 4);
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, 4);
  int not_rejected = 0;
  const auto expect_throw = [&](const std::function<void()>& op) {
    try {
      op();
      ++not_rejected;
    } catch (const NonzeroRequired&) {
    }
  };
  expect_throw([&] { expectation(zero, PositionAxis{0}, ctx.tol()); });
  expect_throw([&] { position_expectation(zero, ctx.tol()); });
  expect_throw([&] { d_expectation(zero, h0, ctx.tol()); });
  expect_throw([&] { indistinguishable(zero, h0, 1e-9, ctx.tol()); });
  expect_throw([&] { continuity_bound_check(zero, zero, ctx.tol()); });
  expect_throw([&] { project_to_fiber(zero, ctx.tol()); });
  expect_throw([&] { trivialize(zero, ctx.tol()); });
  expect_throw([&] { untrivialize(FiberPoint{{0.0}, zero}, ctx.tol()); });
  return one(def, not_rejected, 0.0);
}

// ---------------------------------------------------------------------------
// expectation checks

std::vector<CheckRecord> check_scale_invariance(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(100); ++trial) {
    const SchwartzFn f = random_fn(rng, 1, std::min(ctx.degree, 16));
    Complex lambda = rng.complex_normal();
    if (std::abs(lambda) < 1e-3) lambda = Complex(1.0, 0.5);
    worst = std::max(worst, inf_dist(position_expectation(f, ctx.tol()).value,
                                     position_expectation(lambda * f, ctx.tol()).value));
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_section_expectation(const CheckDef& def,
                                                   const CheckContext& ctx) {
  double worst = 0.0;
  for (double x = -2.0; x <= 2.0001; x += 0.5) {
    const std::vector<double> center{x};
    const SchwartzFn psi = gaussian_section(center, ctx.degree, ctx.tol());
    worst = std::max(worst,
                     std::abs(position_expectation(psi, ctx.tol()).value[0] - x));
  }
  return one(def, worst, 1e-9);
}

std::vector<CheckRecord> check_section_parity(const CheckDef& def, const CheckContext& ctx) {
  const std::vector<double> origin{0.0};
  const SchwartzFn psi = gaussian_section(origin, ctx.degree | 1, ctx.tol());
  double worst = 0.0;
  for (int k = 1; k <= psi.degree(); k += 2) {
    worst = std::max(worst, std::abs(psi.coeff(MultiIndex{k})));
  }
  return one(def, worst, 1e-14);
}

std::vector<CheckRecord> check_section_leading(const CheckDef& def, const CheckContext& ctx) {
  const std::vector<double> origin{0.0};
  const SchwartzFn psi = gaussian_section(origin, std::max(ctx.degree, 24), ctx.tol());
  return one(def, std::abs(psi.coeff(MultiIndex{0}).real() - kSectionC0), 1e-12);
}

std::vector<CheckRecord> check_dq_values(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const SchwartzFn f0 = random_fn(rng, 1, std::min(ctx.degree, 16));
  double worst = inf_norm(d_expectation(f0, f0, ctx.tol()));
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, 1);
  const SchwartzFn h1 = SchwartzFn::basis(MultiIndex{1}, 1);
  worst = std::max(worst, std::abs(d_expectation(h0, h1, ctx.tol())[0] - kSqrt2));
  return one(def, worst, 1e-13);
}

std::vector<CheckRecord> check_dq_fd(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const double t = 1e-5;
  const int deg = std::min(ctx.degree, 16);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(100); ++trial) {
    const SchwartzFn f0 = random_fn(rng, 1, deg);
    const SchwartzFn f = random_fn(rng, 1, deg);
    const double analytic = d_expectation(f0, f, ctx.tol())[0];
    const double plus = expectation(f0 + t * f, PositionAxis{0}, ctx.tol());
    const double minus = expectation(f0 - t * f, PositionAxis{0}, ctx.tol());
    const double fd = (plus - minus) / (2.0 * t);
    worst = std::max(worst, std::abs(fd - analytic) / std::max(std::abs(analytic), 1e-2));
  }
  return one(def, worst, 1e-6);
}

std::vector<CheckRecord> check_dq_linearity(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 16);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(25); ++trial) {
    const SchwartzFn f0 = random_fn(rng, 1, deg);
    const SchwartzFn f = random_fn(rng, 1, deg);
    const SchwartzFn g = random_fn(rng, 1, deg);
    const double a = rng.normal();
    const double b = rng.normal();
    const double lhs = d_expectation(f0, a * f + b * g, ctx.tol())[0];
    const double rhs = a * d_expectation(f0, f, ctx.tol())[0] +
                       b * d_expectation(f0, g, ctx.tol())[0];
    worst = std::max(worst, std::abs(lhs - rhs) / (1.0 + std::abs(lhs)));
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_dq_slope(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const auto grid = default_t_grid();
  const int deg = std::min(ctx.degree, 16);
  double min_slope = 10.0;
  for (int trial = 0; trial < ctx.samples(20); ++trial) {
    const SchwartzFn f0 = random_fn(rng, 1, deg);
    const SchwartzFn f = random_fn(rng, 1, deg);
    const auto d = d_expectation(f0, f, ctx.tol());
    const double base = expectation(f0, PositionAxis{0}, ctx.tol());
    const auto report = tangent_slope(
        [&](double t) {
          return std::abs(expectation(f0 + t * f, PositionAxis{0}, ctx.tol()) - base -
                          t * d[0]);
        },
        grid);
    if (!report.vacuous) min_slope = std::min(min_slope, report.fitted_slope);
  }
  return one(def, 1.9 - min_slope, 0.0,
             "min remainder slope = " + std::to_string(min_slope) + " (need >= 1.9)");
}

std::vector<CheckRecord> check_continuity_bound(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 32);
  int violations = 0;
  double closest = 1e300;
  const int total = ctx.samples(500);
  for (int trial = 0; trial < total; ++trial) {
    const SchwartzFn f0 = random_fn(rng, 1, deg);
    SchwartzFn f = random_fn(rng, 1, deg);
    const double frac = trial == 0 ? 0.49 : rng.uniform(0.02, 0.49);  // boundary probe first
    f = (frac * f0.norm() / f.norm()) * f;
    const BoundCheck chk = continuity_bound_check(f0, f, ctx.tol());
    violations += chk.holds ? 0 : 1;
    if (chk.rhs > 0.0) closest = std::min(closest, (chk.rhs - chk.lhs) / chk.rhs);
  }
  return one(def, violations, 0.0,
             "tightest relative margin = " + sci(closest) + " over " +
                 std::to_string(total) + " pairs");
}

std::vector<CheckRecord> check_indist_relation(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const double tol = ctx.tol().indist;
  int violations = 0;
  for (int trial = 0; trial < ctx.samples(50); ++trial) {
    const SchwartzFn a = random_fn(rng, 1, std::min(ctx.degree, 12));
    if (!indistinguishable(a, a, tol, ctx.tol())) ++violations;  // reflexive
    Complex lambda = rng.complex_normal();
    if (std::abs(lambda) < 1e-3) lambda = Complex(0.0, 1.3);
    const SchwartzFn b = lambda * a;
    if (indistinguishable(a, b, tol, ctx.tol()) != indistinguishable(b, a, tol, ctx.tol())) {
      ++violations;  // symmetric
    }
    const SchwartzFn c = Complex(-2.0, 0.7) * b;
    if (indistinguishable(a, b, tol, ctx.tol()) && indistinguishable(b, c, tol, ctx.tol()) &&
        !indistinguishable(a, c, 2.0 * tol, ctx.tol())) {
      ++violations;  // transitive up to doubling
    }
  }
  // Distinguishable representatives must be told apart.
  const std::vector<double> zero{0.0}, one_v{1.0};
  if (indistinguishable(gaussian_section(zero, ctx.degree, ctx.tol()),
                        gaussian_section(one_v, ctx.degree, ctx.tol()), tol, ctx.tol())) {
    ++violations;
  }
  return one(def, violations, 0.0);
}

std::vector<CheckRecord> check_linear_remainder_rejected(const CheckDef& def,
                                                         const CheckContext&) {
  const auto report = tangent_slope([](double t) { return 0.37 * t; }, default_t_grid());
  const bool rejected = report.fitted_slope < 1.9;
  return one(def, std::abs(report.fitted_slope - 1.0) + (rejected ? 0.0 : 1.0), 0.05,
             "linear map fitted slope = " + std::to_string(report.fitted_slope));
}

// ---------------------------------------------------------------------------
// translation checks

std::vector<CheckRecord> check_expectation_shift(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(100); ++trial) {
    const SchwartzFn f = random_fn(rng, 1, ctx.degree);
    const std::vector<double> x{rng.uniform(-1.0, 1.0)};
    const double before = position_expectation(f, ctx.tol()).value[0];
    const double after = position_expectation(
        translate(f, x, TranslationConfig::from(ctx.tol())), ctx.tol()).value[0];
    worst = std::max(worst, std::abs(after - before - x[0]));
  }
  return one(def, worst, 1e-9);
}

std::vector<CheckRecord> check_pointwise_definition(const CheckDef& def,
                                                    const CheckContext& ctx) {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, ctx.degree);
  const std::vector<double> shift{1.0};
  const SchwartzFn moved = translate(h0, shift, TranslationConfig::from(ctx.tol()));
  const SchwartzFn h0_small = SchwartzFn::basis(MultiIndex{0});
  double worst = 0.0;
  for (int i = 0; i <= 40; ++i) {
    const double y = -4.0 + 8.0 * i / 40.0;
    const Complex got = evaluate(moved, std::vector<double>{y});
    const Complex expected = evaluate(h0_small, std::vector<double>{y - 1.0});
    worst = std::max(worst, std::abs(got - expected));
  }
  return one(def, worst, 1e-9);
}

std::vector<CheckRecord> check_group_law(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const TranslationConfig tr = TranslationConfig::from(ctx.tol());
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(10); ++trial) {
    const SchwartzFn f = gaussian_like(rng, ctx.degree, ctx.tol());
    const std::vector<double> x{rng.uniform(-1.0, 1.0)};
    const std::vector<double> y{rng.uniform(-1.0, 1.0)};
    worst = std::max(worst, verify_translation_group(f, x, y, tr));
  }
  return one(def, worst, 1e-8);
}

std::vector<CheckRecord> check_inverse_law(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const TranslationConfig tr = TranslationConfig::from(ctx.tol());
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(10); ++trial) {
    const SchwartzFn f = gaussian_like(rng, ctx.degree, ctx.tol());
    const std::vector<double> x{rng.uniform(-1.0, 1.0)};
    const std::vector<double> minus_x{-x[0]};
    worst = std::max(worst, verify_translation_group(f, x, minus_x, tr));
  }
  return one(def, worst, 1e-9);
}

std::vector<CheckRecord> check_translation_linearity(const CheckDef& def,
                                                     const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const TranslationConfig tr = TranslationConfig::from(ctx.tol());
  const int deg = std::min(ctx.degree, 24);
  const SchwartzFn f = random_fn(rng, 1, deg);
  const SchwartzFn g = random_fn(rng, 1, deg);
  const std::vector<double> x{0.7};
  double worst = verify_translation_linearity(f, g, Complex(0.0, 1.0), x, tr);
  for (int trial = 0; trial < 5; ++trial) {
    const Complex lambda = rng.complex_normal();
    worst = std::max(worst, verify_translation_linearity(f, g, lambda, x, tr) /
                                (1.0 + std::abs(lambda)));
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_unitarity_defect(const CheckDef& def, const CheckContext& ctx) {
  const TranslationConfig tr = TranslationConfig::from(ctx.tol());
  double worst = 0.0;
  for (double x : {0.25, 0.5, 1.0, 1.5, 2.0}) {
    const std::vector<double> shift{x};
    const TranslationPlan plan = TranslationPlan::make(1, ctx.degree, shift, tr);
    worst = std::max(worst, plan.unitarity_defect());
  }
  return one(def, worst, ctx.tol().translation,
             "largest certificate over shifts up to 2.0");
}

std::vector<CheckRecord> check_shift_two_budget(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const SchwartzFn f = gaussian_like(rng, ctx.degree, ctx.tol());
  const std::vector<double> two{2.0};
  const double before = position_expectation(f, ctx.tol()).value[0];
  const SchwartzFn moved = translate(f, two, TranslationConfig::from(ctx.tol()));
  const double after = position_expectation(moved, ctx.tol()).value[0];
  return one(def, std::abs(after - before - 2.0), 1e-9);
}

std::vector<CheckRecord> check_translation_modulus(const CheckDef& def,
                                                   const CheckContext& ctx) {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, std::min(ctx.degree, 32));
  const std::vector<double> x0{0.0};
  const std::vector<double> radii{1e-1, 1e-2, 1e-3, 1e-4};
  const ModulusRecord record =
      translation_continuity_probe(h0, x0, radii, TranslationConfig::from(ctx.tol()));
  return one(def, 0.95 - record.slope, 0.0,
             "modulus slope = " + std::to_string(record.slope) + " (need >= 0.95)");
}

std::vector<CheckRecord> check_injectivity(const CheckDef& def, const CheckContext& ctx) {
  const SchwartzFn h0 = SchwartzFn::basis(MultiIndex{0}, std::min(ctx.degree, 32));
  const TranslationConfig tr = TranslationConfig::from(ctx.tol());
  const std::vector<double> a{0.1}, b{0.2};
  const double gap = (translate(h0, a, tr) - translate(h0, b, tr)).norm();
  return one(def, std::max(0.0, 1e-6 - gap), 0.0, "separation = " + sci(gap));
}

std::vector<CheckRecord> check_joint_continuity(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const TranslationConfig tr = TranslationConfig::from(ctx.tol());
  const int deg = std::min(ctx.degree, 32);
  const SchwartzFn f0 = gaussian_like(rng, deg, ctx.tol());
  const SchwartzFn dir = random_fn(rng, 1, deg);
  const std::vector<double> x0{0.3};
  const SchwartzFn base = translate(f0, x0, tr);

  int violations = 0;
  double prev_shift_term = 1e300;
  double prev_fn_term = 1e300;
  double final_shift = 0.0, final_fn = 0.0;
  for (double r : {1e-1, 1e-2, 1e-3}) {
    const std::vector<double> xr{x0[0] + r};
    const double shift_term = nuclear_seminorm(translate(f0, xr, tr) - base, 1);
    const SchwartzFn fr = f0 + (r / dir.norm()) * dir;
    const double fn_term =
        nuclear_seminorm(translate(fr, xr, tr) - translate(f0, xr, tr), 1);
    if (!(shift_term < prev_shift_term)) ++violations;
    if (!(fn_term < prev_fn_term)) ++violations;
    prev_shift_term = shift_term;
    prev_fn_term = fn_term;
    final_shift = shift_term;
    final_fn = fn_term;
  }
  if (!(final_shift < 1e-2 && final_fn < 1e-2)) ++violations;
  return one(def, violations, 0.0,
             "two-term split moduli at r=1e-3: " + sci(final_shift) + ", " + sci(final_fn));
}

// ---------------------------------------------------------------------------
// bundle checks

std::vector<CheckRecord> check_fiber_invariance(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(25); ++trial) {
    const SchwartzFn f = gaussian_like(rng, ctx.degree, ctx.tol());
    worst = std::max(worst,
                     inf_norm(position_expectation(project_to_fiber(f, ctx.tol()), ctx.tol())
                                  .value));
  }
  return one(def, worst, ctx.tol().fiber);
}

std::vector<CheckRecord> check_projection_idempotence(const CheckDef& def,
                                                      const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(10); ++trial) {
    const SchwartzFn f = gaussian_like(rng, ctx.degree, ctx.tol());
    const SchwartzFn once = project_to_fiber(f, ctx.tol());
    worst = std::max(worst, (project_to_fiber(once, ctx.tol()) - once).norm());
  }
  return one(def, worst, 1e-9);
}

std::vector<CheckRecord> check_section_projection(const CheckDef& def,
                                                  const CheckContext& ctx) {
  // The comparison is at 1e-9 in L2, so the probe sections must keep
  // their truncation tails an order below that amplitude.
  Tolerances tight = ctx.tol();
  tight.section = std::min(tight.section, 1e-20);
  const std::vector<double> x{1.2}, origin{0.0};
  const SchwartzFn fiber =
      project_to_fiber(gaussian_section_auto(x, ctx.degree, tight), ctx.tol());
  const SchwartzFn psi0 = gaussian_section_auto(origin, ctx.degree, tight);
  return one(def, (fiber - psi0.padded_to(fiber.degree())).norm(), 1e-9);
}

std::vector<CheckRecord> check_tau_round_trips(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(200); ++trial) {
    const SchwartzFn f = gaussian_like(rng, ctx.degree, ctx.tol());
    const FiberPoint p = trivialize(f, ctx.tol());
    const SchwartzFn back = untrivialize(p, ctx.tol());
    worst = std::max(worst, (back - f).norm());
    const FiberPoint again = trivialize(back, ctx.tol());
    worst = std::max(worst, inf_dist(again.base, p.base));
    worst = std::max(worst, (again.fiber - p.fiber).norm());
  }
  return one(def, worst, 1e-8);
}

std::vector<CheckRecord> check_dtau_linearity(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 24);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(5); ++trial) {
    const SchwartzFn f0 = gaussian_like(rng, deg, ctx.tol());
    const SchwartzFn g1 = random_fn(rng, 1, deg);
    const SchwartzFn g2 = random_fn(rng, 1, deg);
    const double a = rng.normal(), b = rng.normal();
    const ProductDirection lhs = d_trivialize(f0, a * g1 + b * g2, ctx.tol());
    const ProductDirection d1 = d_trivialize(f0, g1, ctx.tol());
    const ProductDirection d2 = d_trivialize(f0, g2, ctx.tol());
    std::vector<double> base_diff(lhs.base.size());
    for (std::size_t i = 0; i < base_diff.size(); ++i) {
      base_diff[i] = lhs.base[i] - (a * d1.base[i] + b * d2.base[i]);
    }
    const SchwartzFn fiber_diff = lhs.fiber - (a * d1.fiber + b * d2.fiber);
    worst = std::max(worst, product_norm(base_diff, fiber_diff) /
                                (1.0 + product_norm(lhs.base, lhs.fiber)));

    // Inverse-map linearity on admissible directions.
    const FiberPoint p = trivialize(f0, ctx.tol());
    const SchwartzFn w1 = d_trivialize(f0, g1, ctx.tol()).fiber;
    const SchwartzFn w2 = d_trivialize(f0, g2, ctx.tol()).fiber;
    const std::vector<double> dx1{d1.base}, dx2{d2.base};
    std::vector<double> dx_sum(dx1.size());
    for (std::size_t i = 0; i < dx1.size(); ++i) dx_sum[i] = a * dx1[i] + b * dx2[i];
    const SchwartzFn inv_lhs =
        d_untrivialize(p.base, p.fiber, dx_sum, a * w1 + b * w2, ctx.tol());
    const SchwartzFn inv_rhs = a * d_untrivialize(p.base, p.fiber, dx1, w1, ctx.tol()) +
                               b * d_untrivialize(p.base, p.fiber, dx2, w2, ctx.tol());
    worst = std::max(worst, (inv_lhs - inv_rhs).norm() / (1.0 + inv_lhs.norm()));
  }
  return one(def, worst, 1e-12);
}

std::vector<CheckRecord> check_dtau_fd(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 32);
  const double t = 1e-4;
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(10); ++trial) {
    const SchwartzFn f0 = gaussian_like(rng, deg, ctx.tol());
    SchwartzFn g = random_fn(rng, 1, deg);
    g = (1.0 / g.norm()) * g;
    const ProductDirection d = d_trivialize(f0, g, ctx.tol());
    const FiberPoint plus = trivialize(f0 + t * g, ctx.tol());
    const FiberPoint minus = trivialize(f0 - t * g, ctx.tol());
    std::vector<double> base_diff(d.base.size());
    for (std::size_t i = 0; i < base_diff.size(); ++i) {
      base_diff[i] = (plus.base[i] - minus.base[i]) / (2.0 * t) - d.base[i];
    }
    const SchwartzFn fiber_diff = (0.5 / t) * (plus.fiber - minus.fiber) - d.fiber;
    worst = std::max(worst, product_norm(base_diff, fiber_diff) /
                                std::max(product_norm(d.base, d.fiber), 1e-2));
  }
  return one(def, worst, 1e-5);
}

std::vector<CheckRecord> check_dtau_slope(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const auto grid = default_t_grid();
  const int deg = std::min(ctx.degree, 32);
  double min_slope = 10.0;
  for (int trial = 0; trial < ctx.samples(20); ++trial) {
    const SchwartzFn f0 = gaussian_like(rng, deg, ctx.tol());
    SchwartzFn g = random_fn(rng, 1, deg);
    g = (1.0 / g.norm()) * g;
    const ProductDirection d = d_trivialize(f0, g, ctx.tol());
    const FiberPoint at_f0 = trivialize(f0, ctx.tol());
    const auto report = tangent_slope(
        [&](double t) {
          const FiberPoint moved = trivialize(f0 + t * g, ctx.tol());
          std::vector<double> db(moved.base.size());
          for (std::size_t i = 0; i < db.size(); ++i) {
            db[i] = moved.base[i] - at_f0.base[i] - t * d.base[i];
          }
          return product_norm(db, moved.fiber - at_f0.fiber - t * d.fiber);
        },
        grid);
    if (!report.vacuous) min_slope = std::min(min_slope, report.fitted_slope);
  }
  return one(def, 1.9 - min_slope, 0.0,
             "min remainder slope = " + std::to_string(min_slope) + " (need >= 1.9)");
}

std::vector<CheckRecord> check_dtauinv_slope(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const auto grid = default_t_grid();
  const int deg = std::min(ctx.degree, 32);
  double min_slope = 10.0;
  for (int trial = 0; trial < ctx.samples(20); ++trial) {
    const SchwartzFn f0 = gaussian_like(rng, deg, ctx.tol());
    const FiberPoint p = trivialize(f0, ctx.tol());
    // Admissible function direction: take the fiber part of Dtau.
    SchwartzFn g = random_fn(rng, 1, deg);
    g = (1.0 / g.norm()) * g;
    const SchwartzFn w = d_trivialize(f0, g, ctx.tol()).fiber;
    const std::vector<double> dx{rng.uniform(-1.0, 1.0)};
    const SchwartzFn lin = d_untrivialize(p.base, p.fiber, dx, w, ctx.tol());
    const SchwartzFn base_fn = untrivialize(p, ctx.tol());
    const auto report = tangent_slope(
        [&](double t) {
          std::vector<double> xt(p.base.size());
          for (std::size_t i = 0; i < xt.size(); ++i) xt[i] = p.base[i] + t * dx[i];
          const SchwartzFn moved = translate(p.fiber + t * w, std::span<const double>(xt),
                                             TranslationConfig::from(ctx.tol()));
          return (moved - base_fn - t * lin).norm();
        },
        grid);
    if (!report.vacuous) min_slope = std::min(min_slope, report.fitted_slope);
  }
  return one(def, 1.9 - min_slope, 0.0,
             "min remainder slope = " + std::to_string(min_slope) + " (need >= 1.9)");
}

std::vector<CheckRecord> check_mutual_inverse(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const int deg = std::min(ctx.degree, 32);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(10); ++trial) {
    const SchwartzFn f0 = gaussian_like(rng, deg, ctx.tol());
    SchwartzFn g = random_fn(rng, 1, deg);
    g = (1.0 / g.norm()) * g;
    const FiberPoint p = trivialize(f0, ctx.tol());
    const ProductDirection d = d_trivialize(f0, g, ctx.tol());
    const SchwartzFn back = d_untrivialize(p.base, p.fiber, d.base, d.fiber, ctx.tol());
    worst = std::max(worst, (back - g.padded_to(back.degree())).norm());
  }
  return one(def, worst, 1e-7);
}

std::vector<CheckRecord> check_direction_guard(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const SchwartzFn g0 =
      project_to_fiber(gaussian_like(rng, std::min(ctx.degree, 32), ctx.tol()), ctx.tol());
  const SchwartzFn bad = apply_position(g0, 0).truncated_to(g0.degree());
  const std::vector<double> x0{0.4}, dx{0.0};
  int failures = 0;
  try {
    d_untrivialize(x0, g0, dx, bad, ctx.tol());
    ++failures;
  } catch (const DirectionNotTangent&) {
  }
  return one(def, failures, 0.0);
}

// ---------------------------------------------------------------------------
// atlas checks

// Builds the test manifold, honoring a declarative description when the
// run's config carries one for this manifold kind.
ClassicalAtlas suite_atlas(const CheckContext& ctx, const std::string& kind) {
  const nlohmann::json& spec = ctx.cfg->manifold_spec;
  const bool described = spec.is_object() && spec.value("kind", "") == kind;
  if (kind == "euclidean") {
    EuclideanSpec es{.n = 2};
    if (described) {
      es.n = spec.value("n", es.n);
      es.half_width = spec.value("half_width", es.half_width);
      es.sample_radius = spec.value("sample_radius", es.sample_radius);
    }
    return make_classical_atlas(es);
  }
  if (kind == "circle") {
    CircleSpec cs;
    if (described) {
      cs.scale = spec.value("scale", cs.scale);
      cs.rotation = spec.value("rotation", cs.rotation);
      cs.with_rotated_copy = spec.value("with_rotated_copy", cs.with_rotated_copy);
      cs.copy_rotation = spec.value("copy_rotation", cs.copy_rotation);
    }
    return make_classical_atlas(cs);
  }
  throw ConfigError("unknown manifold '" + kind + "' (expected euclidean or circle)");
}

QuantizationConfig suite_quantization(const CheckContext& ctx) {
  QuantizationConfig qc;
  qc.degree = ctx.degree;
  qc.tol = ctx.tol();
  if (ctx.cfg->manifold_spec.is_object()) {
    qc.max_shift = ctx.cfg->manifold_spec.value("max_shift", qc.max_shift);
  }
  return qc;
}

std::vector<CheckRecord> check_classical_round_trips(const CheckDef& def,
                                                     const CheckContext& ctx,
                                                     const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, kind);
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(64); ++trial) {
    const ManifoldPoint p = ca.sample(rng);
    for (int i = 0; i < ca.chart_count(); ++i) {
      if (!ca.chart(i).contains(p)) continue;
      const auto u = ca.chart(i).map(p);
      worst = std::max(worst, ca.distance(ca.chart(i).inverse(u), p));
      if (!ca.chart(i).image.contains(u)) worst = std::max(worst, 1.0);
    }
  }
  return one(def, worst, ctx.tol().point);
}

std::vector<CheckRecord> check_circle_branches(const CheckDef& def, const CheckContext&) {
  const ClassicalAtlas ca = make_classical_atlas(CircleSpec{.scale = 1.0});
  double worst = 0.0;
  const std::vector<double> u1{kPi / 2.0};
  worst = std::max(worst, std::abs(ca.transition(0, 1, u1)[0] - kPi / 2.0));
  const std::vector<double> u2{-kPi / 2.0};
  worst = std::max(worst, std::abs(ca.transition(0, 1, u2)[0] - 3.0 * kPi / 2.0));
  const std::vector<double> u3{0.4};
  worst = std::max(worst, std::abs(ca.transition(1, 0, u3)[0] - 0.4));
  return one(def, worst, 1e-14);
}

std::vector<CheckRecord> check_atlas_conditions(const CheckDef& def, const CheckContext& ctx,
                                                const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const QuantumAtlas qa = trivial_quantization(suite_atlas(ctx, kind), suite_quantization(ctx));
  return verify_quantum_atlas(qa, ctx.samples(32), rng);
}

std::vector<CheckRecord> check_phi_round_trip(const CheckDef& def, const CheckContext& ctx,
                                              const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, kind);
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  double worst = 0.0;
  for (int trial = 0; trial < ctx.samples(16); ++trial) {
    for (int i = 0; i < ca.chart_count(); ++i) {
      ManifoldPoint xi = ca.sample(rng);
      while (!ca.chart(i).contains(xi)) xi = ca.sample(rng);
      const SchwartzFn g = sample_fiber_element(rng, ca.dim(), ctx.degree, ctx.tol());
      const SchwartzFn f = qa.phi(i, QuantumPoint{xi, g});
      // Expectation of the image equals the chart value.
      worst = std::max(worst, inf_dist(position_expectation(f, ctx.tol()).value,
                                       ca.chart(i).map(xi)));
      const QuantumPoint back = qa.phi_inverse(i, f);
      worst = std::max(worst, ca.distance(back.base, xi));
      worst = std::max(worst, (back.fiber - g).norm());
    }
  }
  return one(def, worst, ctx.tol().chart);
}

std::vector<CheckRecord> check_transition_recovery(const CheckDef& def,
                                                   const CheckContext& ctx,
                                                   const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, kind);
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  double worst = 0.0;
  const int total = ctx.samples(64);
  if (ca.chart_count() == 1) {
    for (int s = 0; s < total; ++s) {
      const ManifoldPoint xi = ca.sample(rng);
      const auto u = ca.chart(0).map(xi);
      worst = std::max(worst, inf_dist(recover_classical_transition(qa, 0, 0, u), u));
    }
    return one(def, worst, 1e-9);
  }
  for (int s = 0; s < total; ++s) {
    const int i = s % 2 == 0 ? 0 : 1;
    const int j = 1 - i;
    const ManifoldPoint xi = sample_in_overlap(ca, i, j, rng);
    const auto u = ca.chart(i).map(xi);
    if (!ca.overlap_image(i, j).contains(u)) continue;
    const auto recovered = recover_classical_transition(qa, i, j, u);
    const auto closed_form = ca.transition(i, j, u);
    worst = std::max(worst, inf_dist(recovered, closed_form));
  }
  return one(def, worst, 1e-7);
}

std::vector<CheckRecord> check_equivariance(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, "circle");
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  double worst = 0.0;
  for (int s = 0; s < ctx.samples(16); ++s) {
    const int i = s % 2 == 0 ? 0 : 1;
    const int j = 1 - i;
    const ManifoldPoint xi = sample_in_overlap(ca, i, j, rng);
    const SchwartzFn g = sample_fiber_element(rng, 1, ctx.degree, ctx.tol());
    const SchwartzFn f = qa.phi(i, QuantumPoint{xi, g});
    const auto q = position_expectation(f, ctx.tol()).value;
    if (!ca.overlap_image(i, j).contains(q)) continue;
    const SchwartzFn moved = quantum_transition(qa, i, j, f);
    worst = std::max(worst, inf_dist(position_expectation(moved, ctx.tol()).value,
                                     ca.transition(i, j, q)));
  }
  return one(def, worst, 1e-8);
}

std::vector<CheckRecord> check_identity_region(const CheckDef& def, const CheckContext& ctx) {
  const ClassicalAtlas ca = suite_atlas(ctx, "circle");
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  // Probe the overlap component on which the transition is the identity.
  double u_mid = 0.0;
  bool found = false;
  for (const Box& component : ca.overlap_image(0, 1).boxes) {
    const double candidate = component.axes[0].midpoint();
    const std::vector<double> u{candidate};
    if (std::abs(ca.transition(0, 1, u)[0] - candidate) < 1e-12) {
      u_mid = candidate;
      found = true;
      break;
    }
  }
  if (!found) return one(def, 1.0, 0.0, "no identity branch in the overlap");
  const std::vector<double> u{u_mid};
  Tolerances tight = ctx.tol();
  tight.section = std::min(tight.section, 1e-20);
  const SchwartzFn f = gaussian_section_auto(u, ctx.degree, tight);
  const SchwartzFn moved = quantum_transition(qa, 0, 1, f);
  return one(def, (moved - f.padded_to(moved.degree())).norm(), 1e-8);
}

std::vector<CheckRecord> check_functoriality(const CheckDef& def, const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, "circle");
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  double worst = 0.0;
  for (int s = 0; s < ctx.samples(8); ++s) {
    const ManifoldPoint xi = sample_in_overlap(ca, 0, 1, rng);
    const SchwartzFn g = sample_fiber_element(rng, 1, ctx.degree, ctx.tol());
    const SchwartzFn f = qa.phi(0, QuantumPoint{xi, g});
    const auto q = position_expectation(f, ctx.tol()).value;
    if (!ca.overlap_image(0, 1).contains(q)) continue;
    const SchwartzFn there = quantum_transition(qa, 0, 1, f);
    const SchwartzFn back = quantum_transition(qa, 1, 0, there);
    worst = std::max(worst, (back - f.padded_to(back.degree())).norm());
  }
  return one(def, worst, 2.0 * ctx.tol().chart);
}

std::vector<CheckRecord> check_overlap_rejection(const CheckDef& def, const CheckContext& ctx) {
  const ClassicalAtlas ca = suite_atlas(ctx, "circle");
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  int failures = 0;
  // An expectation value beyond chart 0's image cannot be in the overlap.
  const Interval image = ca.chart(0).image.boxes[0].axes[0];
  const std::vector<double> outside{image.hi + 0.1 * image.width()};
  Tolerances loose = ctx.tol();
  loose.section = 1.0;
  try {
    quantum_transition(qa, 0, 1, gaussian_section_auto(outside, ctx.degree, loose));
    ++failures;
  } catch (const SampleOutsideChart&) {
  }
  // The split of the overlap region is the image of chart 1's excluded
  // point; that point is not chartable in chart 1.
  const double split = ca.overlap_image(0, 1).boxes[0].axes[0].hi;
  const ManifoldPoint cut_point = ca.chart(0).inverse(std::vector<double>{split});
  try {
    qa.phi(1, QuantumPoint{cut_point, SchwartzFn::basis(MultiIndex{1}, ctx.degree)});
    ++failures;
  } catch (const SampleOutsideChart&) {
  }
  return one(def, failures, 0.0);
}

std::vector<CheckRecord> check_corruption_detected(const CheckDef& def,
                                                   const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas circle = suite_atlas(ctx, "circle");
  // Step placed at an overlap-component midpoint, where the continuity
  // probe is guaranteed to look.
  const Interval component = circle.overlap_image(0, 1).boxes.back().axes[0];
  const ClassicalAtlas bad =
      with_step_corruption(circle, 0, 1, component.midpoint(), 0.25 * component.width());
  const QuantumAtlas qa = trivial_quantization(bad, suite_quantization(ctx));
  const auto records = verify_quantum_atlas(qa, ctx.samples(16), rng);
  bool continuity_failed = false;
  for (const auto& r : records) {
    if (r.id == "condition-iv-continuity") continuity_failed = r.status == CheckStatus::fail;
  }
  return one(def, continuity_failed ? 0 : 1, 0.0,
             "the continuity probe must flag the corrupted transition");
}

std::vector<CheckRecord> check_local_triviality(const CheckDef& def, const CheckContext& ctx,
                                                const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const QuantumAtlas qa = trivial_quantization(suite_atlas(ctx, kind), suite_quantization(ctx));
  std::vector<CheckRecord> all;
  for (int chart = 0; chart < qa.chart_count(); ++chart) {
    for (auto& r : verify_local_triviality(qa, chart, ctx.samples(64), rng)) {
      all.push_back(std::move(r));
    }
  }
  return all;
}

std::vector<CheckRecord> check_kolmogorov(const CheckDef& def, const CheckContext& ctx,
                                          const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, kind);
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  double worst = 0.0;
  for (int s = 0; s < ctx.samples(16); ++s) {
    ManifoldPoint xi = ca.sample(rng);
    while (!ca.chart(0).contains(xi)) xi = ca.sample(rng);
    const SchwartzFn g = sample_fiber_element(rng, ca.dim(), ctx.degree, ctx.tol());
    const ManifoldPoint projected = kolmogorov_project(qa, 0, QuantumPoint{xi, g});
    worst = std::max(worst, ca.distance(projected, xi));
    if (ca.chart_count() > 1 && ca.chart(1).contains(xi)) {
      // Chart independence is required within twice the point tolerance.
      const ManifoldPoint via1 = kolmogorov_project(qa, 1, QuantumPoint{xi, g});
      worst = std::max(worst, 0.5 * ca.distance(projected, via1));
    }
  }
  return one(def, worst, ctx.tol().point);
}

std::vector<CheckRecord> check_indist_fibers(const CheckDef& def, const CheckContext& ctx,
                                             const std::string& kind) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas ca = suite_atlas(ctx, kind);
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  int mismatches = 0;
  for (int s = 0; s < ctx.samples(12); ++s) {
    ManifoldPoint xi = ca.sample(rng);
    while (!ca.chart(0).contains(xi)) xi = ca.sample(rng);
    const SchwartzFn g1 = sample_fiber_element(rng, ca.dim(), ctx.degree, ctx.tol());
    const SchwartzFn g2 = sample_fiber_element(rng, ca.dim(), ctx.degree, ctx.tol());

    // Same base, different fiber: same projection, indistinguishable images.
    const SchwartzFn f1 = qa.phi(0, QuantumPoint{xi, g1});
    const SchwartzFn f2 = qa.phi(0, QuantumPoint{xi, g2});
    const bool same_class = indistinguishable(f1, f2, 10.0 * ctx.tol().indist, ctx.tol());
    const double proj_gap = ca.distance(kolmogorov_project(qa, 0, QuantumPoint{xi, g1}),
                                        kolmogorov_project(qa, 0, QuantumPoint{xi, g2}));
    if (!same_class || proj_gap > ctx.tol().point) ++mismatches;

    // Separated bases: distinguishable images, distinct projections.
    ManifoldPoint eta = ca.sample(rng);
    while (!ca.chart(0).contains(eta) || ca.distance(eta, xi) < 0.05) eta = ca.sample(rng);
    const SchwartzFn f3 = qa.phi(0, QuantumPoint{eta, g1});
    const bool separated = !indistinguishable(f1, f3, 10.0 * ctx.tol().indist, ctx.tol());
    const double gap = ca.distance(kolmogorov_project(qa, 0, QuantumPoint{xi, g1}),
                                   kolmogorov_project(qa, 0, QuantumPoint{eta, g1}));
    if (!separated || gap < 0.01) ++mismatches;
  }
  return one(def, mismatches, 0.0);
}

std::vector<CheckRecord> check_compatibility_union(const CheckDef& def,
                                                   const CheckContext& ctx) {
  Rng rng = ctx.rng(def.id);
  const ClassicalAtlas joined = make_classical_atlas(CircleSpec{.with_rotated_copy = true});
  const QuantumAtlas qa = trivial_quantization(joined, suite_quantization(ctx));
  const auto records = verify_quantum_atlas(qa, std::max(8, ctx.samples(16) / 2), rng);
  int failures = 0;
  std::string failed;
  for (const auto& r : records) {
    if (r.status == CheckStatus::fail) {
      ++failures;
      failed += (failed.empty() ? "" : ", ") + r.id;
    }
  }
  return one(def, failures, 0.0,
             failures == 0 ? "union of the atlas with a rotated copy verifies"
                           : "failing: " + failed);
}

std::vector<CheckRecord> check_zero_fiber(const CheckDef& def, const CheckContext& ctx,
                                          const std::string& kind) {
  const ClassicalAtlas ca = suite_atlas(ctx, kind);
  const QuantumAtlas qa = trivial_quantization(ca, suite_quantization(ctx));
  Rng rng = ctx.rng(def.id);
  ManifoldPoint xi = ca.sample(rng);
  while (!ca.chart(0).contains(xi)) xi = ca.sample(rng);
  int failures = 0;
  try {
    qa.phi(0, QuantumPoint{xi, SchwartzFn::zero(ca.dim(), ctx.degree)});
    ++failures;
  } catch (const NonzeroRequired&) {
  }
  return one(def, failures, 0.0);
}

// ---------------------------------------------------------------------------
// registry

int suite_default_degree(const std::string& suite) {
  static const std::map<std::string, int> defaults = {
      {"model-space", 32},  {"expectation", 48},    {"translation", 48},
      {"bundle", 48},       {"atlas-euclidean", 16}, {"atlas-circle", 48},
      {"appendix-b", 32},
  };
  const auto it = defaults.find(suite);
  return it == defaults.end() ? 32 : it->second;
}

// Binds a CheckDef-aware body into a plain CheckFn.
template <typename Body>
CheckDef def(std::string suite, std::string id, std::string anchor, Body body) {
  CheckDef d{std::move(suite), std::move(id), std::move(anchor), nullptr};
  const CheckDef meta = d;  // body only reads id and anchor
  d.fn = [meta, body](const CheckContext& ctx) { return body(meta, ctx); };
  return d;
}

const std::vector<CheckDef>& registry() {
  static const std::vector<CheckDef> defs = [] {
    std::vector<CheckDef> v;
    // model-space
    v.push_back(def("model-space", "orthonormality", "<h_j, h_k> = delta_jk",
                    check_orthonormality));
    v.push_back(def("model-space", "commutator", "<g, (QP - PQ) f> = i <g, f>",
                    check_commutator));
    v.push_back(def("model-space", "position-bounds", "||f|| <= ||f||_1 and ||Qf|| <= ||f||_1",
                    check_position_bounds));
    v.push_back(def("model-space", "seminorm-homogeneity", "s(lambda f) = |lambda| s(f)",
                    check_seminorm_homogeneity));
    v.push_back(def("model-space", "seminorm-triangle", "s(f + g) <= s(f) + s(g)",
                    check_seminorm_triangle));
    v.push_back(def("model-space", "sup-grid-convergence", "plumbing",
                    check_sup_convergence));
    v.push_back(def("model-space", "nuclear-diagonal-vs-operators",
                    "||f||_p = <f, (Q^2 + P^2 + 1)^p f>", check_nuclear_routes));
    v.push_back(def("model-space", "ladder-values",
                    "(Q f)(x) = x f(x), (P f)(x) = -i f'(x)", check_ladder_values));
    v.push_back(def("model-space", "zero-function-rejection",
                    "expectation values exclude the zero function", check_zero_rejection));
    // expectation
    v.push_back(def("expectation", "scale-invariance",
                    "Obar(f) = <f, O f> / <f, f> is scale invariant", check_scale_invariance));
    v.push_back(def("expectation", "section-expectation", "Qbar(Psi(x)) = x",
                    check_section_expectation));
    v.push_back(def("expectation", "section-parity", "Psi(0) is even",
                    check_section_parity));
    v.push_back(def("expectation", "section-leading-coefficient",
                    "<h_0, exp(-y^2)> = pi^{-1/4} sqrt(2 pi / 3)", check_section_leading));
    v.push_back(def("expectation", "dq-values",
                    "DQbar(f0)(f) = (<f0,Qf> + <f,Qf0> - Qbar(f0)(<f0,f> + <f,f0>)) / <f0,f0>",
                    check_dq_values));
    v.push_back(def("expectation", "dq-fd-agreement",
                    "DQbar matches central finite differences", check_dq_fd));
    v.push_back(def("expectation", "dq-linearity", "DQbar(f0) is linear over real scalars",
                    check_dq_linearity));
    v.push_back(def("expectation", "dq-remainder-slope",
                    "Qbar(f0 + t f) - Qbar(f0) - t DQbar(f0)(f) is o(t) with o(t) = t^2",
                    check_dq_slope));
    v.push_back(def("expectation", "continuity-bound",
                    "|Qbar(f0+f) - Qbar(f0)| <= 4 ||f||_1 ||f0||^-3 "
                    "[(||Qf0|| + ||f0|| + ||f||_1) ||f0|| + ||Qf0|| (2 ||f0|| + ||f||_1)]",
                    check_continuity_bound));
    v.push_back(def("expectation", "indistinguishability-relation",
                    "indistinguishable iff equal position expectation values",
                    check_indist_relation));
    v.push_back(def("expectation", "linear-remainder-rejected",
                    "a merely linear remainder is not tangent to zero",
                    check_linear_remainder_rejected));
    // translation
    v.push_back(def("translation", "expectation-shift", "Qbar(T_x f) = Qbar(f) + x",
                    check_expectation_shift));
    v.push_back(def("translation", "pointwise-definition", "T_x f = (y -> f(y - x))",
                    check_pointwise_definition));
    v.push_back(def("translation", "group-law", "T_y T_x f = T_{x+y} f", check_group_law));
    v.push_back(def("translation", "inverse-law", "T_{-x} T_x f = f", check_inverse_law));
    v.push_back(def("translation", "linearity",
                    "T_x(lambda f) = lambda T_x f and T_x(f + g) = T_x f + T_x g",
                    check_translation_linearity));
    v.push_back(def("translation", "unitarity-defect", "plumbing", check_unitarity_defect));
    v.push_back(def("translation", "shift-two-budget",
                    "Qbar(T_x f) = Qbar(f) + x at the budget edge |x| = 2",
                    check_shift_two_budget));
    v.push_back(def("translation", "continuity-modulus",
                    "x -> T_x f is continuous with a linear modulus",
                    check_translation_modulus));
    v.push_back(def("translation", "injectivity", "T_x f != T_y f for x != y",
                    check_injectivity));
    v.push_back(def("translation", "joint-continuity",
                    "T is continuous in (x, f) jointly (two-term split)",
                    check_joint_continuity));
    // bundle
    v.push_back(def("bundle", "fiber-invariance", "Qbar(T_{-Qbar(f)} f) = 0",
                    check_fiber_invariance));
    v.push_back(def("bundle", "projection-idempotence", "T_{-Qbar(f)} is idempotent on fibers",
                    check_projection_idempotence));
    v.push_back(def("bundle", "section-projection", "tau maps the section family to Psi(0)",
                    check_section_projection));
    v.push_back(def("bundle", "tau-round-trips",
                    "tau(f) = (Qbar(f), T_{-Qbar(f)} f) and tau^{-1}(x, g) = T_x g invert "
                    "each other",
                    check_tau_round_trips));
    v.push_back(def("bundle", "differential-linearity",
                    "Dtau(f0) and Dtau^{-1}(x0, g0) are linear", check_dtau_linearity));
    v.push_back(def("bundle", "dtau-fd-agreement",
                    "Dtau(f0)(g) = (DQbar(f0)(g), DQbar(f0)(g).grad(T_{-Qbar(f0)} f0) + "
                    "T_{-Qbar(f0)} g)",
                    check_dtau_fd));
    v.push_back(def("bundle", "dtau-remainder-slope",
                    "tau's linearization remainder is o(t) with o(t) = t^2", check_dtau_slope));
    v.push_back(def("bundle", "dtauinv-remainder-slope",
                    "Dtau^{-1}(x0,g0)(x,g) = -x.grad T_{x0} g0 + T_{x0} g with t^2 remainder",
                    check_dtauinv_slope));
    v.push_back(def("bundle", "differentials-mutual-inverse",
                    "Dtau and Dtau^{-1} are inverses of one another", check_mutual_inverse));
    v.push_back(def("bundle", "direction-guard",
                    "Dtau^{-1} only accepts directions with DQbar(g0)(g) = 0",
                    check_direction_guard));
    // atlas-euclidean
    v.push_back(def("atlas-euclidean", "classical-round-trips", "plumbing",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_classical_round_trips(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "conditions", "atlas conditions (i)-(iv)",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_atlas_conditions(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "phi-round-trip", "phi_i(xi, g) = T_{chi_i(xi)} g",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_phi_round_trip(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "transition-recovery",
                    "Qbar o phi_ji o Psi = chi_ji",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_transition_recovery(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "local-triviality",
                    "omega = (chi^{-1} x id) o tau o phi with omega_1 the projection",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_local_triviality(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "kolmogorov-projection", "(xi, g) -> xi",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_kolmogorov(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "indistinguishability-fibers",
                    "projection fibers are the indistinguishability classes",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_indist_fibers(d, c, "euclidean");
                    }));
    v.push_back(def("atlas-euclidean", "zero-fiber-rejection",
                    "fibers are nonzero functions",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_zero_fiber(d, c, "euclidean");
                    }));
    // atlas-circle
    v.push_back(def("atlas-circle", "classical-branches",
                    "chi_21 = id on (0, pi) and id + 2 pi on (-pi, 0)",
                    check_circle_branches));
    v.push_back(def("atlas-circle", "classical-round-trips", "plumbing",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_classical_round_trips(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "conditions", "atlas conditions (i)-(iv)",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_atlas_conditions(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "phi-round-trip", "phi_i(xi, g) = T_{chi_i(xi)} g",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_phi_round_trip(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "transition-recovery", "Qbar o phi_ji o Psi = chi_ji",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_transition_recovery(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "expectation-equivariance",
                    "Qbar o phi_ji = chi_ji o Qbar", check_equivariance));
    v.push_back(def("atlas-circle", "identity-region-transition",
                    "phi_ji fixes sections where chi_ji = id", check_identity_region));
    v.push_back(def("atlas-circle", "transition-functoriality",
                    "phi_12 o phi_21 = id on the overlap", check_functoriality));
    v.push_back(def("atlas-circle", "overlap-rejection",
                    "transitions reject inputs outside the overlap", check_overlap_rejection));
    v.push_back(def("atlas-circle", "corrupted-transition-detected",
                    "a discontinuous transition fails condition (iv)",
                    check_corruption_detected));
    v.push_back(def("atlas-circle", "local-triviality",
                    "omega = (chi^{-1} x id) o tau o phi with omega_1 the projection",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_local_triviality(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "kolmogorov-projection", "(xi, g) -> xi",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_kolmogorov(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "indistinguishability-fibers",
                    "projection fibers are the indistinguishability classes",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_indist_fibers(d, c, "circle");
                    }));
    v.push_back(def("atlas-circle", "compatibility-union",
                    "the union with a rotated copy is again an atlas",
                    check_compatibility_union));
    v.push_back(def("atlas-circle", "zero-fiber-rejection", "fibers are nonzero functions",
                    [](const CheckDef& d, const CheckContext& c) {
                      return check_zero_fiber(d, c, "circle");
                    }));
    return v;
  }();
  return defs;
}

// appendix-b re-runs the bound-and-differential checks from their home
// suites under one roof.
const std::vector<std::pair<std::string, std::string>>& appendix_b_members() {
  static const std::vector<std::pair<std::string, std::string>> members = {
      {"model-space", "position-bounds"},
      {"expectation", "continuity-bound"},
      {"expectation", "dq-fd-agreement"},
      {"expectation", "dq-remainder-slope"},
      {"translation", "linearity"},
      {"translation", "continuity-modulus"},
      {"translation", "injectivity"},
      {"translation", "joint-continuity"},
      {"bundle", "dtau-fd-agreement"},
      {"bundle", "dtau-remainder-slope"},
      {"bundle", "dtauinv-remainder-slope"},
      {"bundle", "differentials-mutual-inverse"},
  };
  return members;
}

std::vector<const CheckDef*> checks_for_suite(const std::string& suite) {
  std::vector<const CheckDef*> out;
  if (suite == "appendix-b") {
    for (const auto& [home, id] : appendix_b_members()) {
      for (const auto& d : registry()) {
        if (d.suite == home && d.id == id) out.push_back(&d);
      }
    }
    return out;
  }
  for (const auto& d : registry()) {
    if (suite == "all" || d.suite == suite) out.push_back(&d);
  }
  return out;
}

}  // namespace

nlohmann::json SuiteConfig::echo(const std::string& resolved_suite,
                                 int resolved_degree) const {
  nlohmann::json tol_json;
  for (const auto& name : Tolerances::names()) tol_json[name] = tol.get(name);
  nlohmann::json out{{"suite", resolved_suite}, {"degree", resolved_degree},
                     {"seed", seed},            {"samples", samples},
                     {"manifold", manifold},    {"tolerances", tol_json}};
  if (manifold_spec.is_object()) out["manifold_spec"] = manifold_spec;
  return out;
}

SuiteConfig SuiteConfig::from_json(const nlohmann::json& j) {
  SuiteConfig cfg;
  cfg.suite = j.value("suite", cfg.suite);
  cfg.manifold = j.value("manifold", cfg.manifold);
  cfg.degree = j.value("degree", cfg.degree);
  cfg.seed = j.value("seed", cfg.seed);
  cfg.samples = j.value("samples", cfg.samples);
  cfg.out_path = j.value("out", cfg.out_path);
  if (j.contains("tolerances")) {
    for (const auto& [name, value] : j.at("tolerances").items()) {
      cfg.tol.set(name, value.get<double>());
    }
  }
  if (j.contains("manifold_spec")) cfg.manifold_spec = j.at("manifold_spec");
  return cfg;
}

std::vector<std::string> suite_names() {
  return {"model-space", "expectation",     "translation", "bundle",
          "atlas-euclidean", "atlas-circle", "appendix-b",  "all"};
}

std::vector<CheckInfo> check_catalog() {
  std::vector<CheckInfo> out;
  for (const auto& d : registry()) out.push_back({d.suite, d.id, d.anchor});
  for (const auto& [home, id] : appendix_b_members()) {
    for (const auto& d : registry()) {
      if (d.suite == home && d.id == id) out.push_back({"appendix-b", d.id, d.anchor});
    }
  }
  return out;
}

VerificationReport run_suite(const SuiteConfig& cfg) {
  std::string suite = cfg.suite;
  if (suite == "atlas") {
    if (cfg.manifold.empty()) {
      throw ConfigError("suite 'atlas' needs --manifold euclidean|circle");
    }
    suite = "atlas-" + cfg.manifold;
  }
  const auto names = suite_names();
  if (std::find(names.begin(), names.end(), suite) == names.end()) {
    throw ConfigError("unknown suite '" + suite + "'");
  }

  int degree = cfg.degree;
  if (degree <= 0) {
    if (const char* env = std::getenv("QM_DEFAULT_DEGREE")) {
      degree = std::atoi(env);
    }
  }

  VerificationReport report;
  const auto defs = checks_for_suite(suite);
  for (const CheckDef* d : defs) {
    CheckContext ctx;
    ctx.cfg = &cfg;
    ctx.degree = degree > 0 ? degree : suite_default_degree(d->suite);

    const auto start = std::chrono::steady_clock::now();
    std::vector<CheckRecord> records;
    try {
      records = d->fn(ctx);
    } catch (const std::exception& e) {
      CheckRecord rec;
      rec.id = d->id;
      rec.anchor = d->anchor;
      rec.status = CheckStatus::fail;
      rec.residual = 1e300;
      rec.note = std::string("exception: ") + e.what();
      records.push_back(std::move(rec));
    }
    const auto stop = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration_cast<std::chrono::duration<double, std::milli>>(stop - start)
            .count();
    for (auto& r : records) {
      r.id = d->suite + "/" + r.id;
      r.wall_ms = ms / static_cast<double>(records.size());
      report.add(std::move(r));
    }
  }

  report.config = cfg.echo(suite, degree);
  report.finalize();

  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path);
    if (!out) throw ConfigError("cannot write report to '" + cfg.out_path + "'");
    out << report.to_json(true).dump(2) << "\n";
  }
  return report;
}

}  // namespace qmfd
