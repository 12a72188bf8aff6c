#include "qmanifold/bundle.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmanifold/expectation.hpp"

namespace qmfd {

namespace {

std::vector<double> negated(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = -v;
  return out;
}

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// sum_i v_i d_i f
SchwartzFn gradient_contraction(std::span<const double> v, const SchwartzFn& f) {
  SchwartzFn out = SchwartzFn::zero(f.dim(), f.degree() + 1);
  for (int a = 0; a < f.dim(); ++a) {
    out = out + v[static_cast<std::size_t>(a)] * derivative_axis(f, a);
  }
  return out;
}

}  // namespace

void validate_fiber_point(const FiberPoint& p, const Tolerances& tol) {
  if (static_cast<int>(p.base.size()) != p.fiber.dim()) {
    throw DimensionMismatch("FiberPoint: base dimension does not match fiber dimension");
  }
  if (!p.fiber.is_nonzero(tol.nonzero)) {
    throw NonzeroRequired("FiberPoint: fiber must be a nonzero function");
  }
  const double off = inf_norm(position_expectation(p.fiber, tol).value);
  if (off > tol.fiber) {
    throw PreconditionError("FiberPoint: fiber expectation " + sci(off) +
                            " outside the zero-expectation band " + sci(tol.fiber));
  }
}

SchwartzFn project_to_fiber(const SchwartzFn& f, const Tolerances& tol) {
  const ExpectationValue q = position_expectation(f, tol);
  const SchwartzFn fiber =
      translate(f, negated(std::span<const double>(q.value)), TranslationConfig::from(tol));
  const double off = inf_norm(position_expectation(fiber, tol).value);
  if (off > tol.fiber) {
    throw Error("project_to_fiber: residual expectation " + sci(off) +
                " exceeds the fiber band");
  }
  return fiber;
}

FiberPoint trivialize(const SchwartzFn& f, const Tolerances& tol) {
  ExpectationValue q = position_expectation(f, tol);
  return FiberPoint{std::move(q.value), project_to_fiber(f, tol)};
}

SchwartzFn untrivialize(const FiberPoint& p, const Tolerances& tol) {
  validate_fiber_point(p, tol);
  return translate(p.fiber, p.base, TranslationConfig::from(tol));
}

ProductDirection d_trivialize(const SchwartzFn& f0, const SchwartzFn& g,
                              const Tolerances& tol) {
  if (f0.dim() != g.dim()) throw DimensionMismatch("d_trivialize: dimension mismatch");
  const ExpectationValue q = position_expectation(f0, tol);
  const std::vector<double> v = d_expectation(f0, g, tol);

  const std::vector<double> minus_q = negated(q.value);
  const int source = std::max(f0.degree(), g.degree());
  const TranslationPlan plan =
      TranslationPlan::make(f0.dim(), source, minus_q, TranslationConfig::from(tol));
  const SchwartzFn centered_f0 = plan.apply(f0.padded_to(source));
  const SchwartzFn centered_g = plan.apply(g.padded_to(source));

  return ProductDirection{v, gradient_contraction(v, centered_f0) + centered_g};
}

SchwartzFn d_untrivialize(std::span<const double> x0, const SchwartzFn& g0,
                          std::span<const double> x, const SchwartzFn& g,
                          const Tolerances& tol) {
  if (g0.dim() != g.dim()) throw DimensionMismatch("d_untrivialize: dimension mismatch");
  const std::vector<double> dq = d_expectation(g0, g, tol);
  const double measured = inf_norm(dq);
  const double allowance = tol.fiber * std::max(1.0, g.norm() / std::max(g0.norm(), 1e-30));
  if (measured > allowance) {
    throw DirectionNotTangent(
        "d_untrivialize: direction has DQbar(g0)(g) = " + sci(measured) +
            ", not tangent to the zero-expectation fiber",
        measured);
  }

  const int source = std::max(g0.degree(), g.degree());
  const TranslationPlan plan =
      TranslationPlan::make(g0.dim(), source, x0, TranslationConfig::from(tol));
  const SchwartzFn moved_g0 = plan.apply(g0.padded_to(source));
  const SchwartzFn moved_g = plan.apply(g.padded_to(source));
  return moved_g - gradient_contraction(x, moved_g0);
}

double product_norm(std::span<const double> base, const SchwartzFn& fiber) {
  double b = 0.0;
  for (double v : base) b += v * v;
  return std::max(std::sqrt(b), nuclear_seminorm(fiber, 1));
}

}  // namespace qmfd
