#pragma once

#include <span>
#include <vector>

#include "qmanifold/config.hpp"
#include "qmanifold/schwartz_fn.hpp"
#include "qmanifold/translation.hpp"

namespace qmfd {

/// A point of the product R^n x S_0: a base position together with a
/// nonzero function whose position expectation is (numerically) zero.
struct FiberPoint {
  std::vector<double> base;
  SchwartzFn fiber;
};

/// Throws unless `fiber` is nonzero and |Qbar(fiber)|_inf <= tol.fiber.
void validate_fiber_point(const FiberPoint& p, const Tolerances& tol = {});

/// T_{-Qbar(f)} f: kills the position expectation value. The result's
/// |Qbar|_inf is checked against tol.fiber.
SchwartzFn project_to_fiber(const SchwartzFn& f, const Tolerances& tol = {});

/// tau(f) = (Qbar(f), T_{-Qbar(f)} f); the trivialization of the nonzero
/// functions as a product over R^n.
FiberPoint trivialize(const SchwartzFn& f, const Tolerances& tol = {});

/// tau^{-1}(x, g) = T_x g, defined on valid fiber points.
SchwartzFn untrivialize(const FiberPoint& p, const Tolerances& tol = {});

/// A tangent direction of the product R^n x S (no fiber-band invariant).
struct ProductDirection {
  std::vector<double> base;
  SchwartzFn fiber;
};

/// Differential of tau at f0 in direction g:
///   Dtau(f0)(g) = ( DQbar(f0)(g),
///                   DQbar(f0)(g) . grad(T_{-Qbar(f0)} f0) + T_{-Qbar(f0)} g ).
ProductDirection d_trivialize(const SchwartzFn& f0, const SchwartzFn& g,
                              const Tolerances& tol = {});

/// Differential of tau^{-1} at (x0, g0) in direction (x, g):
///   Dtau^{-1}(x0,g0)(x,g) = -x . grad(T_{x0} g0) + T_{x0} g,
/// defined on directions with DQbar(g0)(g) = 0. The constraint is checked
/// within tol.fiber (scaled by the direction's size); violations throw
/// DirectionNotTangent carrying the measured value.
SchwartzFn d_untrivialize(std::span<const double> x0, const SchwartzFn& g0,
                          std::span<const double> x, const SchwartzFn& g,
                          const Tolerances& tol = {});

/// Norm used for all product-space residuals:
/// max(|base|_2, ||fiber||_1 nuclear).
double product_norm(std::span<const double> base, const SchwartzFn& fiber);

}  // namespace qmfd
