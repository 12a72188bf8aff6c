#pragma once

#include <functional>
#include <span>
#include <variant>
#include <vector>

#include "qmanifold/config.hpp"
#include "qmanifold/schwartz_fn.hpp"

namespace qmfd {

/// Position expectation vector Qbar(f), one entry per axis.
struct ExpectationValue {
  std::vector<double> value;
};

struct PositionAxis {
  int axis = 0;
};
struct MomentumAxis {
  int axis = 0;
};
/// A user-supplied Hermitian operator, given by its action on functions.
using HermitianAction = std::function<SchwartzFn(const SchwartzFn&)>;

using Observable = std::variant<PositionAxis, MomentumAxis, HermitianAction>;

/// Obar(f) = <f, O f> / <f, f>. Requires a nonzero f; the imaginary part
/// of the numerator must be negligible (Hermitian operator check).
double expectation(const SchwartzFn& f, const Observable& op, const Tolerances& tol = {});

/// Componentwise position expectation value.
ExpectationValue position_expectation(const SchwartzFn& f, const Tolerances& tol = {});

/// Analytic differential of Qbar at f0 in direction f (per axis):
///   DQbar(f0)(f) = (<f0,Qf> + <f,Qf0> - Qbar(f0)(<f0,f> + <f,f0>)) / <f0,f0>.
/// Linear in f over real scalars.
std::vector<double> d_expectation(const SchwartzFn& f0, const SchwartzFn& f,
                                  const Tolerances& tol = {});

/// Hermite coefficients of y -> exp(-(y - x)^2), the canonical section of
/// the position expectation map: Qbar of the result equals x. Coefficients
/// come from a per-axis Gauss-Hermite rule; if the requested degree leaves
/// more than tol.section of the relative L2 mass outside the truncation,
/// a TruncationError carrying the measured defect is thrown.
SchwartzFn gaussian_section(std::span<const double> x, int degree, const Tolerances& tol = {});

/// Generalized-width variant exp(-width_alpha (y - x)^2) for convergence
/// studies. width_alpha = 1 reproduces gaussian_section.
SchwartzFn gaussian_profile(std::span<const double> x, double width_alpha, int degree,
                            const Tolerances& tol = {});

/// gaussian_section at the smallest degree >= min_degree whose discarded
/// mass meets the tol.section gate (the op's own admissibility condition).
SchwartzFn gaussian_section_auto(std::span<const double> x, int min_degree,
                                 const Tolerances& tol = {});

/// True iff |Qbar(f) - Qbar(g)|_inf <= tol_inf. With a nonzero tolerance
/// this relation is reflexive and symmetric, and transitive up to 2*tol.
bool indistinguishable(const SchwartzFn& f, const SchwartzFn& g, double tol_inf,
                       const Tolerances& tol = {});

struct BoundCheck {
  bool holds = false;
  double lhs = 0.0;
  double rhs = 0.0;
};

/// Evaluates both sides of the perturbation bound
///   |Qbar(f0+f) - Qbar(f0)|
///     <= 4 ||f||_1 ||f0||^{-3} [ (||Qf0|| + ||f0|| + ||f||_1) ||f0||
///                               + ||Qf0|| (2||f0|| + ||f||_1) ]
/// on its stated domain ||f|| < ||f0||/2 (PreconditionError outside).
BoundCheck continuity_bound_check(const SchwartzFn& f0, const SchwartzFn& f,
                                  const Tolerances& tol = {});

/// Least-squares fit of log(residual) against log(t). A remainder map that
/// is quadratically small ("tangent to zero" with o(t) = t^2) must show a
/// slope of at least 1.9; a merely linear remainder fits near 1.
struct TangentSlopeReport {
  std::vector<double> t_values;
  std::vector<double> residual_norms;
  double fitted_slope = 0.0;
  /// All residuals below 1e-14; the fit carries no information.
  bool vacuous = false;
};

/// Requires >= 4 strictly decreasing t values in (0, 1] spanning at least
/// two decades.
TangentSlopeReport tangent_slope(const std::function<double(double)>& residual_at,
                                 std::span<const double> t_grid);

enum class SeminormKind { l2, nuclear1 };

/// Convenience overload for function-valued remainder maps delta(t, f);
/// the residual is measured in the selected seminorm.
TangentSlopeReport tangent_slope(
    const std::function<SchwartzFn(double, const SchwartzFn&)>& delta, const SchwartzFn& f,
    SeminormKind norm, std::span<const double> t_grid);

/// Five logarithmically spaced steps from 1e-1 down to 1e-3.
std::vector<double> default_t_grid();

}  // namespace qmfd
