#pragma once

#include <memory>
#include <span>
#include <vector>

#include "qmanifold/config.hpp"
#include "qmanifold/schwartz_fn.hpp"

namespace qmfd {

/// Knobs for building translation plans.
struct TranslationConfig {
  /// Reject a plan whose measured accuracy defect exceeds this bound.
  double defect_tol = 1e-9;
  /// Hard ceiling on the padded degree; 0 means the default cap
  /// 2 * source_degree + 8. Shifts that need more head room than the cap
  /// allows are rejected and require an explicit override.
  int max_degree = 0;
  /// Use exactly this padded degree instead of the heuristic (>= source).
  int padded_override = 0;

  static TranslationConfig from(const Tolerances& tol) {
    TranslationConfig cfg;
    cfg.defect_tol = tol.translation;
    return cfg;
  }
};

/// A re-usable realization of T_x on functions up to a fixed source
/// degree: per axis, the anti-Hermitian ladder generator x (adag - a)/sqrt(2)
/// exponentiated on a padded coefficient space by scaling and squaring.
///
/// The plan certifies itself: `unitarity_defect` is the largest L2
/// deviation, over unit-norm inputs of the source degree, between this
/// realization and a reference built on a strictly larger padding. It
/// bounds |  ||T_x f|| - ||f||  | / ||f|| for every admissible f. Building
/// a plan whose defect exceeds the configured bound throws PlanRejected.
///
/// Plans are immutable and safe to share between threads.
class TranslationPlan {
 public:
  static TranslationPlan make(int dim, int source_degree, std::span<const double> shift,
                              const TranslationConfig& cfg = {});

  const std::vector<double>& shift() const { return shift_; }
  int dim() const { return dim_; }
  int source_degree() const { return source_degree_; }
  int padded_degree() const { return padded_degree_; }
  double unitarity_defect() const { return defect_; }

  /// Translate f (degree <= source_degree); result degree = padded_degree.
  SchwartzFn apply(const SchwartzFn& f) const;

 private:
  TranslationPlan() = default;
  int dim_ = 1;
  int source_degree_ = 0;
  int padded_degree_ = 0;
  double defect_ = 0.0;
  std::vector<double> shift_;
  // Row-major (padded+1)^2 matrices, one per axis with nonzero shift
  // (empty matrix = identity).
  std::vector<std::vector<double>> axis_ops_;
};

/// (T_x f)(y) = f(y - x) via a fresh plan. A zero shift returns f itself.
SchwartzFn translate(const SchwartzFn& f, std::span<const double> x,
                     const TranslationConfig& cfg = {});

/// Residual of the group law:  || T_y T_x f - T_{x+y} f || / || f ||.
double verify_translation_group(const SchwartzFn& f, std::span<const double> x,
                                std::span<const double> y, const TranslationConfig& cfg = {});

/// Max residual of T_x(lambda f) = lambda T_x f and T_x(f+g) = T_x f + T_x g
/// in the L2 norm. Exact for a fixed plan up to roundoff.
double verify_translation_linearity(const SchwartzFn& f, const SchwartzFn& g, Complex lambda,
                                    std::span<const double> x,
                                    const TranslationConfig& cfg = {});

/// Modulus-of-continuity record for x -> T_x f around x0: for each radius,
/// the largest nuclear-1 distance between T_{x0+x} f and T_{x0} f over
/// probe shifts |x| = radius. The gradient bound in the construction
/// predicts a (at least) linear modulus, i.e. log-log slope close to 1.
struct ModulusRecord {
  std::vector<double> radii;
  std::vector<double> moduli;
  double slope = 0.0;
};

ModulusRecord translation_continuity_probe(const SchwartzFn& f, std::span<const double> x0,
                                           std::span<const double> radii,
                                           const TranslationConfig& cfg = {});

}  // namespace qmfd
