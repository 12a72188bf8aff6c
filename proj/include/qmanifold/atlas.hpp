#pragma once

#include <functional>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmanifold/bundle.hpp"
#include "qmanifold/config.hpp"
#include "qmanifold/report.hpp"
#include "qmanifold/rng.hpp"
#include "qmanifold/schwartz_fn.hpp"

namespace qmfd {

// ---------------------------------------------------------------------------
// Interval bookkeeping: chart images are finite unions of open boxes, which
// makes every membership question raised by the atlas conditions decidable.

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
  bool contains(double x) const { return x > lo && x < hi; }
  double width() const { return hi - lo; }
  double midpoint() const { return 0.5 * (lo + hi); }
};

struct Box {
  std::vector<Interval> axes;
  bool contains(std::span<const double> x) const;
};

struct Region {
  std::vector<Box> boxes;
  bool contains(std::span<const double> x) const;
  bool empty() const { return boxes.empty(); }
};

// ---------------------------------------------------------------------------
// Classical side.

/// A point of the underlying manifold, stored in embedding coordinates
/// (R^n for the Euclidean manifold, the unit circle in R^2 for the circle).
struct ManifoldPoint {
  std::vector<double> coords;
};

struct ClassicalChart {
  std::string id;
  std::function<bool(const ManifoldPoint&)> contains;
  std::function<std::vector<double>(const ManifoldPoint&)> map;    // chi
  std::function<ManifoldPoint(std::span<const double>)> inverse;   // chi^{-1}
  Region image;                                                    // chi(X)
};

class ClassicalAtlas {
 public:
  using TransitionFn = std::function<std::vector<double>(std::span<const double>)>;

  struct Data {
    std::string kind;
    int dim = 1;
    std::vector<ClassicalChart> charts;
    std::map<std::pair<int, int>, Region> overlap_images;
    std::map<std::pair<int, int>, TransitionFn> transition_overrides;
    std::function<ManifoldPoint(Rng&)> sampler;
    std::function<double(const ManifoldPoint&, const ManifoldPoint&)> distance;
  };

  explicit ClassicalAtlas(Data data) : data_(std::move(data)) {}

  const std::string& kind() const { return data_.kind; }
  int dim() const { return data_.dim; }
  int chart_count() const { return static_cast<int>(data_.charts.size()); }
  const ClassicalChart& chart(int i) const;

  /// chi_ji = chi_j o chi_i^{-1}, unless an override was installed at
  /// construction (verification fixtures use this to corrupt a transition).
  std::vector<double> transition(int i, int j, std::span<const double> u) const;

  /// chi_i(X_i intersect X_j).
  const Region& overlap_image(int i, int j) const;

  ManifoldPoint sample(Rng& rng) const { return data_.sampler(rng); }
  double distance(const ManifoldPoint& a, const ManifoldPoint& b) const {
    return data_.distance(a, b);
  }

  const Data& data() const { return data_; }

 private:
  Data data_;
};

struct EuclideanSpec {
  int n = 1;
  /// Half width of the (open) chart image box.
  double half_width = 1.25;
  /// Half width of the sampling box (strictly inside the image).
  double sample_radius = 1.0;
};

struct CircleSpec {
  /// Chart ranges are scaled by this factor so every chart value stays
  /// inside the translation budget; the default 0.25 keeps |chi| < 1.6.
  double scale = 0.25;
  double rotation = 0.0;
  /// Adds a second pair of charts rotated by `copy_rotation`; the union
  /// is an atlas for the same circle (chart-compatibility exercises).
  bool with_rotated_copy = false;
  double copy_rotation = 0.7853981633974483;  // pi/4
};

/// Euclidean R^n with a single identity chart.
ClassicalAtlas make_classical_atlas(const EuclideanSpec& spec);

/// The unit circle with two charts: one cut at angle pi mapping onto
/// scale*(-pi, pi), one cut at 0 mapping onto scale*(0, 2 pi). The
/// transition adds 2 pi scale on the wrapped branch.
ClassicalAtlas make_classical_atlas(const CircleSpec& spec);

/// Verification fixture: a copy of `base` whose (i, j) transition jumps by
/// `jump` for inputs above `u_star`. The result deliberately violates the
/// transition-continuity condition at u_star.
ClassicalAtlas with_step_corruption(const ClassicalAtlas& base, int i, int j, double u_star,
                                    double jump);

// ---------------------------------------------------------------------------
// Quantum side: the trivial quantization M x S_0.

/// A quantum point (xi, g): a manifold point with a fiber function of
/// (numerically) zero position expectation.
struct QuantumPoint {
  ManifoldPoint base;
  SchwartzFn fiber;
};

struct QuantizationConfig {
  /// Truncation degree of fiber functions.
  int degree = 48;
  /// Every chart value must satisfy |chi(xi)|_2 <= max_shift so that
  /// translation plans stay inside their budget.
  double max_shift = 2.0;
  Tolerances tol;
};

class QuantumAtlas;

/// View of one quantum chart (U_i, phi_i) with phi_i(xi, g) = T_{chi_i(xi)} g.
struct QuantumChart {
  const QuantumAtlas* atlas = nullptr;
  int index = 0;
  SchwartzFn phi(const QuantumPoint& psi) const;
  QuantumPoint phi_inverse(const SchwartzFn& f) const;
};

class QuantumAtlas {
 public:
  QuantumAtlas(ClassicalAtlas atlas, QuantizationConfig cfg);

  const ClassicalAtlas& classical() const { return atlas_; }
  const QuantizationConfig& config() const { return cfg_; }
  int chart_count() const { return atlas_.chart_count(); }
  QuantumChart chart(int i) const { return QuantumChart{this, i}; }

  /// phi_i(xi, g) = T_{chi_i(xi)} g. Requires xi in the chart and g a
  /// valid fiber element (nonzero, |Qbar| within the fiber band).
  SchwartzFn phi(int i, const QuantumPoint& psi) const;

  /// phi_i^{-1}(f) = (chi_i^{-1}(Qbar(f)), T_{-Qbar(f)} f); requires
  /// Qbar(f) in the chart image.
  QuantumPoint phi_inverse(int i, const SchwartzFn& f) const;

  /// Recompress intermediate results onto the working degree whenever the
  /// discarded relative mass is negligible (< 1e-22); keeps repeated
  /// translations from inflating degrees while preserving accuracy.
  SchwartzFn settle(const SchwartzFn& f) const;

  int working_degree() const { return working_degree_; }

 private:
  ClassicalAtlas atlas_;
  QuantizationConfig cfg_;
  int working_degree_ = 0;
};

/// Builds the quantum atlas over M x S_0; throws PreconditionError when a
/// chart image exceeds the translation budget (rescale the charts).
QuantumAtlas trivial_quantization(const ClassicalAtlas& atlas,
                                  const QuantizationConfig& cfg = {});

/// phi_j o phi_i^{-1} on chart images: T_{chi_ji(Qbar f)} T_{-Qbar f} f.
/// Requires Qbar(f) in chi_i(X_i intersect X_j).
SchwartzFn quantum_transition(const QuantumAtlas& qa, int i, int j, const SchwartzFn& f);

/// Qbar(phi_ji(Psi(x))): the classical transition recovered through the
/// quantum maps; must reproduce chi_ji(x).
std::vector<double> recover_classical_transition(const QuantumAtlas& qa, int i, int j,
                                                 std::span<const double> x);

/// The projection onto indistinguishability classes, computed through a
/// chart: chi_i^{-1}(Qbar(phi_i(psi))). For the trivial quantization this
/// returns the base point.
ManifoldPoint kolmogorov_project(const QuantumAtlas& qa, int i, const QuantumPoint& psi);
ManifoldPoint kolmogorov_project(const QuantumAtlas& qa, int i, const SchwartzFn& f);

/// Random element of the zero-expectation fiber at the given degree.
SchwartzFn sample_fiber_element(Rng& rng, int dim, int degree, const Tolerances& tol = {});

/// Spot-checks the four atlas conditions at sampled points:
/// (i) covering, (ii) chart bijectivity, (iii) overlap images land in the
/// interval description, (iv) transition continuity in the expectation
/// values and differentiability along sampled directions. Failures are
/// report entries, never exceptions.
std::vector<CheckRecord> verify_quantum_atlas(const QuantumAtlas& qa, int sample_budget,
                                              Rng& rng);

/// Checks the bundle trivialization over one chart: the first component
/// of (chi^{-1} x id) o tau o phi equals the projection onto the base,
/// and the composition round-trips.
std::vector<CheckRecord> verify_local_triviality(const QuantumAtlas& qa, int chart,
                                                 int samples, Rng& rng);

}  // namespace qmfd
