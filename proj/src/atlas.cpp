#include "qmanifold/atlas.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qmanifold/expectation.hpp"
#include "qmanifold/translation.hpp"

namespace qmfd {

namespace {

constexpr double kPi = 3.141592653589793238462643;
constexpr double kTwoPi = 2.0 * kPi;

double wrap_angle(double a) { return std::remainder(a, kTwoPi); }  // into [-pi, pi]

double theta_of(const ManifoldPoint& p) { return std::atan2(p.coords[1], p.coords[0]); }

double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

std::vector<double> negated(std::span<const double> x) {
  std::vector<double> out(x.begin(), x.end());
  for (double& v : out) v = -v;
  return out;
}

// Least-squares slope of log(y) against log(x).
double loglog_slope(std::span<const double> x, std::span<const double> y) {
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  const auto n = static_cast<double>(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double lx = std::log(x[i]);
    const double ly = std::log(std::max(y[i], 1e-300));
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// A circle chart is determined by the angle `center` opposite its cut and
// the value `base` it assigns to that angle: chi(p) = s (base + wrap(theta
// - center)), image s (base - pi, base + pi). Rotated copies of an atlas
// keep their base values, so all images stay inside the same range.
ClassicalChart make_circle_chart(const std::string& id, double center, double base,
                                 double scale) {
  ClassicalChart chart;
  chart.id = id;
  chart.contains = [center](const ManifoldPoint& p) {
    return std::abs(wrap_angle(theta_of(p) - center)) < kPi - 1e-12;
  };
  chart.map = [center, base, scale](const ManifoldPoint& p) {
    return std::vector<double>{scale * (base + wrap_angle(theta_of(p) - center))};
  };
  chart.inverse = [center, base, scale](std::span<const double> u) {
    const double theta = center + (u[0] / scale - base);
    return ManifoldPoint{{std::cos(theta), std::sin(theta)}};
  };
  chart.image.boxes.push_back(
      Box{{Interval{scale * (base - kPi), scale * (base + kPi)}}});
  return chart;
}

int retry_sample(const std::function<bool()>& attempt, const char* what) {
  for (int tries = 0; tries < 4096; ++tries) {
    if (attempt()) return tries;
  }
  throw Error(std::string("sampling failed to hit ") + what);
}

ManifoldPoint sample_in_chart(const ClassicalAtlas& ca, int i, Rng& rng) {
  ManifoldPoint p;
  retry_sample(
      [&] {
        p = ca.sample(rng);
        return ca.chart(i).contains(p);
      },
      "chart domain");
  return p;
}

ManifoldPoint sample_in_overlap(const ClassicalAtlas& ca, int i, int j, Rng& rng) {
  ManifoldPoint p;
  retry_sample(
      [&] {
        p = ca.sample(rng);
        return ca.chart(i).contains(p) && ca.chart(j).contains(p);
      },
      "chart overlap");
  return p;
}

// Ordered chart pairs probed by the condition checks: all (i, j) with a
// nonempty overlap; a single-chart atlas probes (0, 0).
std::vector<std::pair<int, int>> probe_pairs(const ClassicalAtlas& ca) {
  std::vector<std::pair<int, int>> pairs;
  if (ca.chart_count() == 1) {
    pairs.emplace_back(0, 0);
    return pairs;
  }
  for (int i = 0; i < ca.chart_count(); ++i) {
    for (int j = 0; j < ca.chart_count(); ++j) {
      if (i != j && !ca.overlap_image(i, j).empty()) pairs.emplace_back(i, j);
    }
  }
  return pairs;
}

}  // namespace

// ---------------------------------------------------------------------------

bool Box::contains(std::span<const double> x) const {
  if (x.size() != axes.size()) return false;
  for (std::size_t a = 0; a < axes.size(); ++a) {
    if (!axes[a].contains(x[a])) return false;
  }
  return true;
}

bool Region::contains(std::span<const double> x) const {
  for (const Box& b : boxes) {
    if (b.contains(x)) return true;
  }
  return false;
}

const ClassicalChart& ClassicalAtlas::chart(int i) const {
  if (i < 0 || i >= chart_count()) throw Error("ClassicalAtlas: chart index out of range");
  return data_.charts[static_cast<std::size_t>(i)];
}

std::vector<double> ClassicalAtlas::transition(int i, int j,
                                               std::span<const double> u) const {
  const auto it = data_.transition_overrides.find({i, j});
  if (it != data_.transition_overrides.end()) return it->second(u);
  return chart(j).map(chart(i).inverse(u));
}

const Region& ClassicalAtlas::overlap_image(int i, int j) const {
  const auto it = data_.overlap_images.find({i, j});
  if (it == data_.overlap_images.end()) {
    throw Error("ClassicalAtlas: no overlap description for this chart pair");
  }
  return it->second;
}

ClassicalAtlas make_classical_atlas(const EuclideanSpec& spec) {
  if (spec.n < 1) throw Error("euclidean atlas: dimension must be positive");
  if (!(spec.sample_radius < spec.half_width)) {
    throw Error("euclidean atlas: sampling box must sit strictly inside the image");
  }
  ClassicalAtlas::Data data;
  data.kind = "euclidean";
  data.dim = spec.n;

  ClassicalChart chart;
  chart.id = "euclid";
  const double hw = spec.half_width;
  chart.contains = [hw, n = spec.n](const ManifoldPoint& p) {
    if (static_cast<int>(p.coords.size()) != n) return false;
    for (double x : p.coords) {
      if (!(std::abs(x) < hw)) return false;
    }
    return true;
  };
  chart.map = [](const ManifoldPoint& p) { return p.coords; };
  chart.inverse = [](std::span<const double> u) {
    return ManifoldPoint{{u.begin(), u.end()}};
  };
  Box box;
  for (int a = 0; a < spec.n; ++a) box.axes.push_back(Interval{-hw, hw});
  chart.image.boxes.push_back(box);
  data.charts.push_back(std::move(chart));

  data.overlap_images[{0, 0}] = data.charts[0].image;
  data.sampler = [n = spec.n, r = spec.sample_radius](Rng& rng) {
    return ManifoldPoint{rng.box_point(n, r)};
  };
  data.distance = [](const ManifoldPoint& a, const ManifoldPoint& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.coords.size(); ++i) {
      const double d = a.coords[i] - b.coords[i];
      s += d * d;
    }
    return std::sqrt(s);
  };
  return ClassicalAtlas(std::move(data));
}

ClassicalAtlas make_classical_atlas(const CircleSpec& spec) {
  if (spec.scale <= 0.0) throw Error("circle atlas: scale must be positive");
  ClassicalAtlas::Data data;
  data.kind = "circle";
  data.dim = 1;

  // Chart cut-opposite centers and the values assigned to them. The
  // standard pair maps onto scale*(-pi, pi) and scale*(0, 2 pi); a rotated
  // copy repeats the same bases at rotated centers.
  std::vector<double> centers{spec.rotation, spec.rotation + kPi};
  std::vector<double> bases{0.0, kPi};
  if (spec.with_rotated_copy) {
    centers.push_back(spec.rotation + spec.copy_rotation);
    centers.push_back(spec.rotation + spec.copy_rotation + kPi);
    bases.push_back(0.0);
    bases.push_back(kPi);
  }
  for (std::size_t k = 0; k < centers.size(); ++k) {
    data.charts.push_back(
        make_circle_chart("circle-" + std::to_string(k), centers[k], bases[k], spec.scale));
  }

  const int m = static_cast<int>(centers.size());
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j) {
      const auto iu = static_cast<std::size_t>(i);
      const auto ju = static_cast<std::size_t>(j);
      const Interval image = data.charts[iu].image.boxes[0].axes[0];
      Region overlap;
      const double cut_i = centers[iu] + kPi;
      const double cut_j = centers[ju] + kPi;
      if (i == j || std::abs(wrap_angle(cut_i - cut_j)) < 1e-12) {
        overlap.boxes.push_back(Box{{image}});  // identical domains
      } else {
        // Remove the image of chart j's cut point from chart i's image.
        const double split =
            spec.scale * (bases[iu] + wrap_angle(cut_j - centers[iu]));
        overlap.boxes.push_back(Box{{Interval{image.lo, split}}});
        overlap.boxes.push_back(Box{{Interval{split, image.hi}}});
      }
      data.overlap_images[{i, j}] = std::move(overlap);
    }
  }

  data.sampler = [](Rng& rng) {
    const double theta = rng.uniform(-kPi, kPi);
    return ManifoldPoint{{std::cos(theta), std::sin(theta)}};
  };
  data.distance = [](const ManifoldPoint& a, const ManifoldPoint& b) {
    return std::abs(wrap_angle(theta_of(a) - theta_of(b)));
  };
  return ClassicalAtlas(std::move(data));
}

ClassicalAtlas with_step_corruption(const ClassicalAtlas& base, int i, int j, double u_star,
                                    double jump) {
  if (base.dim() != 1) throw Error("with_step_corruption: only 1-d chart images supported");
  ClassicalAtlas::Data data = base.data();
  const ClassicalAtlas clean(base.data());
  data.transition_overrides[{i, j}] = [clean, i, j, u_star,
                                       jump](std::span<const double> u) {
    std::vector<double> v = clean.transition(i, j, u);
    if (u[0] >= u_star) v[0] += jump;
    return v;
  };
  return ClassicalAtlas(std::move(data));
}

// ---------------------------------------------------------------------------

SchwartzFn QuantumChart::phi(const QuantumPoint& psi) const { return atlas->phi(index, psi); }

QuantumPoint QuantumChart::phi_inverse(const SchwartzFn& f) const {
  return atlas->phi_inverse(index, f);
}

QuantumAtlas::QuantumAtlas(ClassicalAtlas atlas, QuantizationConfig cfg)
    : atlas_(std::move(atlas)), cfg_(cfg) {
  const int k = cfg_.degree;
  const int heuristic =
      k + static_cast<int>(std::ceil(6.0 * cfg_.max_shift * std::sqrt(k + 1.0))) + 8;
  working_degree_ = std::min(heuristic, 2 * k + 8);
}

SchwartzFn QuantumAtlas::settle(const SchwartzFn& f) const {
  if (f.degree() <= working_degree_) return f;
  double lost = 0.0;
  SchwartzFn cut = f.truncated_to(working_degree_, &lost);
  if (lost > 1e-22 * f.norm_sq()) return f;  // keep the exact value
  return cut;
}

SchwartzFn QuantumAtlas::phi(int i, const QuantumPoint& psi) const {
  const ClassicalChart& chart = atlas_.chart(i);
  if (!chart.contains(psi.base)) {
    throw SampleOutsideChart("phi: base point outside chart '" + chart.id + "'");
  }
  if (!psi.fiber.is_nonzero(cfg_.tol.nonzero)) {
    throw NonzeroRequired("phi: fiber must be a nonzero function");
  }
  const double off = inf_norm(position_expectation(psi.fiber, cfg_.tol).value);
  if (off > cfg_.tol.fiber) {
    throw PreconditionError("phi: fiber expectation " + sci(off) +
                            " outside the zero-expectation band");
  }
  const std::vector<double> shift = chart.map(psi.base);
  return settle(translate(psi.fiber, shift, TranslationConfig::from(cfg_.tol)));
}

QuantumPoint QuantumAtlas::phi_inverse(int i, const SchwartzFn& f) const {
  const ClassicalChart& chart = atlas_.chart(i);
  if (!f.is_nonzero(cfg_.tol.nonzero)) {
    throw NonzeroRequired("phi_inverse: input must be a nonzero function");
  }
  const ExpectationValue q = position_expectation(f, cfg_.tol);
  if (!chart.image.contains(q.value)) {
    throw SampleOutsideChart("phi_inverse: expectation value outside image of chart '" +
                             chart.id + "'");
  }
  SchwartzFn fiber =
      settle(translate(f, negated(q.value), TranslationConfig::from(cfg_.tol)));
  return QuantumPoint{chart.inverse(q.value), std::move(fiber)};
}

QuantumAtlas trivial_quantization(const ClassicalAtlas& atlas, const QuantizationConfig& cfg) {
  for (int i = 0; i < atlas.chart_count(); ++i) {
    for (const Box& box : atlas.chart(i).image.boxes) {
      double corner_sq = 0.0;
      for (const Interval& iv : box.axes) {
        corner_sq += std::pow(std::max(std::abs(iv.lo), std::abs(iv.hi)), 2);
      }
      if (std::sqrt(corner_sq) > cfg.max_shift) {
        throw PreconditionError(
            "trivial_quantization: image of chart '" + atlas.chart(i).id +
            "' exceeds the translation budget; rescale the chart ranges");
      }
    }
  }
  return QuantumAtlas(atlas, cfg);
}

SchwartzFn quantum_transition(const QuantumAtlas& qa, int i, int j, const SchwartzFn& f) {
  const ExpectationValue q = position_expectation(f, qa.config().tol);
  if (!qa.classical().overlap_image(i, j).contains(q.value)) {
    throw SampleOutsideChart("quantum_transition: expectation value outside the overlap");
  }
  const TranslationConfig tr = TranslationConfig::from(qa.config().tol);
  const SchwartzFn centered = qa.settle(translate(f, negated(q.value), tr));
  const std::vector<double> target = qa.classical().transition(i, j, q.value);
  return qa.settle(translate(centered, target, tr));
}

std::vector<double> recover_classical_transition(const QuantumAtlas& qa, int i, int j,
                                                 std::span<const double> x) {
  // The probe section must be converged well beyond the tolerance of the
  // comparison: its expectation bias scales like the discarded mass.
  Tolerances tight = qa.config().tol;
  tight.section = std::min(tight.section, 1e-13);
  const SchwartzFn section = gaussian_section_auto(x, qa.config().degree, tight);
  return position_expectation(quantum_transition(qa, i, j, section), qa.config().tol).value;
}

ManifoldPoint kolmogorov_project(const QuantumAtlas& qa, int i, const SchwartzFn& f) {
  const ExpectationValue q = position_expectation(f, qa.config().tol);
  if (!qa.classical().chart(i).image.contains(q.value)) {
    throw SampleOutsideChart("kolmogorov_project: expectation value outside the chart image");
  }
  return qa.classical().chart(i).inverse(q.value);
}

ManifoldPoint kolmogorov_project(const QuantumAtlas& qa, int i, const QuantumPoint& psi) {
  return kolmogorov_project(qa, i, qa.phi(i, psi));
}

SchwartzFn sample_fiber_element(Rng& rng, int dim, int degree, const Tolerances& tol) {
  const std::vector<double> origin(static_cast<std::size_t>(dim), 0.0);
  SchwartzFn f = gaussian_section_auto(origin, degree, tol);
  const int mix_degree = std::max(1, degree / 3);
  std::size_t total = 1;
  for (int a = 0; a < dim; ++a) total *= static_cast<std::size_t>(mix_degree) + 1;
  std::vector<Complex> c(total);
  for (auto& z : c) z = rng.complex_normal();
  const SchwartzFn mix(dim, mix_degree, std::move(c));
  f = f + (0.2 * f.norm() / std::max(mix.norm(), 1e-30)) * mix.padded_to(degree);
  f = (1.0 / f.norm()) * f;
  return project_to_fiber(f, tol);
}

// ---------------------------------------------------------------------------
// Condition checks.

std::vector<CheckRecord> verify_quantum_atlas(const QuantumAtlas& qa, int sample_budget,
                                              Rng& rng) {
  std::vector<CheckRecord> out;
  const ClassicalAtlas& ca = qa.classical();
  const Tolerances& tol = qa.config().tol;
  const int n = ca.dim();
  const int degree = qa.config().degree;
  const int budget = std::max(8, sample_budget);

  // (i) Covering: every sampled point lies in at least one chart domain
  // (the product with the fiber is covered chartwise by construction).
  {
    int missed = 0;
    for (int s = 0; s < budget; ++s) {
      const ManifoldPoint p = ca.sample(rng);
      bool in_any = false;
      for (int i = 0; i < ca.chart_count(); ++i) in_any = in_any || ca.chart(i).contains(p);
      missed += in_any ? 0 : 1;
    }
    out.push_back(CheckRecord::from_residual("condition-i-covering",
                                             "(i) chart domains cover the manifold",
                                             missed, 0.0));
  }

  // (ii) Bijectivity: phi then phi^{-1} restores base point and fiber.
  {
    double worst = 0.0;
    const int per_chart = std::max(4, budget / 4);
    for (int i = 0; i < ca.chart_count(); ++i) {
      for (int s = 0; s < per_chart; ++s) {
        const ManifoldPoint xi = sample_in_chart(ca, i, rng);
        const SchwartzFn g = sample_fiber_element(rng, n, degree, tol);
        const SchwartzFn f = qa.phi(i, QuantumPoint{xi, g});
        const QuantumPoint back = qa.phi_inverse(i, f);
        worst = std::max(worst, ca.distance(back.base, xi));
        worst = std::max(worst, (back.fiber - g).norm());
      }
    }
    out.push_back(CheckRecord::from_residual("condition-ii-bijectivity",
                                             "(ii) each phi_i is a bijection onto its image",
                                             worst, tol.chart));
  }

  const auto pairs = probe_pairs(ca);

  // (iii) Overlap characterization: expectation values of chart images of
  // overlap points land in the interval description of chi_i(X_i ^ X_j).
  {
    int outside = 0;
    const int per_pair = std::max(4, budget / 8);
    for (const auto& [i, j] : pairs) {
      for (int s = 0; s < per_pair; ++s) {
        const ManifoldPoint xi = sample_in_overlap(ca, i, j, rng);
        const SchwartzFn g = sample_fiber_element(rng, n, degree, tol);
        const SchwartzFn f = qa.phi(i, QuantumPoint{xi, g});
        const ExpectationValue q = position_expectation(f, tol);
        const bool ok =
            ca.overlap_image(i, j).contains(q.value) && ca.chart(i).image.contains(q.value);
        outside += ok ? 0 : 1;
      }
    }
    out.push_back(CheckRecord::from_residual(
        "condition-iii-overlap-images",
        "(iii) overlap images are pre-images of open sets under the expectation map",
        outside, 0.0));
  }

  // (iv) Transition continuity: the expectation-value modulus of phi_ji
  // must shrink (at least) linearly with the input modulus.
  {
    double min_slope = 10.0;
    bool any_probe = false;
    for (const auto& [i, j] : pairs) {
      std::vector<double> radii;
      std::vector<double> moduli;
      for (const Box& component : ca.overlap_image(i, j).boxes) {
        double min_width = 1e300;
        std::vector<double> center;
        for (const Interval& iv : component.axes) {
          min_width = std::min(min_width, iv.width());
          center.push_back(iv.midpoint());
        }
        const double r0 = 0.05 * min_width;
        const auto value = [&](std::span<const double> u) {
          const SchwartzFn section = gaussian_section_auto(u, degree, tol);
          return position_expectation(quantum_transition(qa, i, j, section), tol).value;
        };
        const std::vector<double> base_val = value(center);
        for (int level = 0; level < 3; ++level) {
          const double r = r0 / std::pow(4.0, level);
          double modulus = 0.0;
          for (int a = 0; a < n; ++a) {
            for (double sign : {1.0, -1.0}) {
              std::vector<double> probe = center;
              probe[static_cast<std::size_t>(a)] += sign * r;
              if (!ca.overlap_image(i, j).contains(probe)) continue;
              const std::vector<double> moved = value(probe);
              for (int c = 0; c < n; ++c) {
                modulus = std::max(modulus,
                                   std::abs(moved[static_cast<std::size_t>(c)] -
                                            base_val[static_cast<std::size_t>(c)]));
              }
            }
          }
          radii.push_back(r);
          moduli.push_back(modulus);
        }
      }
      if (radii.empty()) continue;
      any_probe = true;
      bool all_tiny = true;
      for (double m : moduli) all_tiny = all_tiny && m < 1e-12;
      min_slope = std::min(min_slope, all_tiny ? 1.0 : loglog_slope(radii, moduli));
    }
    CheckRecord rec = CheckRecord::from_residual(
        "condition-iv-continuity",
        "(iv) transitions are continuous in the expectation values",
        any_probe ? 0.9 - min_slope : 1e300, 0.0);
    rec.note = "min modulus slope = " + std::to_string(min_slope) + " (need >= 0.9)";
    out.push_back(std::move(rec));
  }

  // (iv) Transition differentiability: linearization remainder along
  // sampled directions shrinks quadratically. The directional derivative
  // is estimated by Richardson-extrapolated central differences.
  {
    double min_slope = 10.0;
    bool all_vacuous = true;
    const int dirs = std::max(1, budget / 16);
    const auto grid = default_t_grid();
    for (const auto& [i, j] : pairs) {
      const Box& component = ca.overlap_image(i, j).boxes.front();
      std::vector<double> center;
      double half_width = 1e300;
      for (const Interval& iv : component.axes) {
        center.push_back(iv.midpoint());
        half_width = std::min(half_width, 0.5 * iv.width());
      }
      const SchwartzFn f0 = gaussian_section_auto(center, degree, tol);
      const auto transition = [&](const SchwartzFn& f) {
        return quantum_transition(qa, i, j, f);
      };
      for (int d = 0; d < dirs; ++d) {
        std::size_t total = 1;
        const int dir_degree = std::min(6, degree);
        for (int a = 0; a < n; ++a) total *= static_cast<std::size_t>(dir_degree) + 1;
        std::vector<Complex> c(total);
        for (auto& z : c) z = rng.complex_normal();
        SchwartzFn dir(n, dir_degree, std::move(c));
        dir = (1.0 / dir.norm()) * dir;
        // Probes must stay inside this overlap component, or the
        // transition hops branches; shrink the direction until the
        // expectation drift at the largest step is safely small.
        const double t_max = grid.front();
        for (int attempt = 0; attempt < 12; ++attempt) {
          const auto q_moved =
              position_expectation(f0 + t_max * dir.padded_to(degree), tol).value;
          double drift = 0.0;
          for (int a = 0; a < n; ++a) {
            drift = std::max(drift, std::abs(q_moved[static_cast<std::size_t>(a)] -
                                             center[static_cast<std::size_t>(a)]));
          }
          if (drift <= 0.25 * half_width) break;
          dir = 0.5 * dir;
        }
        const SchwartzFn dirp = dir.padded_to(degree);

        const double h = 2e-2;
        const SchwartzFn d_h =
            (0.5 / h) * (transition(f0 + h * dirp) - transition(f0 - h * dirp));
        const SchwartzFn d_h2 = (1.0 / h) * (transition(f0 + 0.5 * h * dirp) -
                                             transition(f0 - 0.5 * h * dirp));
        const SchwartzFn deriv = (1.0 / 3.0) * (4.0 * d_h2 - d_h);

        const SchwartzFn base_out = transition(f0);
        std::vector<double> residuals;
        for (double t : grid) {
          const SchwartzFn moved = transition(f0 + t * dirp);
          residuals.push_back(nuclear_seminorm(moved - base_out - t * deriv, 1));
        }
        // A transition that is linear along this direction leaves only
        // roundoff; that certifies tangency rather than defeating the fit.
        const double floor = 1e-12 * std::max(1.0, nuclear_seminorm(base_out, 1));
        bool vacuous = true;
        for (double r : residuals) vacuous = vacuous && r < floor;
        if (!vacuous) {
          all_vacuous = false;
          min_slope = std::min(min_slope, loglog_slope(grid, residuals));
        }
      }
    }
    CheckRecord rec = CheckRecord::from_residual(
        "condition-iv-differentiability",
        "(iv) transitions are differentiable along sampled directions",
        all_vacuous ? 0.0 : 1.9 - min_slope, 0.0);
    rec.note = all_vacuous
                   ? "all remainders at roundoff (linear transitions; vacuous tangency)"
                   : "min remainder slope = " + std::to_string(min_slope) + " (need >= 1.9)";
    out.push_back(std::move(rec));
  }

  return out;
}

std::vector<CheckRecord> verify_local_triviality(const QuantumAtlas& qa, int chart,
                                                 int samples, Rng& rng) {
  const ClassicalAtlas& ca = qa.classical();
  const Tolerances& tol = qa.config().tol;
  const ClassicalChart& ch = ca.chart(chart);

  double worst_projection = 0.0;
  double worst_round_trip = 0.0;
  for (int s = 0; s < samples; ++s) {
    const ManifoldPoint xi = sample_in_chart(ca, chart, rng);
    const SchwartzFn g = sample_fiber_element(rng, ca.dim(), qa.config().degree, tol);
    const QuantumPoint psi{xi, g};

    // omega = (chi^{-1} x id) o tau o phi.
    const SchwartzFn f = qa.phi(chart, psi);
    const FiberPoint split = trivialize(f, tol);
    const ManifoldPoint omega1 = ch.inverse(split.base);

    // First component must be the projection onto the base point.
    worst_projection = std::max(worst_projection, ca.distance(omega1, xi));

    // Invertibility: omega^{-1} = phi^{-1} o tau^{-1} o (chi x id).
    const SchwartzFn rebuilt =
        qa.settle(translate(split.fiber, ch.map(omega1), TranslationConfig::from(tol)));
    const QuantumPoint back = qa.phi_inverse(chart, rebuilt);
    worst_round_trip = std::max(worst_round_trip, ca.distance(back.base, xi));
    worst_round_trip = std::max(worst_round_trip, (back.fiber - g).norm());
  }

  std::vector<CheckRecord> out;
  out.push_back(CheckRecord::from_residual(
      "local-triviality-projection-" + ch.id,
      "first component of (chi^{-1} x id) o tau o phi equals the base projection",
      worst_projection, tol.chart));
  out.push_back(CheckRecord::from_residual(
      "local-triviality-round-trip-" + ch.id,
      "(chi^{-1} x id) o tau o phi is invertible on samples", worst_round_trip, tol.chart));
  return out;
}

}  // namespace qmfd
