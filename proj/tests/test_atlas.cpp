#include <doctest.h>

#include <cmath>
#include <vector>

#include "qmanifold/atlas.hpp"
#include "qmanifold/expectation.hpp"
#include "qmanifold/rng.hpp"

using namespace qmfd;

namespace {

constexpr double kPi = 3.141592653589793238462643;

QuantizationConfig small_config(int degree) {
  QuantizationConfig cfg;
  cfg.degree = degree;
  return cfg;
}

const CheckRecord& find_record(const std::vector<CheckRecord>& records,
                               const std::string& id) {
  for (const auto& r : records) {
    if (r.id == id) return r;
  }
  throw std::runtime_error("record not found: " + id);
}

}  // namespace

TEST_CASE("circle transition has the identity and +2pi branches") {
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{.scale = 1.0});
  REQUIRE(circle.chart_count() == 2);

  // Identity branch on (0, pi).
  const std::vector<double> u1{kPi / 2.0};
  CHECK(circle.transition(0, 1, u1)[0] == doctest::Approx(kPi / 2.0).epsilon(1e-14));
  // Wrapped branch on (-pi, 0): theta + 2 pi.
  const std::vector<double> u2{-kPi / 2.0};
  CHECK(circle.transition(0, 1, u2)[0] == doctest::Approx(3.0 * kPi / 2.0).epsilon(1e-14));

  // Overlap image of chart 0 excludes the other chart's cut value 0.
  const Region& overlap = circle.overlap_image(0, 1);
  REQUIRE(overlap.boxes.size() == 2);
  const std::vector<double> at_zero{0.0};
  CHECK_FALSE(overlap.contains(at_zero));
  const std::vector<double> inside{0.3};
  CHECK(overlap.contains(inside));

  // Chart round trips on sampled points.
  Rng rng(7);
  for (int s = 0; s < 50; ++s) {
    const ManifoldPoint p = circle.sample(rng);
    for (int i = 0; i < 2; ++i) {
      if (!circle.chart(i).contains(p)) continue;
      const ManifoldPoint back = circle.chart(i).inverse(circle.chart(i).map(p));
      CHECK(circle.distance(back, p) < 1e-12);
    }
  }
}

TEST_CASE("euclidean atlas is a single identity chart") {
  const ClassicalAtlas plane = make_classical_atlas(EuclideanSpec{.n = 2});
  REQUIRE(plane.chart_count() == 1);
  const std::vector<double> u{0.3, -0.8};
  const auto v = plane.transition(0, 0, u);
  CHECK(v[0] == 0.3);
  CHECK(v[1] == -0.8);

  Rng rng(9);
  const ManifoldPoint p = plane.sample(rng);
  CHECK(plane.chart(0).contains(p));
  CHECK(plane.distance(plane.chart(0).inverse(plane.chart(0).map(p)), p) == 0.0);
}

TEST_CASE("trivial quantization: chart maps shift the expectation value") {
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});  // scale 0.25
  const QuantumAtlas qa = trivial_quantization(circle, small_config(32));

  Rng rng(11);
  const SchwartzFn g = sample_fiber_element(rng, 1, 32);
  const ManifoldPoint xi{{std::cos(0.9), std::sin(0.9)}};
  const SchwartzFn f = qa.phi(0, QuantumPoint{xi, g});
  const double expected = circle.chart(0).map(xi)[0];
  CHECK(std::abs(position_expectation(f).value[0] - expected) < 1e-9);

  // Round trip through the chart.
  const QuantumPoint back = qa.phi_inverse(0, f);
  CHECK(circle.distance(back.base, xi) < 1e-8);
  CHECK((back.fiber - g).norm() < 1e-8);

  // The chart view behaves identically.
  const QuantumChart view = qa.chart(0);
  CHECK((view.phi(QuantumPoint{xi, g}) - f).norm() == 0.0);
}

TEST_CASE("trivial quantization rejects bad inputs") {
  const ClassicalAtlas wide_circle = make_classical_atlas(CircleSpec{.scale = 1.0});
  CHECK_THROWS_AS(trivial_quantization(wide_circle, small_config(16)), PreconditionError);

  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
  const QuantumAtlas qa = trivial_quantization(circle, small_config(16));

  const ManifoldPoint xi{{1.0, 0.0}};  // theta = 0: the cut of chart 1
  CHECK_THROWS_AS(qa.phi(1, QuantumPoint{xi, SchwartzFn::basis(MultiIndex{1}, 16)}),
                  SampleOutsideChart);
  CHECK_THROWS_AS(qa.phi(0, QuantumPoint{xi, SchwartzFn::zero(1, 16)}), NonzeroRequired);

  // Fiber with visibly nonzero expectation: refused.
  const std::vector<double> off{0.3};
  CHECK_THROWS_AS(qa.phi(0, QuantumPoint{xi, gaussian_section(off, 24)}), PreconditionError);

  // phi_inverse outside the chart image: refused.
  const std::vector<double> outside{2.0 * 0.25 * kPi + 0.2};
  CHECK_THROWS_AS(qa.phi_inverse(0, gaussian_section(outside, 32).truncated_to(16)),
                  SampleOutsideChart);
}

TEST_CASE("quantum transitions act as the classical transition on expectation values") {
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
  const QuantumAtlas qa = trivial_quantization(circle, small_config(48));
  const double s = 0.25;

  // Identity region: the transition fixes the section.
  const std::vector<double> u{s * kPi / 2.0};
  const SchwartzFn f = gaussian_section(u, 48);
  const SchwartzFn moved = quantum_transition(qa, 0, 1, f);
  CHECK((moved - f.padded_to(moved.degree())).norm() < 1e-8);

  // Wrapped region: expectation follows the +2 pi s branch.
  const std::vector<double> w{-s * kPi / 2.0};
  const SchwartzFn fw = gaussian_section(w, 48);
  const double q_out = position_expectation(quantum_transition(qa, 0, 1, fw)).value[0];
  const double expected = circle.transition(0, 1, w)[0];
  CHECK(std::abs(q_out - expected) < 1e-8);

  // Outside the overlap: refused.
  const std::vector<double> outside{2.0 * s * kPi - 0.05};  // in chart 1's image only
  CHECK_THROWS_AS(quantum_transition(qa, 0, 1, gaussian_section(outside, 48)),
                  SampleOutsideChart);
}

TEST_CASE("classical transitions are recovered through the quantum maps") {
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
  const QuantumAtlas qa = trivial_quantization(circle, small_config(48));
  const double s = 0.25;

  Rng rng(13);
  for (int trial = 0; trial < 6; ++trial) {
    const double u = (trial % 2 == 0 ? 1.0 : -1.0) * rng.uniform(0.05, 0.95) * s * kPi;
    const std::vector<double> x{u};
    const double recovered = recover_classical_transition(qa, 0, 1, x)[0];
    const double closed_form = circle.transition(0, 1, x)[0];
    CHECK(std::abs(recovered - closed_form) < 1e-7);
  }

  // Euclidean: the single transition is the identity.
  const ClassicalAtlas plane = make_classical_atlas(EuclideanSpec{.n = 1});
  const QuantumAtlas qp = trivial_quantization(plane, small_config(32));
  const std::vector<double> x{0.6};
  CHECK(std::abs(recover_classical_transition(qp, 0, 0, x)[0] - 0.6) < 1e-9);
}

TEST_CASE("kolmogorov projection returns base points, chart-independently") {
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
  const QuantumAtlas qa = trivial_quantization(circle, small_config(32));

  Rng rng(17);
  for (int trial = 0; trial < 5; ++trial) {
    const ManifoldPoint xi = [&] {
      ManifoldPoint p = circle.sample(rng);
      while (!(circle.chart(0).contains(p) && circle.chart(1).contains(p))) {
        p = circle.sample(rng);
      }
      return p;
    }();
    const SchwartzFn g = sample_fiber_element(rng, 1, 32);
    const QuantumPoint psi{xi, g};

    const ManifoldPoint via0 = kolmogorov_project(qa, 0, psi);
    const ManifoldPoint via1 = kolmogorov_project(qa, 1, psi);
    CHECK(circle.distance(via0, xi) < 1e-7);
    CHECK(circle.distance(via0, via1) < 2e-7);

    // Indistinguishable points (same base, different fiber) project equally.
    const SchwartzFn g2 = sample_fiber_element(rng, 1, 32);
    const ManifoldPoint other = kolmogorov_project(qa, 0, QuantumPoint{xi, g2});
    CHECK(circle.distance(via0, other) < 2e-7);
  }
}

TEST_CASE("atlas conditions hold for both built-in manifolds") {
  Rng rng(19);
  {
    const ClassicalAtlas plane = make_classical_atlas(EuclideanSpec{.n = 1});
    const QuantumAtlas qa = trivial_quantization(plane, small_config(24));
    const auto records = verify_quantum_atlas(qa, 16, rng);
    for (const auto& r : records) {
      INFO(r.id, ": ", r.note);
      CHECK(r.status == CheckStatus::pass);
    }
  }
  {
    const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
    const QuantumAtlas qa = trivial_quantization(circle, small_config(32));
    const auto records = verify_quantum_atlas(qa, 16, rng);
    for (const auto& r : records) {
      INFO(r.id, ": ", r.note);
      CHECK(r.status == CheckStatus::pass);
    }
  }
}

TEST_CASE("a corrupted transition is caught by the continuity probe") {
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
  const double s = 0.25;
  // Step discontinuity at the midpoint of the positive overlap component.
  const ClassicalAtlas bad = with_step_corruption(circle, 0, 1, s * kPi / 2.0, 0.1);
  const QuantumAtlas qa = trivial_quantization(bad, small_config(32));

  Rng rng(23);
  const auto records = verify_quantum_atlas(qa, 16, rng);
  CHECK(find_record(records, "condition-iv-continuity").status == CheckStatus::fail);
  CHECK(find_record(records, "condition-i-covering").status == CheckStatus::pass);
  CHECK(find_record(records, "condition-ii-bijectivity").status == CheckStatus::pass);
  CHECK(find_record(records, "condition-iii-overlap-images").status == CheckStatus::pass);
}

TEST_CASE("local triviality over each chart") {
  Rng rng(29);
  const ClassicalAtlas circle = make_classical_atlas(CircleSpec{});
  const QuantumAtlas qa = trivial_quantization(circle, small_config(32));
  for (int chart = 0; chart < qa.chart_count(); ++chart) {
    const auto records = verify_local_triviality(qa, chart, 8, rng);
    for (const auto& r : records) {
      INFO(r.id);
      CHECK(r.status == CheckStatus::pass);
    }
  }
}

TEST_CASE("union with a rotated copy is still a valid atlas") {
  Rng rng(31);
  const ClassicalAtlas joined =
      make_classical_atlas(CircleSpec{.with_rotated_copy = true});
  REQUIRE(joined.chart_count() == 4);
  const QuantumAtlas qa = trivial_quantization(joined, small_config(32));
  const auto records = verify_quantum_atlas(qa, 8, rng);
  for (const auto& r : records) {
    INFO(r.id, ": ", r.note);
    CHECK(r.status == CheckStatus::pass);
  }
}
