#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "knotforge/directional.hpp"
#include "knotforge/errors.hpp"
#include "knotforge/fixtures.hpp"

using namespace knotforge;
using namespace knotforge::directional;

namespace {

curves::PolygonalKnot unit_square() {
  return curves::PolygonalKnot::from_vertices(
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, false);
}

curves::ParametricKnot torus(int p, int q) {
  curves::TorusKnotSpec spec;
  spec.p = p;
  spec.q = q;
  spec.major_radius = Rat(2);
  spec.minor_radius = Rat(1);
  return curves::torus_curve(spec);
}

}  // namespace

TEST_CASE("axis-aligned direction on the square is a level-edge degeneracy") {
  auto sq = unit_square();
  CHECK_THROWS_AS(bridge_count_polygonal(sq, Direction::of({1, 0, 0})), NonGenericDirection);
  // the plateau policy resolves it instead: one flat maximum component
  auto bc = bridge_count_polygonal(sq, Direction::of({1, 0, 0}), LevelEdgePolicy::kPlateau);
  CHECK(bc.value == 1);
  CHECK_FALSE(bc.generic);
}

TEST_CASE("generic planar direction sees one maximum on a convex polygon") {
  auto bc = bridge_count_polygonal(unit_square(), Direction::of({1, 2, 0}));
  CHECK(bc.value == 1);
  CHECK(bc.generic);
  CHECK(bc.witnesses.size() == 1);
}

TEST_CASE("dense torus polygon keeps the q maxima of its z coordinate") {
  auto poly = curves::sample_polygon(torus(2, 3), 2000);
  auto bc = bridge_count_polygonal(poly, Direction::of({0, 0, 1}));
  CHECK(bc.value == 3);
}

TEST_CASE("maxima and minima components always balance") {
  auto fixtures_list = {fixtures::trefoil_polygon(48), fixtures::fig8_polygon(60)};
  SplitMix64 rng(7);
  for (const auto& poly : fixtures_list) {
    for (int trial = 0; trial < 50; ++trial) {
      Vec3 v = rng.unit_vector();
      try {
        auto up = bridge_count_polygonal(poly, Direction{v});
        auto down = bridge_count_polygonal(poly, Direction{-v});
        CHECK(up.value == down.value);
        CHECK(up.value >= 1);
      } catch (const NonGenericDirection&) {
        // measure-zero; skip
      }
    }
  }
}

TEST_CASE("smooth bridge counts on closed-form curves") {
  auto circle = fixtures::unit_circle();
  CHECK(bridge_count_smooth(circle, Direction::of({0.3, -0.2, 0.93}), 256).value == 1);

  auto fig8 = fixtures::fig8_trig();
  auto bc = bridge_count_smooth(fig8, Direction::of({0, 0, 1}), 4096);
  CHECK(bc.value >= 1);
  CHECK(bc.value <= 3);  // degree-3 height functions cap at 3 maxima

  CHECK(bridge_count_smooth(torus(2, 5), Direction::of({0, 0, 1}), 4096).value == 5);
}

TEST_CASE("smooth counts agree when the grid is doubled") {
  auto fig8 = fixtures::fig8_trig();
  SplitMix64 rng(11);
  for (int trial = 0; trial < 25; ++trial) {
    Vec3 v = rng.unit_vector();
    auto a = bridge_count_smooth(fig8, Direction{v}, 1024);
    auto b = bridge_count_smooth(fig8, Direction{v}, 2048);
    CHECK(a.value == b.value);
  }
  auto poly = fixtures::fig8_polynomial();
  for (int trial = 0; trial < 10; ++trial) {
    Vec3 v = rng.unit_vector();
    auto a = bridge_count_smooth(poly, Direction{v}, 512);
    auto b = bridge_count_smooth(poly, Direction{v}, 1024);
    CHECK(a.value == b.value);
  }
}

TEST_CASE("smooth root refinement pins witnesses to derivative zeros") {
  auto t25 = torus(2, 5);
  auto bc = bridge_count_smooth(t25, Direction::of({0, 0, 1}), 1024);
  REQUIRE(bc.value == 5);
  // maxima of sin(5 theta): theta = (pi/4 of the period + full turns) / 5
  for (int k = 0; k < 5; ++k) {
    double expect = (kTau / 4 + kTau * k) / 5;
    bool found = false;
    for (double w : bc.witnesses)
      if (std::abs(w - expect) < 1e-8) found = true;
    CHECK(found);
  }
}

TEST_CASE("sphere search on the circle bottoms out at one") {
  auto rep = sphere_search(curves::sample_polygon(fixtures::unit_circle(), 64),
                           {SearchMode::kMin, 1000, 42, 512, false});
  CHECK(rep.best_value == 1);
  CHECK(rep.samples == 1000);
  std::uint64_t total = 0;
  for (auto& [v, c] : rep.histogram) total += c;
  CHECK(total == rep.samples);
  CHECK(rep.histogram.count(rep.best_value) == 1);
}

TEST_CASE("trefoil fixture attains its bridge number two") {
  auto rep = sphere_search(fixtures::trefoil_polygon(48),
                           {SearchMode::kMin, 2000, 42, 512, false});
  CHECK(rep.best_value == 2);
}

TEST_CASE("figure-eight sphere maximum is three and never more") {
  auto rep = sphere_search(fixtures::fig8_trig(), {SearchMode::kMax, 2000, 42, 1024, false});
  CHECK(rep.best_value == 3);
  for (auto& [value, count] : rep.histogram) CHECK(value <= 3);
}

TEST_CASE("sphere reports are deterministic") {
  SearchParams params{SearchMode::kMax, 500, 99, 512, true};
  auto a = sphere_search(fixtures::trefoil_polygon(48), params);
  auto b = sphere_search(fixtures::trefoil_polygon(48), params);
  CHECK(a.to_json() == b.to_json());
}

TEST_CASE("sampled maximum dominates sampled minimum on knotted fixtures") {
  for (int n : {36, 48}) {
    auto poly = fixtures::trefoil_polygon(n);
    auto lo = sphere_search(poly, {SearchMode::kMin, 600, 42, 512, false});
    auto hi = sphere_search(poly, {SearchMode::kMax, 600, 42, 512, false});
    CHECK(hi.best_value >= lo.best_value);
    CHECK(hi.best_value >= 2 + 1);  // the trefoil is 2-bridge
  }
}

TEST_CASE("straightening never raises the bridge count") {
  auto trefoil = fixtures::trefoil_polygon(48);
  auto fig8 = fixtures::fig8_polygon(60);
  SplitMix64 rng(1234);
  int checked = 0;
  while (checked < 200) {
    const auto& poly = (checked % 2 == 0) ? trefoil : fig8;
    std::size_t n = poly.size();
    std::size_t start = rng.next() % n;
    std::size_t len = 2 + rng.next() % (n - 4);
    curves::SubarcSpec arc{start, (start + len) % n};
    Vec3 v = rng.unit_vector();
    try {
      auto res = curves::straighten_subarc(poly, arc);
      int before = bridge_count_polygonal(poly, Direction{v}).value;
      int after = bridge_count_polygonal(res.knot, Direction{v}).value;
      CHECK(after <= before);
      ++checked;
    } catch (const NonGenericDirection&) {
    } catch (const DegeneratePolygon&) {
    }
  }
}

TEST_CASE("total curvature of flat polygons") {
  CHECK(total_curvature(unit_square()) == kTau);  // exactly 2*pi
  for (int n : {5, 12, 33}) {
    auto gon = fixtures::planar_convex_polygon(n);
    CHECK(total_curvature(gon) == doctest::Approx(kTau).epsilon(1e-12));
  }
}

TEST_CASE("knotted polygons exceed the Fary-Milnor bound") {
  CHECK(total_curvature(fixtures::trefoil_polygon(48)) > 2 * kTau);
}

TEST_CASE("anti-parallel edges are a degenerate angle") {
  // a doubled-back triangle: the turn at (2,0,0) reverses direction
  auto bad = curves::PolygonalKnot::from_vertices(
      {{0, 0, 0}, {2, 0, 0}, {1, 1e-13, 0}}, false);
  CHECK_THROWS_AS(total_curvature(bad), DegenerateAngle);
  CHECK_THROWS_AS(milnor_average_check(bad, 100, 1), DegenerateAngle);
}

TEST_CASE("direction-averaged bridge count tracks curvature over two pi") {
  auto sq = unit_square();
  auto chk = milnor_average_check(sq, 20000, 42);
  CHECK(chk.curvature_over_2pi == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(chk.discrepancy < 0.05);

  auto chk2 = milnor_average_check(fixtures::trefoil_polygon(48), 20000, 42);
  CHECK(chk2.discrepancy < 0.1);
}

TEST_CASE("milnor discrepancy shrinks as samples grow") {
  auto poly = fixtures::trefoil_polygon(36);
  for (int n : {2000, 8000}) {
    auto coarse = milnor_average_check(poly, n, 7);
    auto fine = milnor_average_check(poly, 4 * n, 7);
    CHECK(fine.discrepancy <= coarse.discrepancy + 2.0 / std::sqrt(n));
  }
}

TEST_CASE("torus superbridge index formula") {
  CHECK(torus_superbridge_index(2, 3) == 3);
  CHECK(torus_superbridge_index(2, 5) == 4);
  CHECK(torus_superbridge_index(2, 7) == 4);
  CHECK(torus_superbridge_index(2, 9) == 4);
  CHECK(torus_superbridge_index(3, 5) == 5);
  CHECK_THROWS_AS(torus_superbridge_index(2, 4), InvalidTorusType);
  CHECK_THROWS_AS(torus_superbridge_index(1, 5), InvalidTorusType);
  CHECK_THROWS_AS(torus_superbridge_index(3, 2), InvalidTorusType);
}

TEST_CASE("the formula lower-bounds the sampled maximum of the standard curve") {
  for (auto [p, q] : {std::pair{2, 3}, std::pair{2, 5}}) {
    auto rep = sphere_search(torus(p, q), {SearchMode::kMax, 800, 42, 1024, false});
    CHECK(rep.best_value >= torus_superbridge_index(p, q));
  }
}

TEST_CASE("direction validation") {
  CHECK_THROWS_AS(Direction::of({0, 0, 0}), NonGenericDirection);
  Direction d = Direction::of({3, 4, 0});
  CHECK(d.v.norm() == doctest::Approx(1.0).epsilon(1e-14));
}
