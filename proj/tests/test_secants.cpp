#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "knotforge/errors.hpp"
#include "knotforge/fixtures.hpp"
#include "knotforge/secants.hpp"

using namespace knotforge;
using namespace knotforge::secants;

namespace {

double incidence(const PluckerLine& a, const PluckerLine& b) { return std::abs(a.side(b)); }

// every returned secant must satisfy the hit contracts
void check_secant_contract(const curves::PolygonalKnot& knot, const SecantLine& s) {
  double tol = 1e-9 * knot.scale();
  REQUIRE(s.hits.size() >= 4);
  CHECK(std::abs(s.line.d.dot(s.line.m)) < 1e-10 * knot.scale());
  for (std::size_t i = 0; i < s.hits.size(); ++i) {
    const auto& h = s.hits[i];
    Vec3 on_edge = knot.vertex(h.edge) + knot.edge_vector(h.edge) * h.t_on_edge;
    CHECK((on_edge - h.point).norm() < tol);
    CHECK(s.line.distance_to(h.point) < tol);
    if (i > 0) {
      CHECK((s.hits[i].point - s.hits[i - 1].point).norm() > tol);
      CHECK(s.line.coordinate_of(s.hits[i].point) >
            s.line.coordinate_of(s.hits[i - 1].point));
    }
  }
}

}  // namespace

TEST_CASE("plucker construction satisfies the quadric and incidence") {
  auto l1 = PluckerLine::through_points({0, 0, 0}, {1, 0, 0});
  auto l2 = PluckerLine::through_points({0.5, -1, 0}, {0.5, 2, 0});  // meets l1
  auto l3 = PluckerLine::through_points({0, 0, 1}, {0, 1, 1});       // skew to l1
  CHECK(std::abs(l1.d.dot(l1.m)) < 1e-15);
  CHECK(incidence(l1, l2) < 1e-12);
  CHECK(incidence(l1, l3) > 0.5);
  CHECK(l1.distance_to({3, 4, 0}) == doctest::Approx(4));
  CHECK((PluckerLine::through_points({1, 1, 1}, {0, 1, 1}).canonical().d -
         Vec3{1, 0, 0}).norm() < 1e-12);
}

TEST_CASE("four concurrent lines admit infinitely many transversals") {
  auto mk = [](Vec3 d) { return PluckerLine::from_direction_point(d, {0, 0, 0}); };
  CHECK_THROWS_AS(transversals_of_four_lines(mk({1, 0, 0}), mk({0, 1, 0}), mk({0, 0, 1}),
                                             mk({1, 1, 1})),
                  Degenerate);
}

TEST_CASE("four coplanar lines are degenerate") {
  auto mk = [](Vec3 p, Vec3 d) { return PluckerLine::from_direction_point(d, p); };
  CHECK_THROWS_AS(
      transversals_of_four_lines(mk({0, 0, 0}, {1, 0, 0}), mk({0, 1, 0}, {1, 1, 0}),
                                 mk({0, 2, 0}, {1, -1, 0}), mk({0, 3, 0}, {1, 2, 0})),
      Degenerate);
}

TEST_CASE("skew cube edges plus a perturbed known transversal give two lines") {
  // edges of the unit cube: {(t,0,0)}, {(1,t,1)}, {(0,1,t)}; the transversal
  // through (1/2,0,0) was computed by intersecting the two spanned planes by
  // hand: direction (-1,2,-2), hitting (1,-1,1) and (0,1,-1).
  auto l1 = PluckerLine::through_points({0, 0, 0}, {1, 0, 0});
  auto l2 = PluckerLine::through_points({1, 0, 1}, {1, 1, 1});
  auto l3 = PluckerLine::through_points({0, 1, 0}, {0, 1, 1});
  PluckerLine known = PluckerLine::from_direction_point({-1, 2, -2}, {0.5, 0, 0});
  CHECK(incidence(known, l1) < 1e-12);
  CHECK(incidence(known, l2) < 1e-12);
  CHECK(incidence(known, l3) < 1e-12);

  PluckerLine l4 = PluckerLine::from_direction_point({-1 + 0.01, 2 + 0.02, -2 + 0.015},
                                                     {0.51, -0.005, 0.02});
  auto res = transversals_of_four_lines(l1, l2, l3, l4);
  REQUIRE(res.lines.size() == 2);
  for (const auto& t : res.lines) {
    CHECK(incidence(t, l1) < 1e-8);
    CHECK(incidence(t, l2) < 1e-8);
    CHECK(incidence(t, l3) < 1e-8);
    CHECK(incidence(t, l4) < 1e-8);
    CHECK(std::abs(t.d.dot(t.m)) < 1e-10);
  }
  // one solution tracks the unperturbed transversal
  double best = 1e300;
  for (const auto& t : res.lines)
    best = std::min(best, (t.canonical().d - known.canonical().d).norm());
  CHECK(best < 0.05);
}

TEST_CASE("four generic parallel lines admit no transversal") {
  auto mk = [](double x, double y, double z) {
    return PluckerLine::from_direction_point({0, 0, 1}, {x, y, z});
  };
  auto res = transversals_of_four_lines(mk(0, 0, 0), mk(1, 0, 2), mk(0, 1, 5), mk(2, 3, 1));
  CHECK(res.lines.empty());
}

TEST_CASE("a planar convex polygon has no quadrisecant") {
  auto gon = fixtures::planar_convex_polygon(20);
  QuadrisecantSearchStats stats;
  auto lines = quadrisecants(gon, &stats);
  CHECK(lines.empty());
  CHECK(stats.degenerate_triples > 0);  // the coplanar families were skipped, not missed
}

TEST_CASE("the trefoil fixture has a quadrisecant") {
  auto poly = fixtures::trefoil_polygon(48);
  auto lines = quadrisecants(poly);
  REQUIRE(!lines.empty());
  for (const auto& s : lines) check_secant_contract(poly, s);
}

TEST_CASE("quadrisecants are invariant under rigid motions") {
  auto poly = fixtures::trefoil_polygon(36);
  auto base = quadrisecants(poly);

  // seeded rotation + translation
  SplitMix64 rng(20240902);
  Vec3 axis = rng.unit_vector();
  double angle = 1.1;
  Vec3 shift{1.5, -0.75, 2.25};
  double c = std::cos(angle), s = std::sin(angle);
  auto rot = [&](const Vec3& v) {
    return v * c + axis.cross(v) * s + axis * (axis.dot(v) * (1 - c));
  };
  auto rot_inv = [&](const Vec3& v) {
    return v * c - axis.cross(v) * s + axis * (axis.dot(v) * (1 - c));
  };
  std::vector<Vec3> moved;
  for (const auto& v : poly.vertices()) moved.push_back(rot(v) + shift);
  auto poly2 = curves::PolygonalKnot::from_vertices(std::move(moved), false);
  auto lines2 = quadrisecants(poly2);

  REQUIRE(lines2.size() == base.size());
  for (const auto& s : lines2) {
    // map the line back: a point and the direction
    Vec3 p = rot_inv(s.line.closest_point_to_origin() - shift);
    PluckerLine back = PluckerLine::from_direction_point(rot_inv(s.line.d), p).canonical();
    bool matched = false;
    for (const auto& b : base) {
      double ang =
          std::acos(std::clamp(std::abs(back.d.dot(b.line.canonical().d)), 0.0, 1.0));
      if (ang < 1e-5 && (back.m - b.line.canonical().m).norm() < 1e-5 * poly.scale())
        matched = true;
    }
    CHECK(matched);
  }
}

TEST_CASE("the polynomial figure-eight knot has the z axis as a quadrisecant") {
  auto knot = fixtures::fig8_polynomial();
  double prev_dev = 1e300;
  for (int n : {500, 1000}) {
    auto poly = curves::sample_polygon(knot, n);
    auto lines = quadrisecants(poly);
    REQUIRE(!lines.empty());
    // pick the line closest in angle to the z axis
    double best_dev = 1e300;
    const SecantLine* best = nullptr;
    for (const auto& s : lines) {
      double dev = std::acos(std::clamp(std::abs(s.line.d.z), 0.0, 1.0));
      if (dev < best_dev) {
        best_dev = dev;
        best = &s;
      }
    }
    REQUIRE(best);
    CHECK(best_dev < 0.02);
    CHECK(best_dev <= prev_dev + 1e-9);
    prev_dev = best_dev;

    // hit parameters approach the exact axis roots in curve parameter
    REQUIRE(best->hits.size() >= 4);
    std::vector<double> params;
    for (const auto& h : best->hits)
      params.push_back((h.edge + h.t_on_edge) / static_cast<double>(n));
    std::sort(params.begin(), params.end());
    const double expect[4] = {0.1, 0.25, 0.5, 0.84};
    for (int i = 0; i < 4; ++i) {
      double err = 1e300;
      for (double p : params) err = std::min(err, std::abs(p - expect[i]));
      CHECK(err < 5.0 / n);
    }
  }
}

TEST_CASE("exact common roots of the polynomial knot axis") {
  auto roots = common_axis_roots(fixtures::fig8_polynomial());
  REQUIRE(roots.size() == 4);
  const Rat expect[4] = {Rat(1, 10), Rat(1, 4), Rat(1, 2), Rat(21, 25)};
  for (int i = 0; i < 4; ++i) CHECK(abs(roots[i] - expect[i]) < Rat(1, 1000000000));
}

TEST_CASE("common roots on synthetic polynomials") {
  using curves::ParametricKnot;
  RatPoly t({Rat(0), Rat(1)});
  RatPoly x = t * RatPoly({Rat(-1), Rat(1)});  // t(t-1)
  auto k1 = ParametricKnot::polynomial({x, t * Rat(0), RatPoly::constant(Rat(0))});
  // note: y == 0 identically makes gcd(x, 0) = x; roots of x in [0,1) = {0}
  auto r1 = common_axis_roots(k1);
  REQUIRE(r1.size() == 1);
  CHECK(r1[0] == Rat(0));

  RatPoly x2({Rat(1), Rat(0), Rat(1)});  // t^2+1
  auto k2 = ParametricKnot::polynomial({x2 * Rat(0) + RatPoly::constant(Rat(1)),
                                        x2, RatPoly::constant(Rat(0))});
  CHECK(common_axis_roots(k2).empty());

  CHECK_THROWS_AS(common_axis_roots(fixtures::fig8_trig()), NotPolynomial);
}

TEST_CASE("nontriviality screen flags an empty blister") {
  // synthetic 11-gon with four z-axis hits; the arc between the hits at
  // z=1 and z=2 is a flat bump beside the chord, so its fan is unpierced
  std::vector<Vec3> v = {
      {1.5, 0, 0},  {-1.5, 0, 0}, {-0.5, 0, 1}, {0.5, 0, 1},  {0.7, 0, 1.5}, {0.5, 0, 2},
      {-0.5, 0, 2}, {-1.5, 0, 3}, {1.5, 0, 3},  {1.5, 3, 3},  {1.5, 3, 0}};
  auto poly = curves::PolygonalKnot::from_vertices(std::move(v), false);
  CHECK_FALSE(poly.simplicity_checked());
  auto lines = quadrisecants(poly);
  const SecantLine* axis = nullptr;
  for (const auto& s : lines)
    if (std::abs(s.line.d.z) > 0.999 && s.line.closest_point_to_origin().norm() < 1e-6)
      axis = &s;
  REQUIRE(axis);
  REQUIRE(axis->hits.size() == 4);
  auto cert = nontriviality_screen(poly, *axis);
  CHECK(cert.verdict == ScreenVerdict::kSuspectTrivial);
  bool blister_unpierced = false;
  for (const auto& ev : cert.evidence)
    if (ev.arc_exists && !ev.pierced) blister_unpierced = true;
  CHECK(blister_unpierced);
}

TEST_CASE("screen certificates are internally consistent on real fixtures") {
  auto poly = fixtures::trefoil_polygon(48);
  auto lines = quadrisecants(poly);
  REQUIRE(!lines.empty());
  for (const auto& s : lines) {
    auto cert = nontriviality_screen(poly, s);
    bool any_unpierced = false;
    for (const auto& ev : cert.evidence)
      if (ev.arc_exists && !ev.pierced) any_unpierced = true;
    CHECK((cert.verdict == ScreenVerdict::kSuspectTrivial) == any_unpierced);
  }
}

TEST_CASE("the screen needs at least four hits") {
  auto poly = fixtures::trefoil_polygon(48);
  SecantLine s;
  s.line = PluckerLine::from_direction_point({0, 0, 1}, {0, 0, 0});
  s.hits = {{0, 0.5, poly.vertex(0)}, {5, 0.5, poly.vertex(5)}, {10, 0.5, poly.vertex(10)}};
  CHECK_THROWS_AS(nontriviality_screen(poly, s), std::invalid_argument);
}
