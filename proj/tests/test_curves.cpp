#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>

#include "doctest.h"
#include "knotforge/curves.hpp"
#include "knotforge/errors.hpp"
#include "knotforge/fixtures.hpp"

using namespace knotforge;
using namespace knotforge::curves;

namespace {

// the trigonometric figure-eight in its original power basis; the fixture
// stores the expanded harmonic form, so this is an independent oracle
Vec3 fig8_power_basis(double t) {
  double c = std::cos(t), s = std::sin(t);
  double c2 = c * c, c3 = c2 * c;
  return {307 * c3 + 5346 * s * c2 - 2663 * c2 - 26 * s * c - 1142 * c - 1378 * s + 1280,
          6337 * c3 + 191 * s * c2 + 691 * c2 + 103 * s * c - 5021 * c - 1019 * s + 677,
          373 * c3 - 3157 * s * c2 - 4436 * c2 - 1029 * s * c + 50 * c + 910 * s + 2222};
}

Vec3 footnote_power_basis(double t) {
  double c1 = std::cos(t), s1 = std::sin(t);
  double c2 = std::cos(2 * t), s2 = std::sin(2 * t);
  double c3 = std::cos(3 * t), s3 = std::sin(3 * t);
  return {32 * c1 - 51 * s1 - 104 * c2 - 34 * s2 + 104 * c3 - 91 * s3,
          94 * c1 + 41 * s1 + 113 * c2 - 68 * c3 - 124 * s3,
          16 * c1 + 73 * s1 - 211 * c2 - 39 * s2 - 99 * c3 - 21 * s3};
}

}  // namespace

TEST_CASE("trigonometric figure-eight matches its power-basis source") {
  auto k = fixtures::fig8_trig();
  CHECK(k.harmonic_degree() == 3);
  for (int i = 0; i < 97; ++i) {
    double t = kTau * i / 97.0;
    Vec3 a = k.evaluate(t), b = fig8_power_basis(t);
    CHECK((a - b).norm() < 1e-8);
  }
  // value summed by hand from the power basis at t = 0
  Vec3 at0 = k.evaluate(0);
  CHECK(at0.x == doctest::Approx(-2218).epsilon(1e-12));
  CHECK(at0.y == doctest::Approx(2684).epsilon(1e-12));
  CHECK(at0.z == doctest::Approx(-1791).epsilon(1e-12));
}

TEST_CASE("footnote figure-eight matches its stated coefficients") {
  auto k = fixtures::fig8_footnote();
  for (int i = 0; i < 53; ++i) {
    double t = kTau * i / 53.0;
    CHECK((k.evaluate(t) - footnote_power_basis(t)).norm() < 1e-10);
  }
}

TEST_CASE("unit circle evaluation") {
  auto k = fixtures::unit_circle();
  Vec3 p = k.evaluate(kTau / 4);
  CHECK(std::abs(p.x) < 1e-15);
  CHECK(p.y == doctest::Approx(1.0));
  CHECK(p.z == 0.0);
  // wrap-around
  CHECK((k.evaluate(kTau + 0.5) - k.evaluate(0.5)).norm() < 1e-12);
}

TEST_CASE("polynomial figure-eight closes exactly and kills y at one half") {
  auto k = fixtures::fig8_polynomial();
  CHECK(k.closure_residual() == 0.0);  // rational identity at the endpoints
  for (int c = 0; c < 3; ++c)
    CHECK(k.poly_coords()[c].eval(Rat(0)) == k.poly_coords()[c].eval(Rat(1)));
  // the (2t-1)^2 factor
  CHECK(k.poly_coords()[1].eval(Rat(1, 2)) == 0);
  CHECK(std::abs(k.evaluate(0.5).y) < 1e-8);  // extended-precision residual
  CHECK(k.polynomial_degree() == 12);
}

TEST_CASE("sampling the unit circle with four points gives the square") {
  auto poly = sample_polygon(fixtures::unit_circle(), 4);
  REQUIRE(poly.size() == 4);
  CHECK((poly.vertex(0) - Vec3{1, 0, 0}).norm() < 1e-12);
  CHECK((poly.vertex(1) - Vec3{0, 1, 0}).norm() < 1e-12);
  CHECK((poly.vertex(2) - Vec3{-1, 0, 0}).norm() < 1e-12);
  CHECK((poly.vertex(3) - Vec3{0, -1, 0}).norm() < 1e-12);
}

TEST_CASE("sampled vertices lie on the curve") {
  auto k = fixtures::fig8_trig();
  auto poly = sample_polygon(k, 60);
  for (int i = 0; i < 60; ++i) {
    double t = kTau * i / 60.0;
    CHECK((poly.vertex(i) - k.evaluate(t)).norm() < 1e-9);
  }
  CHECK(poly.simplicity_checked());
}

TEST_CASE("arclength sampling stays on the curve with even spacing") {
  auto k = fixtures::fig8_trig();
  auto poly = sample_polygon(k, 100, SampleMode::kUniformArclength);
  double lo = 1e300, hi = 0;
  for (std::size_t i = 0; i < poly.size(); ++i) {
    double len = poly.edge_vector(i).norm();
    lo = std::min(lo, len);
    hi = std::max(hi, len);
  }
  CHECK(hi / lo < 1.1);  // parameter-uniform sampling is far more uneven
}

TEST_CASE("tiny sample counts do not crash") {
  CHECK_THROWS_AS(sample_polygon(fixtures::fig8_trig(), 2), DegenerateSample);
  CHECK_NOTHROW(sample_polygon(fixtures::fig8_trig(), 3));
}

TEST_CASE("polynomial knot passes near the z axis four times") {
  auto poly = sample_polygon(fixtures::fig8_polynomial(), 2000);
  // count approaches: local minima of xy-distance under 1e-3 * scale
  double scale = poly.scale();
  int approaches = 0;
  std::size_t n = poly.size();
  for (std::size_t i = 0; i < n; ++i) {
    auto r = [&](std::size_t j) {
      const Vec3& p = poly.vertex(j);
      return std::hypot(p.x, p.y);
    };
    if (r(i) < 1e-3 * scale && r(i) <= r(i + n - 1) && r(i) < r(i + 1)) ++approaches;
  }
  CHECK(approaches == 4);
}

TEST_CASE("torus curve values and degree") {
  TorusKnotSpec spec;
  spec.p = 2;
  spec.q = 3;
  spec.major_radius = Rat(2);
  spec.minor_radius = Rat(1);
  auto k = torus_curve(spec);
  CHECK((k.evaluate(0) - Vec3{3, 0, 0}).norm() < 1e-12);
  CHECK(k.harmonic_degree() == 5);

  // z = r sin(q theta) has exactly q local maxima
  int maxima = 0;
  const int grid = 2048;
  for (int i = 0; i < grid; ++i) {
    double z0 = k.evaluate(kTau * ((i + grid - 1) % grid) / grid).z;
    double z1 = k.evaluate(kTau * i / grid).z;
    double z2 = k.evaluate(kTau * ((i + 1) % grid) / grid).z;
    if (z1 > z0 && z1 > z2) ++maxima;
  }
  CHECK(maxima == 3);
}

TEST_CASE("torus curve (3,5) closes and has harmonic degree 8") {
  TorusKnotSpec spec;
  spec.p = 3;
  spec.q = 5;
  spec.major_radius = Rat(2);
  spec.minor_radius = Rat(1);
  auto k = torus_curve(spec);
  CHECK(k.harmonic_degree() == 8);
  CHECK((k.evaluate(0) - k.evaluate(kTau)).norm() < 1e-12);

  // Fourier analysis of the geometric formula itself (independent of the
  // expanded coefficients): the top harmonic of x must be p+q
  const int N = 8192;
  auto coefficient = [&](int harmonic) {
    double acc_c = 0, acc_s = 0;
    for (int i = 0; i < N; ++i) {
      double th = kTau * i / N;
      double x = (2.0 + std::cos(5 * th)) * std::cos(3 * th);
      acc_c += x * std::cos(harmonic * th);
      acc_s += x * std::sin(harmonic * th);
    }
    return std::hypot(acc_c, acc_s) * 2.0 / N;
  };
  CHECK(coefficient(8) == doctest::Approx(0.5).epsilon(1e-6));
  CHECK(coefficient(9) < 1e-9);
  CHECK(coefficient(10) < 1e-9);
  for (int i = 0; i < 31; ++i) {
    double th = kTau * i / 31.0;
    Vec3 direct{(2.0 + std::cos(5 * th)) * std::cos(3 * th),
                (2.0 + std::cos(5 * th)) * std::sin(3 * th), std::sin(5 * th)};
    CHECK((k.evaluate(th) - direct).norm() < 1e-10);
  }
}

TEST_CASE("torus spec validation") {
  TorusKnotSpec bad;
  bad.p = 2;
  bad.q = 4;
  CHECK_THROWS_AS(bad.validate(), InvalidTorusType);
  bad.q = 1;
  CHECK_THROWS_AS(bad.validate(), InvalidTorusType);
  bad.p = 2;
  bad.q = 3;
  bad.minor_radius = Rat(3);
  CHECK_THROWS_AS(bad.validate(), InvalidTorusType);
}

TEST_CASE("straightening a square corner gives a triangle with an empty fan") {
  auto square = PolygonalKnot::from_vertices(
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, false);
  auto res = straighten_subarc(square, {0, 2});
  CHECK(res.knot.size() == 3);
  CHECK(res.isotopy_checked);
}

TEST_CASE("straightening never adds vertices and preserves closure") {
  auto poly = fixtures::trefoil_polygon(30);
  auto res = straighten_subarc(poly, {5, 12});
  CHECK(res.knot.size() == 30 - 6);
  for (std::size_t i = 0; i < res.knot.size(); ++i)
    CHECK(res.knot.edge_vector(i).norm() > 0);
}

TEST_CASE("a fan pierced by the rest of the knot is reported") {
  // straightening half of a trefoil sweeps across the other half
  auto poly = fixtures::trefoil_polygon(48);
  auto res = straighten_subarc(poly, {0, 24});
  // oracle: brute-force triangle/segment intersection over the fan
  bool pierced = false;
  std::vector<Vec3> chain;
  for (std::size_t i = 0; i <= 24; ++i) chain.push_back(poly.vertex(i));
  auto seg_tri = [](Vec3 s0, Vec3 s1, Vec3 a, Vec3 b, Vec3 c) {
    Vec3 n = (b - a).cross(c - a);
    if (n.norm() < 1e-12) return false;
    double ha = n.dot(s0 - a), hb = n.dot(s1 - a);
    if ((ha > 0) == (hb > 0)) return false;
    double t = ha / (ha - hb);
    Vec3 p = s0 + (s1 - s0) * t;
    // barycentric sign test
    auto side = [&](Vec3 u, Vec3 v) { return n.dot((v - u).cross(p - u)); };
    return side(a, b) > 0 && side(b, c) > 0 && side(c, a) > 0;
  };
  for (std::size_t j = 1; j + 1 < chain.size() && !pierced; ++j)
    for (std::size_t e = 0; e < res.knot.size() && !pierced; ++e)
      if (seg_tri(res.knot.vertex(e), res.knot.vertex(e + 1), chain[0], chain[j],
                  chain[j + 1]))
        pierced = true;
  CHECK(pierced);
  CHECK_FALSE(res.isotopy_checked);
}

TEST_CASE("degenerate straightenings are rejected") {
  auto square = PolygonalKnot::from_vertices(
      {{0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0}}, false);
  CHECK_THROWS_AS(straighten_subarc(square, {0, 1}), DegeneratePolygon);
  CHECK_THROWS_AS(straighten_subarc(square, {0, 3}), DegeneratePolygon);
}

TEST_CASE("curve fixture files round-trip") {
  auto original = fixtures::fig8_polynomial();
  std::string tmp = "/tmp/knotforge_curve_roundtrip.json";
  {
    std::string json = curve_to_json(original);
    FILE* f = fopen(tmp.c_str(), "w");
    REQUIRE(f);
    fwrite(json.data(), 1, json.size(), f);
    fclose(f);
  }
  auto reloaded = load_curve_json(tmp);
  REQUIRE(reloaded.kind() == CurveKind::kPolynomial);
  for (int c = 0; c < 3; ++c) CHECK(reloaded.poly_coords()[c] == original.poly_coords()[c]);

  auto trig = fixtures::fig8_trig();
  std::string tmp2 = "/tmp/knotforge_curve_roundtrip2.json";
  {
    std::string json = curve_to_json(trig);
    FILE* f = fopen(tmp2.c_str(), "w");
    REQUIRE(f);
    fwrite(json.data(), 1, json.size(), f);
    fclose(f);
  }
  auto trig2 = load_curve_json(tmp2);
  for (int c = 0; c < 3; ++c) {
    CHECK(trig2.trig_coords()[c].constant == trig.trig_coords()[c].constant);
    CHECK(trig2.trig_coords()[c].cos_coeffs == trig.trig_coords()[c].cos_coeffs);
    CHECK(trig2.trig_coords()[c].sin_coeffs == trig.trig_coords()[c].sin_coeffs);
  }
}
