#include "knotforge/fixtures.hpp"

namespace knotforge::fixtures {

using curves::ParametricKnot;
using curves::PolygonalKnot;
using curves::TrigCoord;

namespace {

TrigCoord trig(const Rat& c0, std::vector<Rat> cos_k, std::vector<Rat> sin_k) {
  TrigCoord c;
  c.constant = c0;
  c.cos_coeffs = std::move(cos_k);
  c.sin_coeffs = std::move(sin_k);
  return c;
}

}  // namespace

ParametricKnot fig8_trig() {
  // Power-basis source (307 cos^3 t + 5346 sin t cos^2 t - ...) expanded into
  // harmonic form; test_curves checks this expansion against the power basis.
  TrigCoord x = trig(Rat(-103, 2), {Rat(-3647, 4), Rat(-2663, 2), Rat(307, 4)},
                     {Rat(-83, 2), Rat(-13), Rat(2673, 2)});
  TrigCoord y = trig(Rat(2045, 2), {Rat(-1073, 4), Rat(691, 2), Rat(6337, 4)},
                     {Rat(-3885, 4), Rat(103, 2), Rat(191, 4)});
  TrigCoord z = trig(Rat(4), {Rat(1319, 4), Rat(-2218), Rat(373, 4)},
                     {Rat(483, 4), Rat(-1029, 2), Rat(-3157, 4)});
  return ParametricKnot::trigonometric({x, y, z});
}

ParametricKnot fig8_footnote() {
  TrigCoord x = trig(Rat(0), {Rat(32), Rat(-104), Rat(104)}, {Rat(-51), Rat(-34), Rat(-91)});
  TrigCoord y = trig(Rat(0), {Rat(94), Rat(113), Rat(-68)}, {Rat(41), Rat(0), Rat(-124)});
  TrigCoord z = trig(Rat(0), {Rat(16), Rat(-211), Rat(-99)}, {Rat(73), Rat(-39), Rat(-21)});
  return ParametricKnot::trigonometric({x, y, z});
}

ParametricKnot fig8_polynomial() {
  auto lin = [](long a, long b) { return RatPoly::linear(Rat(a), Rat(b)); };  // a + b t

  RatPoly x_tail({Rat(-2701080, 1146679), Rat(-42224361, 1146679), Rat(-383), Rat(945),
                  Rat(-201), Rat(-708), Rat(386)});
  RatPoly x = lin(-1, 2) * lin(-1, 4) * lin(-1, 10) * lin(-16, 25) * lin(-21, 25) *
              lin(-9, 50) * x_tail;

  RatPoly y_tail({Rat(-104544, 277477), Rat(-1667040, 277477), Rat(-56), Rat(-197), Rat(806),
                  Rat(-776), Rat(229)});
  RatPoly y = RatPoly::constant(Rat(-70)) * lin(-1, 2) * lin(-1, 2) * lin(-1, 4) * lin(-1, 10) *
              lin(-21, 25) * lin(-21, 25) * y_tail;

  RatPoly z_tail({Rat(-712368, 832975), Rat(-2145804, 166595), Rat(-179), Rat(-243), Rat(4167),
                  Rat(-10375), Rat(11394), Rat(-5985), Rat(1233)});
  RatPoly z = lin(-3, 20) * lin(-9, 25) * lin(-16, 25) * lin(-23, 25) * z_tail;

  return ParametricKnot::polynomial({x, y, z});
}

ParametricKnot unit_circle() {
  TrigCoord x = trig(Rat(0), {Rat(1)}, {Rat(0)});
  TrigCoord y = trig(Rat(0), {Rat(0)}, {Rat(1)});
  TrigCoord z = trig(Rat(0), {Rat(0)}, {Rat(0)});
  return ParametricKnot::trigonometric({x, y, z});
}

PolygonalKnot trefoil_polygon(int n) {
  curves::TorusKnotSpec spec;
  spec.p = 2;
  spec.q = 3;
  spec.major_radius = Rat(2);
  spec.minor_radius = Rat(1);
  return curves::sample_polygon(curves::torus_curve(spec), n);
}

PolygonalKnot fig8_polygon(int n) { return curves::sample_polygon(fig8_trig(), n); }

PolygonalKnot planar_convex_polygon(int n, double radius) {
  std::vector<Vec3> v(n);
  for (int i = 0; i < n; ++i) {
    double a = kTau * i / n;
    v[i] = {radius * std::cos(a), radius * std::sin(a), 0.0};
  }
  return PolygonalKnot::from_vertices(std::move(v), false);
}

}  // namespace knotforge::fixtures
