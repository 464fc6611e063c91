#pragma once

#include "knotforge/curves.hpp"

namespace knotforge::fixtures {

// Built-in curve fixtures. The two figure-eight parametrizations and the
// polynomial curve are constructed from exact rational coefficients; the
// shipped JSON files are emitted from these constructors (tools/gen_fixtures)
// and tests assert the files round-trip to the same coefficients.

/// Figure-eight knot of harmonic degree 3 (trigonometric form).
curves::ParametricKnot fig8_trig();

/// The alternative degree-3 figure-eight the trigonometric one was derived
/// from.
curves::ParametricKnot fig8_footnote();

/// Degree-12 polynomial figure-eight with the z-axis as a quadrisecant.
curves::ParametricKnot fig8_polynomial();

curves::ParametricKnot unit_circle();

/// Polygonal trefoil used throughout the tests: uniform sampling of the
/// (2,3) torus curve.
curves::PolygonalKnot trefoil_polygon(int n = 48);

/// Polygonal figure-eight: uniform sampling of fig8_trig.
curves::PolygonalKnot fig8_polygon(int n = 60);

/// Planar convex polygon (an unknot) in the xy-plane.
curves::PolygonalKnot planar_convex_polygon(int n, double radius = 1.0);

}  // namespace knotforge::fixtures
