#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knotforge/curves.hpp"
#include "knotforge/geom.hpp"
#include "knotforge/polynomial.hpp"

namespace knotforge::secants {

/// Line in Plücker coordinates: unit direction d and moment m = p x d for
/// any point p on the line. Membership of the Klein quadric (d . m = 0) is
/// enforced on construction.
struct PluckerLine {
  Vec3 d;
  Vec3 m;

  static PluckerLine through_points(const Vec3& a, const Vec3& b);
  static PluckerLine from_direction_point(const Vec3& dir, const Vec3& p);

  /// Reciprocal product; zero iff the two lines are coplanar (meet or are
  /// parallel).
  double side(const PluckerLine& o) const { return d.dot(o.m) + o.d.dot(m); }
  Vec3 closest_point_to_origin() const { return d.cross(m); }
  double distance_to(const Vec3& p) const { return (p.cross(d) - m).norm(); }
  /// Signed coordinate of the foot of p along the line.
  double coordinate_of(const Vec3& p) const { return p.dot(d); }
  /// Same line with the canonical (lexicographically positive) orientation.
  PluckerLine canonical() const;
};

struct TransversalResult {
  std::vector<PluckerLine> lines;  // 0, 1 or 2 common transversals
  bool tangent = false;            // discriminant vanished: double solution
};

/// Common transversals of four lines: the four incidence conditions are
/// linear in the six homogeneous coordinates; the 2-dimensional solution
/// space meets the Klein quadric in at most two real points. Throws
/// Degenerate when the linear system has nullity >= 3 (infinitely many
/// transversals, e.g. four concurrent or four coplanar lines).
TransversalResult transversals_of_four_lines(const PluckerLine& l1, const PluckerLine& l2,
                                             const PluckerLine& l3, const PluckerLine& l4);

struct SecantHit {
  int edge = 0;        // edge index of the polygon
  double t_on_edge = 0;
  Vec3 point;
};

/// A line together with the places it meets the knot, sorted along the line.
struct SecantLine {
  PluckerLine line;
  std::vector<SecantHit> hits;
  int dedup_group_size = 1;
  std::string to_json() const;
};

struct QuadrisecantSearchStats {
  std::uint64_t degenerate_triples = 0;  // coplanar families skipped
  std::uint64_t candidates_tested = 0;
  std::uint64_t lines_before_dedup = 0;
};

/// All lines meeting the polygon in four or more points. Edge tuples sharing
/// a vertex are skipped; every candidate is re-intersected against every
/// edge, verified against the 1e-9*scale incidence tolerance, and
/// deduplicated by (angle, moment) distance.
std::vector<SecantLine> quadrisecants(const curves::PolygonalKnot& knot,
                                      QuadrisecantSearchStats* stats = nullptr,
                                      double dedup_angle = 1e-6,
                                      double dedup_moment_rel = 1e-6);

/// Common real roots of x(t) = y(t) = 0 on the curve's parameter interval,
/// via exact rational GCD and Sturm isolation refined to 1e-12. Polynomial
/// curves only (NotPolynomial otherwise).
std::vector<Rat> common_axis_roots(const curves::ParametricKnot& knot);

struct PairEvidence {
  int hit_a = 0, hit_b = 0;  // indices into SecantLine::hits
  bool arc_exists = false;   // the two hits are adjacent along the knot
  bool pierced = false;      // some other edge passes through the spanned fan
};

enum class ScreenVerdict { kNontrivial, kSuspectTrivial };

/// Heuristic screen for topological nontriviality: for each pair of hits
/// adjacent along the line, fan-triangulate the region between the chord and
/// the knot arc joining them and look for a piercing by the rest of the
/// knot. An unpierced pair marks the quadrisecant suspect. This flags
/// candidates only; it does not decide the topological condition, which
/// quantifies over all spanning disks.
struct NontrivialityCertificate {
  SecantLine secant;
  ScreenVerdict verdict = ScreenVerdict::kNontrivial;
  std::vector<PairEvidence> evidence;
};

NontrivialityCertificate nontriviality_screen(const curves::PolygonalKnot& knot,
                                              const SecantLine& secant);

}  // namespace knotforge::secants
