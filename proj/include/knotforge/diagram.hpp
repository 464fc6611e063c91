#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "knotforge/curves.hpp"
#include "knotforge/errors.hpp"
#include "knotforge/geom.hpp"
#include "knotforge/secants.hpp"

namespace knotforge::diagram {

class NonGenericProjection : public Error {
 public:
  enum class Kind { kTriplePoint, kVertexHit, kSmallAngle, kDepthTie };
  NonGenericProjection(Kind kind, const std::string& what)
      : Error("NonGenericProjection", what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

/// Orthogonal projection of a polygon onto the plane through the origin
/// normal to `direction`, expressed in a deterministic orthonormal frame.
struct PlanarProjection {
  std::vector<Vec2> points;    // cyclic projected polyline
  std::vector<double> depths;  // signed distance along the direction
  Vec3 direction;
  Vec3 e1, e2;       // frame: source = x*e1 + y*e2 + depth*direction
  double scale = 0;  // 2D bounding-box diagonal
  double scale3d = 0;

  Vec2 project_point(const Vec3& p) const { return {p.dot(e1), p.dot(e2)}; }
};

PlanarProjection project(const curves::PolygonalKnot& knot, const Vec3& direction);

struct Crossing {
  Vec2 position;
  int over_edge = 0, under_edge = 0;
  double over_t = 0, under_t = 0;  // interpolation parameters on the edges
  double over_depth = 0, under_depth = 0;
  int sign = +1;  // +1 when the frame sees (over, under) counterclockwise
  double transversality_angle = 0;
};

struct Dart {
  int c = -1;
  int p = -1;
  bool operator==(const Dart&) const = default;
};

/// Planar diagram of a knot: 4-valent vertices with a rotation system.
/// Ports are numbered counterclockwise; the under strand always runs port
/// 0 -> 2, the over strand runs 3 -> 1 on positive crossings and 1 -> 3 on
/// negative ones. PD and Gauss codes are derived by walking the curve.
class KnotDiagram {
 public:
  static constexpr int kUnderIn = 0;
  static constexpr int kUnderOut = 2;

  struct Node {
    std::array<Dart, 4> adj;  // the dart at the far end of each port's edge
    int sign = +1;
    Crossing geom;  // decoration from extraction; meaningless after moves
    bool has_geometry = false;
  };

  KnotDiagram() = default;
  explicit KnotDiagram(std::vector<Node> nodes);

  int crossing_count() const { return static_cast<int>(nodes_.size()); }
  const std::vector<Node>& nodes() const { return nodes_; }
  int over_in_port(int c) const { return nodes_[c].sign > 0 ? 3 : 1; }
  int over_out_port(int c) const { return nodes_[c].sign > 0 ? 1 : 3; }

  /// Number of closed strands traced through the crossings (1 for a knot).
  int component_count() const;

  /// Passages in curve order: (crossing, is_over), starting from crossing
  /// 0's under-in.
  std::vector<std::pair<int, bool>> gauss_sequence() const;

  /// PD code with 2n edge labels assigned along the curve, one 4-tuple per
  /// crossing counterclockwise from the incoming under strand.
  std::vector<std::array<int, 4>> pd_code() const;
  std::string pd_string() const;
  std::string gauss_string() const;  // "O1+ U2- ..." tokens

  /// Parse the X(a,b,c,d) line format produced by pd_string.
  static KnotDiagram from_pd_string(const std::string& text);
  static KnotDiagram from_pd(const std::vector<std::array<int, 4>>& tuples);

  // Face structure (orbits of next = rotate-after-crossing-over the edge).
  struct Face {
    std::vector<Dart> darts;
  };
  std::vector<Face> faces() const;

  friend KnotDiagram eliminate_crescent_impl(const KnotDiagram&, Dart, Dart);
  friend KnotDiagram eliminate_loop_impl(const KnotDiagram&, int, int, int);

 private:
  Dart adj(Dart d) const { return nodes_[d.c].adj[d.p]; }
  std::vector<Node> nodes_;
};

/// Projects each crossing of the projection; throws NonGenericProjection on
/// triple points, crossings near projected vertices, small crossing angles,
/// or depth ties.
struct QuadExclusion {
  Vec2 center;
  double radius = 0;
};
KnotDiagram extract_diagram(const PlanarProjection& proj,
                            const std::optional<QuadExclusion>& exclusion = std::nullopt,
                            int* excluded_crossings = nullptr, double theta_min = 1e-4);

/// project + extract with bounded retry: jitters the direction by < 1e-5 rad
/// up to 16 times when the projection is non-generic.
struct RobustDiagram {
  KnotDiagram diagram;
  PlanarProjection projection;
  Vec3 direction_used;
  int retries = 0;
};
RobustDiagram project_and_extract(const curves::PolygonalKnot& knot, const Vec3& direction,
                                  std::uint64_t seed = 42);

struct SecantProjection {
  PlanarProjection proj;
  Vec2 quad_point;
  double suppression_radius = 0;
};

/// Projection along a secant line: all hits map to one planar point (the
/// quadruple point); extraction around it is suppressed within
/// 1e-3 * scale so the cluster is handled symbolically, not as crossings.
SecantProjection project_along_secant(const curves::PolygonalKnot& knot,
                                      const secants::SecantLine& secant);

struct CrescentInfo {
  int c1 = 0, c2 = 0;
  Dart side1, side2;  // the two face darts
  bool alternating = false;
};

/// Bigon faces of the diagram. Alternating means the strands swap over/under
/// between the two ends.
std::vector<CrescentInfo> find_crescents(const KnotDiagram& diagram);

/// Reidemeister II removal of a non-alternating crescent; throws
/// NotR2Eligible on an alternating one. Crossing count drops by exactly 2.
KnotDiagram eliminate_crescent(const KnotDiagram& diagram, const CrescentInfo& crescent);

/// Monogon (curl) faces, each reported by its crossing.
std::vector<int> find_loops(const KnotDiagram& diagram);

/// Reidemeister I removal of a curl; crossing count drops by 1.
KnotDiagram eliminate_loop(const KnotDiagram& diagram, int crossing);

/// R2 to a fixed point, then R1 curls, repeating until neither applies.
KnotDiagram simplify(const KnotDiagram& diagram);

/// Deterministic SVG (1000x1000 canvas), under-strand gaps of 2% of the
/// bounding box at each crossing, optional quadruple-point marker.
std::string render_svg(const PlanarProjection& proj, const KnotDiagram* diagram = nullptr,
                       const std::optional<Vec2>& quad_point = std::nullopt);

}  // namespace knotforge::diagram
