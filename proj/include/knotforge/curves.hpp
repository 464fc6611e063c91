#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "knotforge/geom.hpp"
#include "knotforge/polynomial.hpp"

namespace knotforge::curves {

enum class CurveKind { kTrigonometric, kPolynomial };

/// One coordinate of a trigonometric polynomial:
/// c0 + sum_k (cos_coeffs[k-1] cos kt + sin_coeffs[k-1] sin kt).
struct TrigCoord {
  Rat constant{0};
  std::vector<Rat> cos_coeffs;
  std::vector<Rat> sin_coeffs;
};

/// Closed space curve on a half-open parameter interval: [0, 2*pi) for the
/// trigonometric kind, [0, 1) for the polynomial kind. Immutable after
/// construction; construction validates closure.
class ParametricKnot {
 public:
  static ParametricKnot trigonometric(std::array<TrigCoord, 3> coords);
  static ParametricKnot polynomial(std::array<RatPoly, 3> coords);

  CurveKind kind() const { return kind_; }
  double period() const { return kind_ == CurveKind::kTrigonometric ? kTau : 1.0; }
  /// Highest harmonic with a nonzero coefficient (trigonometric kind only).
  int harmonic_degree() const;
  int polynomial_degree() const;

  const std::array<TrigCoord, 3>& trig_coords() const { return trig_; }
  const std::array<RatPoly, 3>& poly_coords() const { return poly_; }

  /// Evaluation at t (wrap-around permitted). Internally runs in extended
  /// precision; the polynomial fixtures have large cancelling coefficients.
  Vec3 evaluate(double t) const;

  /// Endpoint mismatch found at construction, relative to coordinate scale.
  double closure_residual() const { return closure_residual_; }

  // Plain-double coefficient views used by the direction-sweep hot paths.
  struct TrigView {
    Vec3 constant;
    std::vector<Vec3> cos_k, sin_k;  // index 0 <-> harmonic k=1
  };
  TrigView trig_view() const;
  std::vector<Vec3> poly_view() const;  // coefficient of t^i at index i

 private:
  ParametricKnot() = default;
  CurveKind kind_ = CurveKind::kTrigonometric;
  std::array<TrigCoord, 3> trig_;
  std::array<RatPoly, 3> poly_;
  double closure_residual_ = 0;
};

/// Cyclic vertex list in 3-space; the exact-computation workhorse.
class PolygonalKnot {
 public:
  /// `check_simple` runs the pairwise edge-distance screen; synthetic
  /// polygons may skip it, and the skip is recorded.
  static PolygonalKnot from_vertices(std::vector<Vec3> vertices, bool check_simple);

  const std::vector<Vec3>& vertices() const { return v_; }
  std::size_t size() const { return v_.size(); }
  const Vec3& vertex(std::size_t i) const { return v_[i % v_.size()]; }
  Vec3 edge_vector(std::size_t i) const { return vertex(i + 1) - vertex(i); }
  bool simplicity_checked() const { return simplicity_checked_; }
  /// Bounding-box diagonal; the scale all tolerances are relative to.
  double scale() const { return scale_; }

 private:
  std::vector<Vec3> v_;
  bool simplicity_checked_ = false;
  double scale_ = 0;
};

struct TorusKnotSpec {
  int p = 2;
  int q = 3;
  Rat major_radius{2};
  Rat minor_radius{1};
  void validate() const;  // throws InvalidTorusType
};

/// Standard embedding ((R + r cos qθ) cos pθ, (R + r cos qθ) sin pθ, r sin qθ)
/// expanded into exact harmonic form; degree is p + q.
ParametricKnot torus_curve(const TorusKnotSpec& spec);

/// Open subarc of a polygon, from vertex `start` to vertex `end` along
/// increasing index (cyclically). Interior vertices are the ones removed by
/// straightening.
struct SubarcSpec {
  std::size_t start = 0;
  std::size_t end = 0;
};

struct StraightenResult {
  PolygonalKnot knot;
  /// True only if the triangle fan swept between the removed subarc and the
  /// new segment was verified empty of the rest of the knot, so the move is
  /// known not to change the knot type.
  bool isotopy_checked = false;
};

StraightenResult straighten_subarc(const PolygonalKnot& knot, const SubarcSpec& arc);

enum class SampleMode { kUniformParameter, kUniformArclength };

/// n vertices on the curve; uniform in parameter by default.
PolygonalKnot sample_polygon(const ParametricKnot& knot, int n,
                             SampleMode mode = SampleMode::kUniformParameter);

// ---- curve fixture files ----
// JSON {kind, domain, coeffs:{x,y,z}}, rationals as "p/q" strings.
ParametricKnot load_curve_json(const std::string& path);
std::string curve_to_json(const ParametricKnot& knot);

}  // namespace knotforge::curves
