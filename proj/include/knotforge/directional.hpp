#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <variant>
#include <vector>

#include "knotforge/curves.hpp"
#include "knotforge/geom.hpp"

namespace knotforge::directional {

/// Unit vector on the sphere; the optimization variable of every direction
/// sweep.
struct Direction {
  Vec3 v;
  /// Normalizes; throws NonGenericDirection on a (near-)zero vector.
  static Direction of(const Vec3& raw);
  Direction operator-() const { return {-v}; }
};

/// Number of connected components of local-maximum points of the height
/// function along a direction.
struct BridgeCount {
  int value = 0;
  Direction direction;
  bool generic = true;  // false if a degeneracy was hit (and jittered over)
  /// Parameter values (smooth) or first vertex indices (polygonal) of the
  /// local-maximum components.
  std::vector<double> witnesses;
};

enum class LevelEdgePolicy {
  kError,    // a level edge raises NonGenericDirection
  kPlateau,  // runs of level vertices count as one component, generic=false
};

/// Exact component count of the cyclic piecewise-linear height function.
/// An edge is "level" when its height difference is below 1e-12 times the
/// height range.
BridgeCount bridge_count_polygonal(const curves::PolygonalKnot& knot, const Direction& v,
                                   LevelEdgePolicy policy = LevelEdgePolicy::kError,
                                   double level_eps_rel = 1e-12);

/// Locates sign changes of d/dt <K(t),v> on a uniform grid (>= 64), refines
/// each bracket by bisection to 1e-10 in t, and counts the descending roots.
/// Raises SuspectGrid when the max/min pattern is inconsistent.
BridgeCount bridge_count_smooth(const curves::ParametricKnot& knot, const Direction& v,
                                int grid);

enum class SearchMode { kMin, kMax };

struct SphereSearchReport {
  SearchMode mode = SearchMode::kMin;
  std::uint64_t samples = 0;
  int best_value = 0;
  Direction best_direction;
  std::map<int, std::uint64_t> histogram;
  double generic_fraction = 1.0;
  std::string to_json() const;
};

using AnyKnot = std::variant<curves::ParametricKnot, curves::PolygonalKnot>;

struct SearchParams {
  SearchMode mode = SearchMode::kMin;
  int n_samples = 1000;
  std::uint64_t seed = 42;
  int grid = 4096;      // smooth curves only
  bool refine = false;  // extra local re-sampling around the incumbent
};

/// Sweeps a Fibonacci lattice of directions (antipodes not deduplicated; the
/// counts differ in general) and reports the extremal bridge count with a
/// histogram. Degenerate directions are jittered by a seeded rotation below
/// 1e-6 rad. The reported minimum is an upper bound estimate of the bridge
/// number and the reported maximum a lower bound estimate of the superbridge
/// number; neither invariant-over-the-knot-type is computed here.
SphereSearchReport sphere_search(const AnyKnot& knot, const SearchParams& params);

/// Deterministic near-uniform point set on the sphere.
std::vector<Vec3> fibonacci_sphere(int n);

/// Sum of exterior angles (each in [0, pi]) over the vertices.
/// DegenerateAngle if consecutive edges are anti-parallel within 1e-12.
double total_curvature(const curves::PolygonalKnot& knot);

struct MilnorCheck {
  double avg_bv = 0;
  double curvature_over_2pi = 0;
  double discrepancy = 0;
};

/// Cross-validation of the direction-averaged bridge count against total
/// curvature / 2*pi (they agree in expectation).
MilnorCheck milnor_average_check(const curves::PolygonalKnot& knot, int n_samples,
                                 std::uint64_t seed);

/// min{2p, q} for the (p,q) torus knot, 2 <= p < q coprime.
int torus_superbridge_index(int p, int q);

}  // namespace knotforge::directional
