#include "knotforge/directional.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "json.hpp"
#include "knotforge/errors.hpp"
#include "knotforge/threads.hpp"

namespace knotforge::directional {

Direction Direction::of(const Vec3& raw) {
  double n = raw.norm();
  if (!(n > 1e-12)) throw NonGenericDirection("zero direction vector");
  return {raw / n};
}

BridgeCount bridge_count_polygonal(const curves::PolygonalKnot& knot, const Direction& v,
                                   LevelEdgePolicy policy, double level_eps_rel) {
  const auto& verts = knot.vertices();
  const std::size_t n = verts.size();
  std::vector<double> h(n);
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < n; ++i) {
    h[i] = verts[i].dot(v.v);
    lo = std::min(lo, h[i]);
    hi = std::max(hi, h[i]);
  }
  const double range = hi - lo;
  const double eps = level_eps_rel * range;
  if (!(range > 0)) throw NonGenericDirection("height function is constant");

  auto level = [&](std::size_t i) {
    return std::abs(h[(i + 1) % n] - h[i]) <= eps;
  };

  bool any_level = false;
  for (std::size_t i = 0; i < n; ++i)
    if (level(i)) {
      any_level = true;
      break;
    }
  if (any_level && policy == LevelEdgePolicy::kError)
    throw NonGenericDirection("level edge in height function");

  // group cyclic runs of level-connected vertices; a run whose neighbors on
  // both sides are lower is one local-maximum component
  std::size_t anchor = 0;
  while (anchor < n && level((anchor + n - 1) % n)) ++anchor;
  if (anchor == n) throw NonGenericDirection("all vertices at one height");

  struct Run {
    std::size_t first;
    double height;
  };
  std::vector<Run> runs;
  std::size_t i = anchor;
  do {
    runs.push_back({i, h[i]});
    while (level(i)) i = (i + 1) % n;  // absorb the plateau
    i = (i + 1) % n;
  } while (i != anchor);

  BridgeCount out;
  out.direction = v;
  out.generic = !any_level;
  const std::size_t m = runs.size();
  for (std::size_t r = 0; r < m; ++r) {
    double prev = runs[(r + m - 1) % m].height;
    double next = runs[(r + 1) % m].height;
    if (runs[r].height > prev && runs[r].height > next) {
      ++out.value;
      out.witnesses.push_back(static_cast<double>(runs[r].first));
    }
  }
  return out;
}

namespace {

// Derivative of the height function t -> <K(t), v> in scalar form.
struct HeightDerivative {
  // trig: sum_k k*(bc[k-1] cos kt - ac[k-1] sin kt)
  // poly: plain coefficients, low to high
  bool trig = true;
  std::vector<double> ac, bc;   // trig
  std::vector<double> dcoeff;   // poly derivative coefficients

  double operator()(double t) const {
    if (trig) {
      double acc = 0;
      for (std::size_t k = 1; k <= ac.size(); ++k)
        acc += k * (bc[k - 1] * std::cos(k * t) - ac[k - 1] * std::sin(k * t));
      return acc;
    }
    double acc = 0;
    for (std::size_t j = dcoeff.size(); j-- > 0;) acc = acc * t + dcoeff[j];
    return acc;
  }
};

HeightDerivative make_height_derivative(const curves::ParametricKnot& knot, const Vec3& v) {
  HeightDerivative d;
  if (knot.kind() == curves::CurveKind::kTrigonometric) {
    auto view = knot.trig_view();
    d.trig = true;
    d.ac.resize(view.cos_k.size());
    d.bc.resize(view.sin_k.size());
    for (std::size_t k = 0; k < d.ac.size(); ++k) {
      d.ac[k] = view.cos_k[k].dot(v);
      d.bc[k] = view.sin_k[k].dot(v);
    }
  } else {
    auto view = knot.poly_view();
    d.trig = false;
    if (view.size() > 1) {
      d.dcoeff.resize(view.size() - 1);
      for (std::size_t j = 1; j < view.size(); ++j) d.dcoeff[j - 1] = j * view[j].dot(v);
    } else {
      d.dcoeff = {0.0};
    }
  }
  return d;
}

double bisect_root(const HeightDerivative& f, double a, double b, double fa) {
  // invariant: sign(f(a)) == sign(fa) != sign(f(b))
  while (b - a > 1e-10) {
    double mid = 0.5 * (a + b);
    double fm = f(mid);
    if ((fm > 0) == (fa > 0))
      a = mid;
    else
      b = mid;
  }
  return 0.5 * (a + b);
}

int sign_or_plus(double x) { return x < 0 ? -1 : +1; }

}  // namespace

BridgeCount bridge_count_smooth(const curves::ParametricKnot& knot, const Direction& v,
                                int grid) {
  if (grid < 64) throw std::invalid_argument("grid must be >= 64");
  const HeightDerivative f = make_height_derivative(knot, v.v);
  const double period = knot.period();

  BridgeCount out;
  out.direction = v;

  int maxima = 0, minima = 0;
  bool all_zero = true;

  if (knot.kind() == curves::CurveKind::kTrigonometric) {
    std::vector<double> val(grid);
    for (int i = 0; i < grid; ++i) val[i] = f(period * i / grid);
    for (double x : val)
      if (x != 0) all_zero = false;
    if (all_zero) throw SuspectGrid("derivative vanishes on the whole grid");
    for (int i = 0; i < grid; ++i) {
      int s0 = sign_or_plus(val[i]);
      int s1 = sign_or_plus(val[(i + 1) % grid]);
      if (s0 == s1) continue;
      double a = period * i / grid, b = period * (i + 1) / grid;
      double root = bisect_root(f, a, b, val[i] != 0 ? val[i] : (s0 > 0 ? 1.0 : -1.0));
      if (s0 > 0) {
        ++maxima;
        out.witnesses.push_back(root);
      } else {
        ++minima;
      }
    }
  } else {
    // half-open [0,1) with a seam; the curve is closed but only C^0 there
    std::vector<double> val(grid + 1);
    for (int i = 0; i <= grid; ++i) val[i] = f(static_cast<double>(i) / grid);
    for (double x : val)
      if (x != 0) all_zero = false;
    if (all_zero) throw SuspectGrid("derivative vanishes on the whole grid");
    for (int i = 0; i < grid; ++i) {
      int s0 = sign_or_plus(val[i]);
      int s1 = sign_or_plus(val[i + 1]);
      if (s0 == s1) continue;
      double a = static_cast<double>(i) / grid, b = static_cast<double>(i + 1) / grid;
      double root = bisect_root(f, a, b, val[i] != 0 ? val[i] : (s0 > 0 ? 1.0 : -1.0));
      if (s0 > 0) {
        ++maxima;
        out.witnesses.push_back(root);
      } else {
        ++minima;
      }
    }
    int s_in = sign_or_plus(val[grid]);  // slope entering the seam
    int s_out = sign_or_plus(val[0]);    // slope leaving it
    if (s_in > 0 && s_out < 0) {
      ++maxima;
      out.witnesses.push_back(0.0);
    } else if (s_in < 0 && s_out > 0) {
      ++minima;
    }
  }

  if (maxima != minima)
    throw SuspectGrid("local maxima and minima counts disagree; refine the grid");
  if (maxima == 0) throw SuspectGrid("no extrema found for a closed curve");
  out.value = maxima;
  std::sort(out.witnesses.begin(), out.witnesses.end());
  return out;
}

std::vector<Vec3> fibonacci_sphere(int n) {
  std::vector<Vec3> pts(n);
  const double golden = 0.6180339887498949;  // 1/phi
  for (int i = 0; i < n; ++i) {
    double z = 1.0 - (2.0 * i + 1.0) / n;
    double phi = kTau * std::fmod(i * golden, 1.0);
    double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    pts[i] = {r * std::cos(phi), r * std::sin(phi), z};
  }
  return pts;
}

namespace {

struct SampleOutcome {
  int value = 0;
  bool generic = true;
};

SampleOutcome count_with_jitter(const AnyKnot& knot, Vec3 dir, std::uint64_t seed,
                                std::uint64_t index, int grid) {
  SplitMix64 rng(seed ^ (0x100000001b3ULL * (index + 1)));
  int g = grid;
  bool jittered = false;
  for (int attempt = 0; attempt < 64; ++attempt) {
    try {
      if (std::holds_alternative<curves::PolygonalKnot>(knot)) {
        auto bc = bridge_count_polygonal(std::get<curves::PolygonalKnot>(knot),
                                         Direction{dir});
        return {bc.value, !jittered};
      }
      auto bc = bridge_count_smooth(std::get<curves::ParametricKnot>(knot), Direction{dir}, g);
      return {bc.value, !jittered};
    } catch (const NonGenericDirection&) {
      dir = jitter_direction(dir, rng, 1e-6);
      jittered = true;
    } catch (const SuspectGrid&) {
      if (g < grid * 8) {
        g *= 2;
      } else {
        dir = jitter_direction(dir, rng, 1e-6);
        jittered = true;
        g = grid;
      }
    }
  }
  throw NonGenericDirection("direction stayed degenerate after 64 jitters");
}

}  // namespace

SphereSearchReport sphere_search(const AnyKnot& knot, const SearchParams& params) {
  if (params.n_samples < 12) throw std::invalid_argument("need n_samples >= 12");

  std::vector<Vec3> dirs = fibonacci_sphere(params.n_samples);
  std::vector<SampleOutcome> outcomes(dirs.size());

  parallel_for(dirs.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      outcomes[i] = count_with_jitter(knot, dirs[i], params.seed, i, params.grid);
  });

  SphereSearchReport rep;
  rep.mode = params.mode;
  const bool want_min = params.mode == SearchMode::kMin;
  std::uint64_t generic_count = 0;
  int best = 0;
  std::size_t best_idx = 0;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    ++rep.histogram[outcomes[i].value];
    if (outcomes[i].generic) ++generic_count;
    bool better = i == 0 || (want_min ? outcomes[i].value < best : outcomes[i].value > best);
    if (better) {
      best = outcomes[i].value;
      best_idx = i;
    }
  }
  rep.samples = outcomes.size();
  rep.best_value = best;
  rep.best_direction = Direction{dirs[best_idx]};

  if (params.refine) {
    SplitMix64 rng(params.seed ^ 0x9e3779b97f4a7c15ULL);
    for (int extra = 0; extra < 1000; ++extra) {
      Vec3 d = jitter_direction(rep.best_direction.v, rng, 0.05);
      auto o = count_with_jitter(knot, d, params.seed, dirs.size() + extra, params.grid);
      ++rep.histogram[o.value];
      if (o.generic) ++generic_count;
      ++rep.samples;
      bool better = want_min ? o.value < rep.best_value : o.value > rep.best_value;
      if (better) {
        rep.best_value = o.value;
        rep.best_direction = Direction{d};
      }
    }
  }

  rep.generic_fraction = static_cast<double>(generic_count) / static_cast<double>(rep.samples);
  return rep;
}

std::string SphereSearchReport::to_json() const {
  nlohmann::json j;
  j["mode"] = mode == SearchMode::kMin ? "min" : "max";
  j["samples"] = samples;
  j["best_value"] = best_value;
  j["best_direction"] = {best_direction.v.x, best_direction.v.y, best_direction.v.z};
  nlohmann::json h = nlohmann::json::object();
  for (const auto& [k, c] : histogram) h[std::to_string(k)] = c;
  j["histogram"] = h;
  j["generic_fraction"] = generic_fraction;
  return j.dump(2) + "\n";
}

double total_curvature(const curves::PolygonalKnot& knot) {
  const std::size_t n = knot.size();
  double sum = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 u = knot.edge_vector((i + n - 1) % n);
    Vec3 w = knot.edge_vector(i);
    double nu = u.norm(), nw = w.norm();
    if (!(nu > 0) || !(nw > 0)) throw DegeneratePolygon("zero-length edge");
    double cross = u.cross(w).norm();
    double dot = u.dot(w);
    if (dot < 0 && cross <= 1e-12 * nu * nw)
      throw DegenerateAngle("consecutive edges anti-parallel");
    sum += std::atan2(cross, dot);
  }
  return sum;
}

MilnorCheck milnor_average_check(const curves::PolygonalKnot& knot, int n_samples,
                                 std::uint64_t seed) {
  if (n_samples < 12) throw std::invalid_argument("need n_samples >= 12");
  MilnorCheck out;
  out.curvature_over_2pi = total_curvature(knot) / kTau;

  std::vector<long> values(n_samples, 0);
  parallel_for(static_cast<std::size_t>(n_samples), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) {
      SplitMix64 rng(seed ^ (0xd6e8feb86659fd93ULL * (i + 1)));
      Vec3 d = rng.unit_vector();
      for (;;) {
        try {
          values[i] = bridge_count_polygonal(knot, Direction{d}).value;
          break;
        } catch (const NonGenericDirection&) {
          d = jitter_direction(d, rng, 1e-6);
        }
      }
    }
  });
  double sum = std::accumulate(values.begin(), values.end(), 0.0);
  out.avg_bv = sum / n_samples;
  out.discrepancy = std::abs(out.avg_bv - out.curvature_over_2pi);
  return out;
}

int torus_superbridge_index(int p, int q) {
  if (p < 2 || q <= p || std::gcd(p, q) != 1)
    throw InvalidTorusType("need coprime 2 <= p < q");
  return std::min(2 * p, q);
}

}  // namespace knotforge::directional
