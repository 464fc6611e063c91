#include "knotforge/curves.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "knotforge/errors.hpp"

namespace knotforge::curves {

namespace {

long double eval_trig_ld(const TrigCoord& c, long double t) {
  long double acc = rat_to_long_double(c.constant);
  for (std::size_t k = 1; k <= c.cos_coeffs.size() || k <= c.sin_coeffs.size(); ++k) {
    long double kt = static_cast<long double>(k) * t;
    if (k <= c.cos_coeffs.size()) acc += rat_to_long_double(c.cos_coeffs[k - 1]) * cosl(kt);
    if (k <= c.sin_coeffs.size()) acc += rat_to_long_double(c.sin_coeffs[k - 1]) * sinl(kt);
  }
  return acc;
}

void pad_to_common_degree(std::array<TrigCoord, 3>& coords) {
  std::size_t d = 0;
  for (const auto& c : coords) d = std::max({d, c.cos_coeffs.size(), c.sin_coeffs.size()});
  // strip harmonics that are zero in every coordinate
  while (d > 0) {
    bool all_zero = true;
    for (const auto& c : coords) {
      if (d <= c.cos_coeffs.size() && c.cos_coeffs[d - 1] != 0) all_zero = false;
      if (d <= c.sin_coeffs.size() && c.sin_coeffs[d - 1] != 0) all_zero = false;
    }
    if (!all_zero) break;
    --d;
  }
  for (auto& c : coords) {
    c.cos_coeffs.resize(d, Rat(0));
    c.sin_coeffs.resize(d, Rat(0));
  }
}

}  // namespace

ParametricKnot ParametricKnot::trigonometric(std::array<TrigCoord, 3> coords) {
  pad_to_common_degree(coords);
  ParametricKnot k;
  k.kind_ = CurveKind::kTrigonometric;
  k.trig_ = std::move(coords);
  if (k.harmonic_degree() < 1)
    throw FixtureError("trigonometric curve needs harmonic degree >= 1");
  k.closure_residual_ = 0;  // periodic, closed by construction
  return k;
}

ParametricKnot ParametricKnot::polynomial(std::array<RatPoly, 3> coords) {
  ParametricKnot k;
  k.kind_ = CurveKind::kPolynomial;
  k.poly_ = std::move(coords);
  // closure check at the stated endpoints, relative to coordinate magnitude
  double worst = 0;
  for (int c = 0; c < 3; ++c) {
    Rat gap = k.poly_[c].eval(Rat(1)) - k.poly_[c].eval(Rat(0));
    double mag = 0;
    for (int s = 0; s < 64; ++s)
      mag = std::max(mag, std::abs(static_cast<double>(k.poly_[c].eval_ld(s / 64.0L))));
    if (mag == 0) mag = 1;
    worst = std::max(worst, std::abs(rat_to_double(gap)) / mag);
  }
  k.closure_residual_ = worst;
  if (worst > 1e-9)
    throw FixtureError("polynomial curve is not closed on [0,1]");
  return k;
}

int ParametricKnot::harmonic_degree() const {
  if (kind_ != CurveKind::kTrigonometric) return -1;
  return static_cast<int>(trig_[0].cos_coeffs.size());
}

int ParametricKnot::polynomial_degree() const {
  if (kind_ != CurveKind::kPolynomial) return -1;
  int d = -1;
  for (const auto& p : poly_) d = std::max(d, p.degree());
  return d;
}

Vec3 ParametricKnot::evaluate(double t) const {
  double p = period();
  long double tt = std::fmod(static_cast<long double>(t), static_cast<long double>(p));
  if (tt < 0) tt += p;
  if (kind_ == CurveKind::kTrigonometric) {
    return {static_cast<double>(eval_trig_ld(trig_[0], tt)),
            static_cast<double>(eval_trig_ld(trig_[1], tt)),
            static_cast<double>(eval_trig_ld(trig_[2], tt))};
  }
  return {static_cast<double>(poly_[0].eval_ld(tt)), static_cast<double>(poly_[1].eval_ld(tt)),
          static_cast<double>(poly_[2].eval_ld(tt))};
}

ParametricKnot::TrigView ParametricKnot::trig_view() const {
  TrigView v;
  v.constant = {rat_to_double(trig_[0].constant), rat_to_double(trig_[1].constant),
                rat_to_double(trig_[2].constant)};
  int d = harmonic_degree();
  v.cos_k.resize(d);
  v.sin_k.resize(d);
  for (int k = 0; k < d; ++k) {
    v.cos_k[k] = {rat_to_double(trig_[0].cos_coeffs[k]), rat_to_double(trig_[1].cos_coeffs[k]),
                  rat_to_double(trig_[2].cos_coeffs[k])};
    v.sin_k[k] = {rat_to_double(trig_[0].sin_coeffs[k]), rat_to_double(trig_[1].sin_coeffs[k]),
                  rat_to_double(trig_[2].sin_coeffs[k])};
  }
  return v;
}

std::vector<Vec3> ParametricKnot::poly_view() const {
  int d = polynomial_degree();
  std::vector<Vec3> out(d + 1);
  for (int i = 0; i <= d; ++i)
    out[i] = {rat_to_double(poly_[0].coeff(i)), rat_to_double(poly_[1].coeff(i)),
              rat_to_double(poly_[2].coeff(i))};
  return out;
}

PolygonalKnot PolygonalKnot::from_vertices(std::vector<Vec3> vertices, bool check_simple) {
  if (vertices.size() < 3) throw DegeneratePolygon("polygon needs at least 3 vertices");
  PolygonalKnot k;
  k.v_ = std::move(vertices);

  Vec3 lo = k.v_[0], hi = k.v_[0];
  for (const auto& p : k.v_) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  k.scale_ = (hi - lo).norm();
  if (k.scale_ == 0) throw DegeneratePolygon("all vertices coincide");

  const std::size_t n = k.v_.size();
  for (std::size_t i = 0; i < n; ++i)
    if (k.edge_vector(i).norm() <= 1e-12 * k.scale_)
      throw DegeneratePolygon("consecutive vertices coincide");

  if (check_simple) {
    // pairwise edge distance screen over non-adjacent edges
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = i + 2; j < n; ++j) {
        if (i == 0 && j == n - 1) continue;
        const Vec3 p = k.v_[i], u = k.edge_vector(i);
        const Vec3 q = k.v_[j], w = k.edge_vector(j);
        // closest-point parameters clamped to the segments
        Vec3 d0 = p - q;
        double a = u.dot(u), b = u.dot(w), c = w.dot(w);
        double d = u.dot(d0), e = w.dot(d0);
        double den = a * c - b * b;
        double s = 0, t = 0;
        if (den > 1e-18 * a * c) {
          s = std::clamp((b * e - c * d) / den, 0.0, 1.0);
        }
        t = c > 0 ? std::clamp((b * s + e) / c, 0.0, 1.0) : 0;
        s = a > 0 ? std::clamp((b * t - d) / a, 0.0, 1.0) : 0;
        double dist = (p + u * s - (q + w * t)).norm();
        if (dist <= 1e-9 * k.scale_)
          throw DegeneratePolygon("sampled polygon self-intersects");
      }
    }
    k.simplicity_checked_ = true;
  }
  return k;
}

void TorusKnotSpec::validate() const {
  if (p < 2 || q <= p) throw InvalidTorusType("need 2 <= p < q");
  if (std::gcd(p, q) != 1) throw InvalidTorusType("p and q must be coprime");
  if (!(minor_radius > 0) || !(minor_radius < major_radius))
    throw InvalidTorusType("need 0 < r < R");
}

ParametricKnot torus_curve(const TorusKnotSpec& spec) {
  spec.validate();
  const Rat R = spec.major_radius, r = spec.minor_radius;
  const int p = spec.p, q = spec.q;
  const Rat half = Rat(1, 2);
  int d = p + q;
  TrigCoord x, y, z;
  x.cos_coeffs.assign(d, Rat(0));
  x.sin_coeffs.assign(d, Rat(0));
  y = x;
  z = x;
  // (R + r cos qθ) cos pθ = R cos pθ + r/2 cos (q-p)θ + r/2 cos (q+p)θ
  x.cos_coeffs[p - 1] += R;
  x.cos_coeffs[q - p - 1] += r * half;
  x.cos_coeffs[q + p - 1] += r * half;
  // (R + r cos qθ) sin pθ = R sin pθ + r/2 sin (p+q)θ - r/2 sin (q-p)θ
  y.sin_coeffs[p - 1] += R;
  y.sin_coeffs[p + q - 1] += r * half;
  y.sin_coeffs[q - p - 1] -= r * half;
  z.sin_coeffs[q - 1] += r;
  return ParametricKnot::trigonometric({x, y, z});
}

namespace {

// point strictly inside triangle (a,b,c) test used by the fan check;
// tolerance is absolute, caller scales it
bool segment_pierces_triangle(const Vec3& s0, const Vec3& s1, const Vec3& a, const Vec3& b,
                              const Vec3& c, double tol) {
  Vec3 n = (b - a).cross(c - a);
  double area2 = n.norm();
  if (area2 <= tol * tol) return false;  // degenerate sliver cannot be pierced transversally
  n = n / area2;
  double ha = n.dot(s0 - a), hb = n.dot(s1 - a);
  if ((ha > -tol && hb > -tol) || (ha < tol && hb < tol)) return false;
  double t = ha / (ha - hb);
  Vec3 p = s0 + (s1 - s0) * t;
  // barycentric coordinates of p
  Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
  double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  double d20 = v2.dot(v0), d21 = v2.dot(v1);
  double den = d00 * d11 - d01 * d01;
  if (den == 0) return false;
  double u = (d11 * d20 - d01 * d21) / den;
  double v = (d00 * d21 - d01 * d20) / den;
  double w = 1 - u - v;
  double margin = tol / std::sqrt(area2);
  return u > margin && v > margin && w > margin;
}

}  // namespace

StraightenResult straighten_subarc(const PolygonalKnot& knot, const SubarcSpec& arc) {
  const std::size_t n = knot.size();
  if (arc.start >= n || arc.end >= n || arc.start == arc.end)
    throw DegeneratePolygon("subarc endpoints invalid");
  std::size_t interior = (arc.end + n - arc.start) % n;  // edges start..end
  if (interior < 2) throw DegeneratePolygon("subarc has no interior vertex");
  std::size_t removed = interior - 1;
  if (n - removed < 3) throw DegeneratePolygon("straightening leaves fewer than 3 vertices");

  // kept vertices: end, end+1, ..., start (the complementary arc), then the
  // new segment closes start -> end
  std::vector<Vec3> kept;
  kept.reserve(n - removed);
  for (std::size_t i = arc.end; i != (arc.start + 1) % n; i = (i + 1) % n)
    kept.push_back(knot.vertex(i));

  // fan from the subarc start over the removed chain
  std::vector<Vec3> chain;
  for (std::size_t i = arc.start;; i = (i + 1) % n) {
    chain.push_back(knot.vertex(i));
    if (i == arc.end) break;
  }

  PolygonalKnot result = PolygonalKnot::from_vertices(std::move(kept), false);

  const double tol = 1e-9 * knot.scale();
  bool empty_fan = true;
  const std::size_t m = result.size();
  for (std::size_t j = 1; j + 1 < chain.size() && empty_fan; ++j) {
    const Vec3& apex = chain.front();
    const Vec3& b = chain[j];
    const Vec3& c = chain[j + 1];
    for (std::size_t e = 0; e < m; ++e) {
      if (segment_pierces_triangle(result.vertex(e), result.vertex(e + 1), apex, b, c, tol)) {
        empty_fan = false;
        break;
      }
    }
  }
  return {std::move(result), empty_fan};
}

PolygonalKnot sample_polygon(const ParametricKnot& knot, int n, SampleMode mode) {
  if (n < 3) throw DegenerateSample("need at least 3 samples");
  const double period = knot.period();
  std::vector<double> params(n);
  if (mode == SampleMode::kUniformParameter) {
    for (int i = 0; i < n; ++i) params[i] = period * i / n;
  } else {
    // invert cumulative chordal arclength measured on a fine presampling
    const int fine = std::max(4096, 32 * n);
    std::vector<double> cum(fine + 1, 0.0);
    Vec3 prev = knot.evaluate(0);
    for (int i = 1; i <= fine; ++i) {
      Vec3 cur = knot.evaluate(period * i / fine);
      cum[i] = cum[i - 1] + (cur - prev).norm();
      prev = cur;
    }
    for (int i = 0; i < n; ++i) {
      double target = cum[fine] * i / n;
      auto it = std::lower_bound(cum.begin(), cum.end(), target);
      std::size_t hi = std::min<std::size_t>(fine, it - cum.begin());
      std::size_t lo = hi > 0 ? hi - 1 : 0;
      double seg = cum[hi] - cum[lo];
      double frac = seg > 0 ? (target - cum[lo]) / seg : 0;
      params[i] = period * (lo + frac) / fine;
    }
  }
  std::vector<Vec3> verts(n);
  for (int i = 0; i < n; ++i) verts[i] = knot.evaluate(params[i]);

  // reject before polygon construction so the error name is specific
  Vec3 lo = verts[0], hi = verts[0];
  for (const auto& p : verts) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y), std::min(lo.z, p.z)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y), std::max(hi.z, p.z)};
  }
  double scale = (hi - lo).norm();
  for (int i = 0; i < n; ++i)
    if ((verts[(i + 1) % n] - verts[i]).norm() <= 1e-12 * scale)
      throw DegenerateSample("two consecutive samples coincide");

  return PolygonalKnot::from_vertices(std::move(verts), /*check_simple=*/true);
}

// ---- fixture files ----

namespace {

using nlohmann::json;

TrigCoord trig_coord_from_json(const json& j) {
  TrigCoord c;
  c.constant = parse_rational(j.value("const", std::string("0")));
  for (const auto& s : j.value("cos", std::vector<std::string>{}))
    c.cos_coeffs.push_back(parse_rational(s));
  for (const auto& s : j.value("sin", std::vector<std::string>{}))
    c.sin_coeffs.push_back(parse_rational(s));
  return c;
}

RatPoly poly_from_json(const json& j) {
  std::vector<Rat> c;
  for (const auto& s : j.get<std::vector<std::string>>()) c.push_back(parse_rational(s));
  return RatPoly(std::move(c));
}

json trig_coord_to_json(const TrigCoord& c) {
  json j;
  j["const"] = rational_to_string(c.constant);
  std::vector<std::string> cs, ss;
  for (const auto& r : c.cos_coeffs) cs.push_back(rational_to_string(r));
  for (const auto& r : c.sin_coeffs) ss.push_back(rational_to_string(r));
  j["cos"] = cs;
  j["sin"] = ss;
  return j;
}

}  // namespace

ParametricKnot load_curve_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FixtureError("cannot open curve file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw FixtureError("bad JSON in '" + path + "': " + e.what());
  }
  const std::string kind = j.at("kind");
  const std::string domain = j.at("domain");
  if (kind == "trigonometric") {
    if (domain != "[0,2pi)") throw FixtureError("trigonometric curves use domain [0,2pi)");
    return ParametricKnot::trigonometric({trig_coord_from_json(j.at("coeffs").at("x")),
                                          trig_coord_from_json(j.at("coeffs").at("y")),
                                          trig_coord_from_json(j.at("coeffs").at("z"))});
  }
  if (kind == "polynomial") {
    if (domain != "[0,1)") throw FixtureError("polynomial curves use domain [0,1)");
    return ParametricKnot::polynomial({poly_from_json(j.at("coeffs").at("x")),
                                       poly_from_json(j.at("coeffs").at("y")),
                                       poly_from_json(j.at("coeffs").at("z"))});
  }
  throw FixtureError("unknown curve kind '" + kind + "'");
}

std::string curve_to_json(const ParametricKnot& knot) {
  json j;
  if (knot.kind() == CurveKind::kTrigonometric) {
    j["kind"] = "trigonometric";
    j["domain"] = "[0,2pi)";
    j["coeffs"]["x"] = trig_coord_to_json(knot.trig_coords()[0]);
    j["coeffs"]["y"] = trig_coord_to_json(knot.trig_coords()[1]);
    j["coeffs"]["z"] = trig_coord_to_json(knot.trig_coords()[2]);
  } else {
    j["kind"] = "polynomial";
    j["domain"] = "[0,1)";
    const char* names[3] = {"x", "y", "z"};
    for (int c = 0; c < 3; ++c) {
      std::vector<std::string> cs;
      for (const auto& r : knot.poly_coords()[c].coeffs()) cs.push_back(rational_to_string(r));
      j["coeffs"][names[c]] = cs;
    }
  }
  return j.dump(2) + "\n";
}

}  // namespace knotforge::curves
