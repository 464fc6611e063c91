#include "knotforge/secants.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "json.hpp"
#include "knotforge/errors.hpp"

namespace knotforge::secants {

PluckerLine PluckerLine::through_points(const Vec3& a, const Vec3& b) {
  Vec3 dir = b - a;
  double n = dir.norm();
  if (!(n > 0)) throw Degenerate("coincident points define no line");
  dir = dir / n;
  return {dir, a.cross(dir)};
}

PluckerLine PluckerLine::from_direction_point(const Vec3& dir, const Vec3& p) {
  double n = dir.norm();
  if (!(n > 0)) throw Degenerate("zero direction");
  Vec3 d = dir / n;
  return {d, p.cross(d)};
}

PluckerLine PluckerLine::canonical() const {
  bool flip = d.x < 0 || (d.x == 0 && (d.y < 0 || (d.y == 0 && d.z < 0)));
  return flip ? PluckerLine{-d, -m} : *this;
}

TransversalResult transversals_of_four_lines(const PluckerLine& l1, const PluckerLine& l2,
                                             const PluckerLine& l3, const PluckerLine& l4) {
  const std::array<PluckerLine, 4> ls{l1, l2, l3, l4};
  double moment_scale = 1.0;
  for (const auto& l : ls) moment_scale = std::max(moment_scale, l.m.norm());

  // rows of the incidence system acting on X = (d, m/moment_scale)
  double mat[4][6];
  for (int r = 0; r < 4; ++r) {
    mat[r][0] = ls[r].m.x / moment_scale;
    mat[r][1] = ls[r].m.y / moment_scale;
    mat[r][2] = ls[r].m.z / moment_scale;
    mat[r][3] = ls[r].d.x;
    mat[r][4] = ls[r].d.y;
    mat[r][5] = ls[r].d.z;
  }

  // full-pivot Gaussian elimination; entries are O(1) after the scaling
  int col_perm[6] = {0, 1, 2, 3, 4, 5};
  int rank = 0;
  double max_entry = 0;
  for (auto& row : mat)
    for (double x : row) max_entry = std::max(max_entry, std::abs(x));
  const double tol_rank = 1e-10 * std::max(1.0, max_entry);

  for (int step = 0; step < 4; ++step) {
    double best = 0;
    int br = -1, bc = -1;
    for (int r = step; r < 4; ++r)
      for (int c = step; c < 6; ++c)
        if (std::abs(mat[r][c]) > best) {
          best = std::abs(mat[r][c]);
          br = r;
          bc = c;
        }
    if (best <= tol_rank) break;
    if (br != step)
      for (int c = 0; c < 6; ++c) std::swap(mat[step][c], mat[br][c]);
    if (bc != step) {
      for (int r = 0; r < 4; ++r) std::swap(mat[r][step], mat[r][bc]);
      std::swap(col_perm[step], col_perm[bc]);
    }
    for (int r = step + 1; r < 4; ++r) {
      double f = mat[r][step] / mat[step][step];
      mat[r][step] = 0;
      for (int c = step + 1; c < 6; ++c) mat[r][c] -= f * mat[step][c];
    }
    ++rank;
  }

  if (6 - rank >= 3) throw Degenerate("four lines admit an infinite transversal family");

  // nullspace basis by back substitution, one vector per free column
  std::vector<std::array<double, 6>> basis;
  for (int fc = rank; fc < 6; ++fc) {
    std::array<double, 6> x{};  // in permuted coordinates
    x[fc] = 1.0;
    for (int r = rank - 1; r >= 0; --r) {
      double s = 0;
      for (int c = r + 1; c < 6; ++c) s += mat[r][c] * x[c];
      x[r] = -s / mat[r][r];
    }
    std::array<double, 6> v{};
    for (int c = 0; c < 6; ++c) v[col_perm[c]] = x[c];
    basis.push_back(v);
  }

  auto klein = [](const std::array<double, 6>& a, const std::array<double, 6>& b) {
    return a[0] * b[3] + a[1] * b[4] + a[2] * b[5] + b[0] * a[3] + b[1] * a[4] + b[2] * a[5];
  };

  TransversalResult out;
  auto emit = [&](double alpha, double beta) {
    std::array<double, 6> x{};
    for (int c = 0; c < 6; ++c) x[c] = alpha * basis[0][c] + beta * basis[1][c];
    Vec3 d{x[0], x[1], x[2]};
    Vec3 m{x[3] * moment_scale, x[4] * moment_scale, x[5] * moment_scale};
    double dn = d.norm();
    if (dn <= 1e-9 * (1 + m.norm() / moment_scale)) return;  // line at infinity
    d = d / dn;
    m = m / dn;
    m = m - d * d.dot(m);  // exact Klein membership
    out.lines.push_back({d, m});
  };

  double qaa = klein(basis[0], basis[0]);
  double qab = klein(basis[0], basis[1]);
  double qbb = klein(basis[1], basis[1]);
  // alpha^2 qaa + 2 alpha beta qab + beta^2 qbb = 0
  double disc = qab * qab - qaa * qbb;
  const double tol_disc = 1e-10 * std::max({qaa * qaa, qbb * qbb, qab * qab, 1e-300});
  if (std::abs(qaa) < 1e-14 && std::abs(qbb) < 1e-14 && std::abs(qab) < 1e-14) {
    // whole pencil on the quadric
    throw Degenerate("transversal pencil lies on the Klein quadric");
  }
  if (disc < -tol_disc) return out;
  if (std::abs(disc) <= tol_disc) {
    out.tangent = true;
    if (std::abs(qaa) >= std::abs(qbb))
      emit(-qab / qaa, 1.0);
    else
      emit(1.0, -qab / qbb);
    return out;
  }
  double root = std::sqrt(std::max(0.0, disc));
  if (std::abs(qaa) >= std::abs(qbb)) {
    emit((-qab + root) / qaa, 1.0);
    emit((-qab - root) / qaa, 1.0);
  } else {
    emit(1.0, (-qab + root) / qbb);
    emit(1.0, (-qab - root) / qbb);
  }
  return out;
}

namespace {

struct EdgeFrame {
  Vec3 p;      // start vertex
  Vec3 e;      // edge vector
  Vec3 d;      // unit direction
  Vec3 m;      // moment of the support line
  double len;  // |e|
};

// Hit of an infinite line against an edge, within `tol` of incidence and
// with closed endpoint inclusion slackened by the same tolerance.
std::optional<SecantHit> line_hit_edge(const PluckerLine& line, const EdgeFrame& f, int index,
                                       double tol) {
  // closest-approach parameters of line (a0 + s u) and edge (p + t e)
  Vec3 a0 = line.closest_point_to_origin();
  const Vec3& u = line.d;
  double b = u.dot(f.e);
  double c = f.e.dot(f.e);
  Vec3 d0 = a0 - f.p;
  double den = c - b * b;  // |u|=1
  double t;
  if (den <= 1e-14 * c) {
    // edge parallel to the line: any point is closest; use midpoint
    t = 0.5;
  } else {
    t = (f.e.dot(d0) - b * u.dot(d0)) / den;
  }
  double slack = tol / f.len;
  if (t < -slack || t > 1 + slack) return std::nullopt;
  double tc = std::clamp(t, 0.0, 1.0);
  Vec3 q = f.p + f.e * tc;
  if (line.distance_to(q) > tol) return std::nullopt;
  return SecantHit{index, tc, q};
}

struct Bilinear {
  double a, b, c, d;  // a + b t + c s + d t s
  double magnitude;   // conservative size bound for degeneracy tests
};

struct PairFrame {
  Vec3 A, u, B, w;
  Vec3 AxB, uxB, Axw, uxw, BmA;
};

inline Bilinear chord_meets_line(const PairFrame& pf, const EdgeFrame& k) {
  Bilinear f;
  f.a = pf.BmA.dot(k.m) + pf.AxB.dot(k.d);
  f.b = -pf.u.dot(k.m) + pf.uxB.dot(k.d);
  f.c = pf.w.dot(k.m) + pf.Axw.dot(k.d);
  f.d = pf.uxw.dot(k.d);
  f.magnitude = pf.BmA.norm() * k.m.norm() + pf.AxB.norm() + pf.uxB.norm() + pf.Axw.norm() +
                pf.uxw.norm() + pf.u.norm() * k.m.norm() + pf.w.norm() * k.m.norm();
  return f;
}

}  // namespace

std::vector<SecantLine> quadrisecants(const curves::PolygonalKnot& knot,
                                      QuadrisecantSearchStats* stats, double dedup_angle,
                                      double dedup_moment_rel) {
  const std::size_t n = knot.size();
  const double scale = knot.scale();
  const double tol_hit = 1e-9 * scale;
  QuadrisecantSearchStats local;
  QuadrisecantSearchStats& st = stats ? *stats : local;

  std::vector<EdgeFrame> edges(n);
  for (std::size_t i = 0; i < n; ++i) {
    EdgeFrame& f = edges[i];
    f.p = knot.vertex(i);
    f.e = knot.edge_vector(i);
    f.len = f.e.norm();
    f.d = f.e / f.len;
    f.m = f.p.cross(f.d);
  }

  auto adjacent = [n](std::size_t a, std::size_t b) {
    std::size_t diff = (b + n - a) % n;
    return diff == 0 || diff == 1 || diff == n - 1;
  };

  std::vector<PluckerLine> found;

  struct Survivor {
    std::size_t k;
    Bilinear f;
  };
  std::vector<Survivor> survivors;

  auto try_candidate = [&](const PairFrame& pf, double t, double s, std::size_t k,
                           std::size_t l) {
    if (!(t > -1e-7 && t < 1 + 1e-7 && s > -1e-7 && s < 1 + 1e-7)) return;
    Vec3 a = pf.A + pf.u * t;
    Vec3 b = pf.B + pf.w * s;
    if ((b - a).norm() <= tol_hit) return;
    ++st.candidates_tested;
    PluckerLine line = PluckerLine::through_points(a, b).canonical();
    // require hits inside the third and fourth segments before keeping;
    // the final re-intersection pass re-verifies everything
    if (!line_hit_edge(line, edges[k], static_cast<int>(k), tol_hit)) return;
    if (!line_hit_edge(line, edges[l], static_cast<int>(l), tol_hit)) return;
    found.push_back(line);
  };

  for (std::size_t i = 0; i + 2 < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (adjacent(i, j)) continue;
      PairFrame pf;
      pf.A = edges[i].p;
      pf.u = edges[i].e;
      pf.B = edges[j].p;
      pf.w = edges[j].e;
      pf.AxB = pf.A.cross(pf.B);
      pf.uxB = pf.u.cross(pf.B);
      pf.Axw = pf.A.cross(pf.w);
      pf.uxw = pf.u.cross(pf.w);
      pf.BmA = pf.B - pf.A;

      survivors.clear();
      for (std::size_t k = j + 2; k < n; ++k) {
        if (adjacent(i, k) || adjacent(j, k)) continue;
        Bilinear f = chord_meets_line(pf, edges[k]);
        double f00 = f.a, f10 = f.a + f.b, f01 = f.a + f.c, f11 = f.a + f.b + f.c + f.d;
        double lo = std::min(std::min(f00, f10), std::min(f01, f11));
        double hi = std::max(std::max(f00, f10), std::max(f01, f11));
        double eps_deg = 1e-12 * f.magnitude;
        if (std::max(std::abs(lo), std::abs(hi)) <= eps_deg) {
          ++st.degenerate_triples;
          continue;  // chord family lies in a common plane with this edge
        }
        double slack = 1e-9 * f.magnitude;
        if (lo > slack || hi < -slack) continue;
        survivors.push_back({k, f});
      }

      for (std::size_t s1 = 0; s1 + 1 < survivors.size(); ++s1) {
        for (std::size_t s2 = s1 + 1; s2 < survivors.size(); ++s2) {
          if (adjacent(survivors[s1].k, survivors[s2].k)) continue;
          const Bilinear& fk = survivors[s1].f;
          const Bilinear& fl = survivors[s2].f;
          // eliminate s: quadratic in t
          double qa = fl.b * fk.d - fl.d * fk.b;
          double qb = fl.a * fk.d + fl.b * fk.c - fl.c * fk.b - fl.d * fk.a;
          double qc = fl.a * fk.c - fl.c * fk.a;
          double tol_q = 1e-13 * (fk.magnitude * fl.magnitude);
          std::array<double, 2> roots;
          int nroots = 0;
          if (std::abs(qa) <= tol_q) {
            if (std::abs(qb) > tol_q) roots[nroots++] = -qc / qb;
          } else {
            double disc = qb * qb - 4 * qa * qc;
            if (disc >= 0) {
              double r = std::sqrt(disc);
              // numerically stable pair
              double q = -0.5 * (qb + (qb >= 0 ? r : -r));
              roots[nroots++] = q / qa;
              if (std::abs(q) > 0) roots[nroots++] = qc / q;
            }
          }
          for (int ri = 0; ri < nroots; ++ri) {
            double t = roots[ri];
            if (!(t > -1e-6 && t < 1 + 1e-6)) continue;
            double den_k = fk.c + fk.d * t;
            double den_l = fl.c + fl.d * t;
            double s;
            if (std::abs(den_k) >= std::abs(den_l)) {
              if (std::abs(den_k) <= 1e-13 * fk.magnitude) continue;
              s = -(fk.a + fk.b * t) / den_k;
            } else {
              s = -(fl.a + fl.b * t) / den_l;
            }
            try_candidate(pf, t, s, survivors[s1].k, survivors[s2].k);
          }
        }
      }
    }
  }

  st.lines_before_dedup = found.size();

  // deduplicate: same direction within 1e-6 rad and moments within
  // 1e-6*scale
  std::sort(found.begin(), found.end(), [](const PluckerLine& a, const PluckerLine& b) {
    if (a.d.x != b.d.x) return a.d.x < b.d.x;
    if (a.d.y != b.d.y) return a.d.y < b.d.y;
    if (a.d.z != b.d.z) return a.d.z < b.d.z;
    return a.m.x < b.m.x;
  });
  std::vector<PluckerLine> unique_lines;
  std::vector<int> group_sizes;
  for (const auto& l : found) {
    bool merged = false;
    for (std::size_t u = 0; u < unique_lines.size(); ++u) {
      const auto& ul = unique_lines[u];
      double angle = std::acos(std::clamp(std::abs(ul.d.dot(l.d)), 0.0, 1.0));
      if (angle < dedup_angle && (ul.m - l.m).norm() < dedup_moment_rel * scale) {
        ++group_sizes[u];
        merged = true;
        break;
      }
    }
    if (!merged) {
      unique_lines.push_back(l);
      group_sizes.push_back(1);
    }
  }

  // re-intersect every retained line against all edges, then verify
  std::vector<SecantLine> out;
  for (std::size_t u = 0; u < unique_lines.size(); ++u) {
    const auto& line = unique_lines[u];
    std::vector<SecantHit> hits;
    for (std::size_t e = 0; e < n; ++e) {
      auto h = line_hit_edge(line, edges[e], static_cast<int>(e), tol_hit);
      if (h) hits.push_back(*h);
    }
    std::sort(hits.begin(), hits.end(), [&](const SecantHit& a, const SecantHit& b) {
      return line.coordinate_of(a.point) < line.coordinate_of(b.point);
    });
    // merge duplicate hits at shared vertices
    std::vector<SecantHit> merged;
    for (const auto& h : hits) {
      if (!merged.empty() && (merged.back().point - h.point).norm() <= tol_hit) continue;
      merged.push_back(h);
    }
    if (merged.size() < 4) continue;
    SecantLine s;
    s.line = line;
    s.hits = std::move(merged);
    s.dedup_group_size = group_sizes[u];
    out.push_back(std::move(s));
  }

  std::sort(out.begin(), out.end(), [](const SecantLine& a, const SecantLine& b) {
    const Vec3 &da = a.line.d, &db = b.line.d;
    if (da.x != db.x) return da.x < db.x;
    if (da.y != db.y) return da.y < db.y;
    if (da.z != db.z) return da.z < db.z;
    const Vec3 &ma = a.line.m, &mb = b.line.m;
    if (ma.x != mb.x) return ma.x < mb.x;
    if (ma.y != mb.y) return ma.y < mb.y;
    return ma.z < mb.z;
  });
  return out;
}

std::vector<Rat> common_axis_roots(const curves::ParametricKnot& knot) {
  if (knot.kind() != curves::CurveKind::kPolynomial)
    throw NotPolynomial("common axis roots need a polynomial curve");
  const RatPoly& x = knot.poly_coords()[0];
  const RatPoly& y = knot.poly_coords()[1];
  if (x.is_zero() && y.is_zero()) throw Degenerate("curve lies on the axis");
  RatPoly g = x.is_zero() ? y : (y.is_zero() ? x : RatPoly::gcd(x, y));
  if (g.degree() <= 0) return {};
  return isolate_real_roots(g, Rat(0), Rat(1), Rat(1, 1000000000000L));
}

std::string SecantLine::to_json() const {
  nlohmann::json j;
  j["direction"] = {line.d.x, line.d.y, line.d.z};
  j["moment"] = {line.m.x, line.m.y, line.m.z};
  nlohmann::json hs = nlohmann::json::array();
  for (const auto& h : hits) {
    nlohmann::json hj;
    hj["edge"] = h.edge;
    hj["t_on_edge"] = h.t_on_edge;
    hj["point"] = {h.point.x, h.point.y, h.point.z};
    hs.push_back(hj);
  }
  j["hits"] = hs;
  j["n_hits"] = hits.size();
  j["dedup_group_size"] = dedup_group_size;
  return j.dump(2) + "\n";
}

namespace {

bool segment_hits_fan_triangle(const Vec3& s0, const Vec3& s1, const Vec3& a, const Vec3& b,
                               const Vec3& c, double tol) {
  Vec3 nrm = (b - a).cross(c - a);
  double area2 = nrm.norm();
  if (area2 <= tol * tol) return false;
  nrm = nrm / area2;
  double ha = nrm.dot(s0 - a), hb = nrm.dot(s1 - a);
  if ((ha > -tol && hb > -tol) || (ha < tol && hb < tol)) return false;
  double t = ha / (ha - hb);
  Vec3 p = s0 + (s1 - s0) * t;
  Vec3 v0 = b - a, v1 = c - a, v2 = p - a;
  double d00 = v0.dot(v0), d01 = v0.dot(v1), d11 = v1.dot(v1);
  double d20 = v2.dot(v0), d21 = v2.dot(v1);
  double den = d00 * d11 - d01 * d01;
  if (den == 0) return false;
  double u = (d11 * d20 - d01 * d21) / den;
  double v = (d00 * d21 - d01 * d20) / den;
  double margin = tol / std::sqrt(area2);
  return u > margin && v > margin && (1 - u - v) > margin;
}

}  // namespace

NontrivialityCertificate nontriviality_screen(const curves::PolygonalKnot& knot,
                                              const SecantLine& secant) {
  if (secant.hits.size() < 4)
    throw std::invalid_argument("nontriviality screen needs a secant with >= 4 hits");
  const std::size_t n = knot.size();
  const double tol = 1e-9 * knot.scale();

  // knot-order position of each hit (edge index + fraction)
  auto knot_pos = [&](const SecantHit& h) { return h.edge + h.t_on_edge; };
  std::vector<int> by_knot(secant.hits.size());
  for (std::size_t i = 0; i < by_knot.size(); ++i) by_knot[i] = static_cast<int>(i);
  std::sort(by_knot.begin(), by_knot.end(), [&](int a, int b) {
    return knot_pos(secant.hits[a]) < knot_pos(secant.hits[b]);
  });
  // rank along the knot for adjacency queries
  std::vector<int> rank(by_knot.size());
  for (std::size_t r = 0; r < by_knot.size(); ++r) rank[by_knot[r]] = static_cast<int>(r);

  NontrivialityCertificate cert;
  cert.secant = secant;
  const int m = static_cast<int>(secant.hits.size());

  for (int i = 0; i + 1 < m; ++i) {
    PairEvidence ev;
    ev.hit_a = i;
    ev.hit_b = i + 1;
    int ra = rank[i], rb = rank[i + 1];
    int diff = (rb - ra + m) % m;
    ev.arc_exists = diff == 1 || diff == m - 1;
    if (ev.arc_exists) {
      // arc runs from the earlier hit (along the knot) to the later one
      const SecantHit& first = diff == 1 ? secant.hits[i] : secant.hits[i + 1];
      const SecantHit& second = diff == 1 ? secant.hits[i + 1] : secant.hits[i];
      std::vector<Vec3> arc;
      arc.push_back(first.point);
      for (std::size_t e = (first.edge + 1) % n;; e = (e + 1) % n) {
        arc.push_back(knot.vertex(e));
        if (static_cast<int>(e) == second.edge) break;
        if (arc.size() > n + 2) break;  // wrapped fully; malformed input
      }
      arc.push_back(second.point);

      Vec3 mid = (first.point + second.point) * 0.5;
      // edges of the rest of the knot: everything outside [first.edge, second.edge]
      auto on_arc = [&](std::size_t e) {
        std::size_t span = (second.edge - first.edge + n) % n;
        std::size_t off = (e - first.edge + n) % n;
        return off <= span;
      };
      for (std::size_t e = 0; e < n && !ev.pierced; ++e) {
        if (on_arc(e)) continue;
        for (std::size_t j = 0; j + 1 < arc.size(); ++j) {
          if (segment_hits_fan_triangle(knot.vertex(e), knot.vertex(e + 1), mid, arc[j],
                                        arc[j + 1], tol)) {
            ev.pierced = true;
            break;
          }
        }
      }
      if (!ev.pierced) cert.verdict = ScreenVerdict::kSuspectTrivial;
    }
    cert.evidence.push_back(ev);
  }
  return cert;
}

}  // namespace knotforge::secants
