#include "knotforge/diagram.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace knotforge::diagram {

PlanarProjection project(const curves::PolygonalKnot& knot, const Vec3& direction) {
  double n = direction.norm();
  if (!(n > 0)) throw NonGenericDirection("zero projection direction");
  Vec3 v = direction / n;

  // frame from the least-aligned coordinate axis, smallest index on ties
  int axis = 0;
  double best = std::abs(v.x);
  if (std::abs(v.y) < best) {
    best = std::abs(v.y);
    axis = 1;
  }
  if (std::abs(v.z) < best) axis = 2;
  Vec3 a{axis == 0 ? 1.0 : 0.0, axis == 1 ? 1.0 : 0.0, axis == 2 ? 1.0 : 0.0};
  Vec3 e1 = (a - v * a.dot(v)).normalized();
  Vec3 e2 = v.cross(e1);

  PlanarProjection proj;
  proj.direction = v;
  proj.e1 = e1;
  proj.e2 = e2;
  proj.scale3d = knot.scale();
  proj.points.reserve(knot.size());
  proj.depths.reserve(knot.size());
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& p : knot.vertices()) {
    Vec2 q{p.dot(e1), p.dot(e2)};
    proj.points.push_back(q);
    proj.depths.push_back(p.dot(v));
    lo = {std::min(lo.x, q.x), std::min(lo.y, q.y)};
    hi = {std::max(hi.x, q.x), std::max(hi.y, q.y)};
  }
  proj.scale = (hi - lo).norm();
  return proj;
}

KnotDiagram::KnotDiagram(std::vector<Node> nodes) : nodes_(std::move(nodes)) {}

namespace {

struct Passage {
  int edge;
  double t;
  int crossing;
  bool over;
};

}  // namespace

KnotDiagram extract_diagram(const PlanarProjection& proj,
                            const std::optional<QuadExclusion>& exclusion,
                            int* excluded_crossings, double theta_min) {
  const std::size_t n = proj.points.size();
  const double tol = 1e-9 * proj.scale;
  const double depth_tol = 1e-9 * proj.scale3d;
  if (excluded_crossings) *excluded_crossings = 0;

  auto excluded = [&](const Vec2& p) {
    return exclusion && (p - exclusion->center).norm() < exclusion->radius;
  };

  std::vector<Crossing> crossings;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      const Vec2 p = proj.points[i];
      const Vec2 r = proj.points[(i + 1) % n] - p;
      const Vec2 q = proj.points[j];
      const Vec2 s = proj.points[(j + 1) % n] - q;
      double denom = r.cross(s);
      double rlen = r.norm(), slen = s.norm();
      Vec2 qp = q - p;
      if (std::abs(denom) <= 1e-14 * rlen * slen) {
        // parallel; overlap within tolerance is a degenerate projection
        double gap = std::abs(qp.cross(r)) / rlen;
        if (gap < tol) {
          double t0 = qp.dot(r) / (rlen * rlen);
          double t1 = (qp + s).dot(r) / (rlen * rlen);
          if (std::max(std::min(t0, t1), 0.0) <= std::min(std::max(t0, t1), 1.0)) {
            if (excluded({p.x + r.x * 0.5, p.y + r.y * 0.5})) continue;
            throw NonGenericProjection(NonGenericProjection::Kind::kSmallAngle,
                                       "overlapping parallel edges in projection");
          }
        }
        continue;
      }
      double t = qp.cross(s) / denom;
      double u = qp.cross(r) / denom;
      double slack_t = tol / rlen, slack_u = tol / slen;
      if (t < -slack_t || t > 1 + slack_t || u < -slack_u || u > 1 + slack_u) continue;
      Vec2 x = p + r * t;
      if (excluded(x)) {
        if (excluded_crossings) ++(*excluded_crossings);
        continue;
      }
      bool interior = t > slack_t && t < 1 - slack_t && u > slack_u && u < 1 - slack_u;
      if (!interior)
        throw NonGenericProjection(NonGenericProjection::Kind::kVertexHit,
                                   "crossing within tolerance of a projected vertex");
      double ang = std::atan2(std::abs(r.cross(s)), r.dot(s));
      double line_angle = std::min(ang, kTau / 2 - ang);
      if (line_angle <= theta_min)
        throw NonGenericProjection(NonGenericProjection::Kind::kSmallAngle,
                                   "crossing angle below the transversality floor");
      double depth_i = proj.depths[i] + (proj.depths[(i + 1) % n] - proj.depths[i]) * t;
      double depth_j = proj.depths[j] + (proj.depths[(j + 1) % n] - proj.depths[j]) * u;
      if (std::abs(depth_i - depth_j) <= depth_tol)
        throw NonGenericProjection(NonGenericProjection::Kind::kDepthTie,
                                   "strands at equal depth under the projection");
      Crossing c;
      c.position = x;
      c.transversality_angle = line_angle;
      bool i_over = depth_i > depth_j;
      if (i_over) {
        c.over_edge = static_cast<int>(i);
        c.over_t = t;
        c.over_depth = depth_i;
        c.under_edge = static_cast<int>(j);
        c.under_t = u;
        c.under_depth = depth_j;
      } else {
        c.over_edge = static_cast<int>(j);
        c.over_t = u;
        c.over_depth = depth_j;
        c.under_edge = static_cast<int>(i);
        c.under_t = t;
        c.under_depth = depth_i;
      }
      Vec2 over_dir = i_over ? r : s;
      Vec2 under_dir = i_over ? s : r;
      c.sign = over_dir.cross(under_dir) > 0 ? +1 : -1;
      crossings.push_back(c);
    }
  }

  // vertex proximity against every projected vertex
  for (const auto& c : crossings)
    for (std::size_t k = 0; k < n; ++k)
      if ((c.position - proj.points[k]).norm() < tol)
        throw NonGenericProjection(NonGenericProjection::Kind::kVertexHit,
                                   "crossing coincides with a projected vertex");
  for (std::size_t a = 0; a < crossings.size(); ++a)
    for (std::size_t b = a + 1; b < crossings.size(); ++b)
      if ((crossings[a].position - crossings[b].position).norm() < tol)
        throw NonGenericProjection(NonGenericProjection::Kind::kTriplePoint,
                                   "three edges meet within tolerance of one point");

  // wire the 4-valent map by walking the curve through all passages
  std::vector<Passage> passages;
  passages.reserve(crossings.size() * 2);
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    passages.push_back({crossings[c].over_edge, crossings[c].over_t, static_cast<int>(c), true});
    passages.push_back(
        {crossings[c].under_edge, crossings[c].under_t, static_cast<int>(c), false});
  }
  std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
  });

  std::vector<KnotDiagram::Node> nodes(crossings.size());
  for (std::size_t c = 0; c < crossings.size(); ++c) {
    nodes[c].sign = crossings[c].sign;
    nodes[c].geom = crossings[c];
    nodes[c].has_geometry = true;
  }
  auto entry_port = [&](const Passage& p) {
    if (!p.over) return KnotDiagram::kUnderIn;
    return nodes[p.crossing].sign > 0 ? 3 : 1;
  };
  auto exit_port = [&](const Passage& p) {
    if (!p.over) return KnotDiagram::kUnderOut;
    return nodes[p.crossing].sign > 0 ? 1 : 3;
  };
  const std::size_t m = passages.size();
  for (std::size_t k = 0; k < m; ++k) {
    const Passage& cur = passages[k];
    const Passage& nxt = passages[(k + 1) % m];
    nodes[cur.crossing].adj[exit_port(cur)] = {nxt.crossing, entry_port(nxt)};
    nodes[nxt.crossing].adj[entry_port(nxt)] = {cur.crossing, exit_port(cur)};
  }
  return KnotDiagram(std::move(nodes));
}

RobustDiagram project_and_extract(const curves::PolygonalKnot& knot, const Vec3& direction,
                                  std::uint64_t seed) {
  Vec3 v = direction.normalized();
  SplitMix64 rng(seed ^ 0x51e03f9c2ca5d9b1ULL);
  for (int attempt = 0; attempt < 16; ++attempt) {
    PlanarProjection proj = project(knot, v);
    try {
      KnotDiagram d = extract_diagram(proj);
      return {std::move(d), std::move(proj), v, attempt};
    } catch (const NonGenericProjection&) {
      v = jitter_direction(v, rng, 1e-5);
    }
  }
  throw NonGenericProjection(NonGenericProjection::Kind::kTriplePoint,
                             "projection stayed non-generic after 16 jitters");
}

SecantProjection project_along_secant(const curves::PolygonalKnot& knot,
                                      const secants::SecantLine& secant) {
  if (secant.hits.size() < 4)
    throw std::invalid_argument("secant projection needs >= 4 hits");
  SecantProjection out;
  out.proj = project(knot, secant.line.d);
  Vec2 centroid{0, 0};
  for (const auto& h : secant.hits) {
    Vec2 img = out.proj.project_point(h.point);
    centroid = centroid + img * (1.0 / secant.hits.size());
  }
  for (const auto& h : secant.hits) {
    Vec2 img = out.proj.project_point(h.point);
    if ((img - centroid).norm() > 1e-6 * out.proj.scale)
      throw Degenerate("secant hits do not project to a single quadruple point");
  }
  out.quad_point = centroid;
  out.suppression_radius = 1e-3 * out.proj.scale;
  return out;
}

int KnotDiagram::component_count() const {
  if (nodes_.empty()) return 0;
  std::set<std::pair<int, int>> seen;  // entry darts
  int components = 0;
  for (std::size_t c = 0; c < nodes_.size(); ++c) {
    for (int pass = 0; pass < 2; ++pass) {
      int p = pass == 0 ? kUnderIn : over_in_port(static_cast<int>(c));
      if (seen.count({static_cast<int>(c), p})) continue;
      ++components;
      int cc = static_cast<int>(c), pp = p;
      do {
        seen.insert({cc, pp});
        Dart next = nodes_[cc].adj[(pp + 2) % 4];
        cc = next.c;
        pp = next.p;
      } while (!(cc == static_cast<int>(c) && pp == p));
    }
  }
  return components;
}

std::vector<std::pair<int, bool>> KnotDiagram::gauss_sequence() const {
  std::vector<std::pair<int, bool>> seq;
  if (nodes_.empty()) return seq;
  if (component_count() != 1) throw NotAKnot("diagram traces more than one component");
  int c = 0, p = kUnderIn;
  do {
    seq.emplace_back(c, p == over_in_port(c));
    Dart next = nodes_[c].adj[(p + 2) % 4];
    c = next.c;
    p = next.p;
  } while (!(c == 0 && p == kUnderIn));
  return seq;
}

std::vector<std::array<int, 4>> KnotDiagram::pd_code() const {
  auto seq = gauss_sequence();
  const int two_n = static_cast<int>(seq.size());
  std::vector<std::array<int, 4>> tuples(nodes_.size(), {0, 0, 0, 0});
  for (int k = 0; k < two_n; ++k) {
    auto [c, over] = seq[k];
    int in_arc = k == 0 ? two_n : k;
    int out_arc = k + 1 > two_n ? 1 : k + 1;
    int in_port = over ? over_in_port(c) : kUnderIn;
    int out_port = over ? over_out_port(c) : kUnderOut;
    tuples[c][in_port] = in_arc;
    tuples[c][out_port] = out_arc;
  }
  return tuples;
}

std::string KnotDiagram::pd_string() const {
  auto tuples = pd_code();
  std::ostringstream os;
  for (const auto& t : tuples)
    os << "X(" << t[0] << "," << t[1] << "," << t[2] << "," << t[3] << ")\n";
  return os.str();
}

std::string KnotDiagram::gauss_string() const {
  auto seq = gauss_sequence();
  std::map<int, int> label;
  std::ostringstream os;
  bool first = true;
  for (auto [c, over] : seq) {
    if (!label.count(c)) label[c] = static_cast<int>(label.size()) + 1;
    if (!first) os << " ";
    first = false;
    os << (over ? "O" : "U") << label[c] << (nodes_[c].sign > 0 ? "+" : "-");
  }
  return os.str();
}

KnotDiagram KnotDiagram::from_pd(const std::vector<std::array<int, 4>>& tuples) {
  const int n = static_cast<int>(tuples.size());
  const int two_n = 2 * n;
  std::map<int, std::vector<std::pair<int, int>>> where;  // arc -> (crossing, slot)
  for (int c = 0; c < n; ++c)
    for (int s = 0; s < 4; ++s) {
      int a = tuples[c][s];
      if (a < 1 || a > two_n) throw FixtureError("PD arc label out of range");
      where[a].push_back({c, s});
    }
  for (const auto& [arc, spots] : where)
    if (spots.size() != 2)
      throw FixtureError("PD arc " + std::to_string(arc) + " does not appear exactly twice");

  std::vector<Node> nodes(n);
  auto next_arc = [two_n](int a) { return a % two_n + 1; };
  for (int c = 0; c < n; ++c) {
    int l1 = tuples[c][1], l3 = tuples[c][3];
    if (next_arc(l3) == l1)
      nodes[c].sign = +1;  // over strand runs slot 3 -> 1
    else if (next_arc(l1) == l3)
      nodes[c].sign = -1;
    else
      throw FixtureError("cannot orient over strand of PD tuple");
  }
  for (const auto& [arc, spots] : where) {
    auto [c1, s1] = spots[0];
    auto [c2, s2] = spots[1];
    nodes[c1].adj[s1] = {c2, s2};
    nodes[c2].adj[s2] = {c1, s1};
  }
  return KnotDiagram(std::move(nodes));
}

KnotDiagram KnotDiagram::from_pd_string(const std::string& text) {
  std::vector<std::array<int, 4>> tuples;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::array<int, 4> t;
    if (std::sscanf(line.c_str() + first, "X(%d,%d,%d,%d)", &t[0], &t[1], &t[2], &t[3]) != 4)
      throw FixtureError("bad PD line: " + line);
    tuples.push_back(t);
  }
  if (tuples.empty()) throw FixtureError("PD file holds no crossings");
  return from_pd(tuples);
}

std::vector<KnotDiagram::Face> KnotDiagram::faces() const {
  std::vector<Face> out;
  std::set<std::pair<int, int>> visited;
  for (std::size_t c = 0; c < nodes_.size(); ++c) {
    for (int p = 0; p < 4; ++p) {
      if (visited.count({static_cast<int>(c), p})) continue;
      Face f;
      Dart d{static_cast<int>(c), p};
      while (!visited.count({d.c, d.p})) {
        visited.insert({d.c, d.p});
        f.darts.push_back(d);
        Dart other = adj(d);
        d = {other.c, (other.p + 1) % 4};
      }
      out.push_back(std::move(f));
    }
  }
  return out;
}

std::vector<CrescentInfo> find_crescents(const KnotDiagram& diagram) {
  std::vector<CrescentInfo> out;
  for (const auto& f : diagram.faces()) {
    if (f.darts.size() != 2) continue;
    Dart d1 = f.darts[0], d2 = f.darts[1];
    if (d1.c == d2.c) continue;
    CrescentInfo ci;
    ci.c1 = d1.c;
    ci.c2 = d2.c;
    ci.side1 = d1;
    ci.side2 = d2;
    Dart r1 = diagram.nodes()[d1.c].adj[d1.p];  // far end of side1's edge
    bool over_at_c1 = d1.p % 2 == 1;
    bool over_at_c2 = r1.p % 2 == 1;
    ci.alternating = over_at_c1 != over_at_c2;
    out.push_back(ci);
  }
  return out;
}

namespace {

// follow the strand through crossings marked for removal
Dart resolve_outward(const std::vector<KnotDiagram::Node>& nodes, Dart d,
                     const std::set<int>& removed, bool* internal) {
  int guard = 0;
  while (removed.count(d.c)) {
    d = nodes[d.c].adj[(d.p + 2) % 4];
    if (++guard > 16) {
      *internal = true;
      return d;
    }
  }
  return d;
}

KnotDiagram rebuild_without(const std::vector<KnotDiagram::Node>& nodes,
                            const std::set<int>& removed,
                            const std::vector<std::pair<Dart, Dart>>& splices) {
  std::vector<KnotDiagram::Node> work = nodes;
  for (const auto& [x, y] : splices) {
    work[x.c].adj[x.p] = y;
    work[y.c].adj[y.p] = x;
  }
  std::vector<int> remap(nodes.size(), -1);
  std::vector<KnotDiagram::Node> compact;
  for (std::size_t c = 0; c < work.size(); ++c) {
    if (removed.count(static_cast<int>(c))) continue;
    remap[c] = static_cast<int>(compact.size());
    compact.push_back(work[c]);
  }
  for (auto& node : compact)
    for (auto& d : node.adj) d.c = remap[d.c];
  return KnotDiagram(std::move(compact));
}

}  // namespace

KnotDiagram eliminate_crescent(const KnotDiagram& diagram, const CrescentInfo& crescent) {
  if (crescent.alternating)
    throw NotR2Eligible("crescent strands alternate; not a Reidemeister II pair");
  const auto& nodes = diagram.nodes();
  std::set<int> removed{crescent.c1, crescent.c2};

  Dart d1 = crescent.side1, d2 = crescent.side2;
  Dart r1 = nodes[d1.c].adj[d1.p];
  Dart r2 = nodes[d2.c].adj[d2.p];

  std::vector<std::pair<Dart, Dart>> splices;
  auto splice_strand = [&](Dart end_a, Dart end_b) {
    bool internal = false;
    Dart x = resolve_outward(nodes, nodes[end_a.c].adj[(end_a.p + 2) % 4], removed, &internal);
    Dart y = resolve_outward(nodes, nodes[end_b.c].adj[(end_b.p + 2) % 4], removed, &internal);
    if (internal || removed.count(x.c) || removed.count(y.c)) return;  // vanishing loop
    splices.push_back({x, y});
  };
  splice_strand(d1, r1);  // strand carrying side1's edge
  splice_strand(d2, r2);  // strand carrying side2's edge

  return rebuild_without(nodes, removed, splices);
}

std::vector<int> find_loops(const KnotDiagram& diagram) {
  std::vector<int> out;
  std::set<int> seen;
  for (const auto& f : diagram.faces()) {
    if (f.darts.size() != 1) continue;
    if (seen.insert(f.darts[0].c).second) out.push_back(f.darts[0].c);
  }
  return out;
}

KnotDiagram eliminate_loop(const KnotDiagram& diagram, int crossing) {
  const auto& nodes = diagram.nodes();
  // self-edge ports
  int p = -1, q = -1;
  for (int s = 0; s < 4; ++s)
    if (nodes[crossing].adj[s].c == crossing) {
      if (p < 0)
        p = s;
      else
        q = s;
    }
  if (p < 0 || q < 0) throw NotR2Eligible("crossing has no curl to remove");
  std::set<int> removed{crossing};
  std::vector<int> outside;
  for (int s = 0; s < 4; ++s)
    if (s != p && s != q) outside.push_back(s);

  std::vector<std::pair<Dart, Dart>> splices;
  bool internal = false;
  Dart x = resolve_outward(nodes, nodes[crossing].adj[outside[0]], removed, &internal);
  Dart y = resolve_outward(nodes, nodes[crossing].adj[outside[1]], removed, &internal);
  if (!internal && !removed.count(x.c) && !removed.count(y.c)) splices.push_back({x, y});
  return rebuild_without(nodes, removed, splices);
}

KnotDiagram simplify(const KnotDiagram& diagram) {
  KnotDiagram d = diagram;
  for (;;) {
    bool changed = false;
    for (const auto& c : find_crescents(d)) {
      if (!c.alternating) {
        d = eliminate_crescent(d, c);
        changed = true;
        break;
      }
    }
    if (changed) continue;
    auto loops = find_loops(d);
    if (!loops.empty()) {
      d = eliminate_loop(d, loops.front());
      changed = true;
    }
    if (!changed) return d;
  }
}

std::string render_svg(const PlanarProjection& proj, const KnotDiagram* diagram,
                       const std::optional<Vec2>& quad_point) {
  const std::size_t n = proj.points.size();
  Vec2 lo{1e300, 1e300}, hi{-1e300, -1e300};
  for (const auto& p : proj.points) {
    lo = {std::min(lo.x, p.x), std::min(lo.y, p.y)};
    hi = {std::max(hi.x, p.x), std::max(hi.y, p.y)};
  }
  const double span = std::max(hi.x - lo.x, hi.y - lo.y);
  const double margin = 50;
  const double s = span > 0 ? (1000 - 2 * margin) / span : 1.0;
  auto tx = [&](const Vec2& p) {
    return Vec2{margin + (p.x - lo.x) * s, margin + (hi.y - p.y) * s};
  };

  // gap intervals on under edges, 2% of the bounding box around each crossing
  const double gap = 0.02 * proj.scale;
  std::vector<std::vector<std::pair<double, double>>> cuts(n);
  if (diagram) {
    for (const auto& node : diagram->nodes()) {
      if (!node.has_geometry) continue;
      const Crossing& c = node.geom;
      double len = (proj.points[(c.under_edge + 1) % n] - proj.points[c.under_edge]).norm();
      double half = 0.5 * gap / len;
      cuts[c.under_edge].push_back(
          {std::max(0.0, c.under_t - half), std::min(1.0, c.under_t + half)});
    }
    for (auto& v : cuts) std::sort(v.begin(), v.end());
  }

  // walk the cyclic polyline, breaking at cuts
  struct Piece {
    std::vector<Vec2> pts;
  };
  std::vector<Piece> pieces;
  Piece cur;
  bool any_cut = false;
  for (std::size_t e = 0; e < n; ++e) {
    Vec2 a = proj.points[e], b = proj.points[(e + 1) % n];
    if (cur.pts.empty()) cur.pts.push_back(a);
    double t0 = 0;
    for (const auto& [c0, c1] : cuts[e]) {
      any_cut = true;
      if (c0 > t0) cur.pts.push_back({a.x + (b.x - a.x) * c0, a.y + (b.y - a.y) * c0});
      pieces.push_back(std::move(cur));
      cur = Piece{};
      t0 = c1;
      cur.pts.push_back({a.x + (b.x - a.x) * c1, a.y + (b.y - a.y) * c1});
    }
    cur.pts.push_back(b);
  }
  if (!cur.pts.empty()) {
    if (any_cut && !pieces.empty()) {
      // join the trailing run onto the first piece to close the cycle
      auto& first = pieces.front();
      cur.pts.insert(cur.pts.end(), first.pts.begin(), first.pts.end());
      first.pts = std::move(cur.pts);
    } else {
      pieces.push_back(std::move(cur));
    }
  }

  char buf[64];
  auto fmt = [&](double x) {
    std::snprintf(buf, sizeof buf, "%.4f", x);
    return std::string(buf);
  };

  std::ostringstream os;
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"1000\" "
        "height=\"1000\" viewBox=\"0 0 1000 1000\">\n";
  os << "  <desc>knotforge projection; source units per canvas unit: " << fmt(1.0 / s)
     << "</desc>\n";
  for (const auto& piece : pieces) {
    os << "  <path fill=\"none\" stroke=\"black\" stroke-width=\"2\" d=\"";
    for (std::size_t i = 0; i < piece.pts.size(); ++i) {
      Vec2 p = tx(piece.pts[i]);
      os << (i == 0 ? "M" : " L") << fmt(p.x) << " " << fmt(p.y);
    }
    if (!any_cut) os << " Z";
    os << "\"/>\n";
  }
  if (quad_point) {
    Vec2 p = tx(*quad_point);
    os << "  <circle cx=\"" << fmt(p.x) << "\" cy=\"" << fmt(p.y)
       << "\" r=\"6\" fill=\"none\" stroke=\"red\" stroke-width=\"2\"/>\n";
  }
  os << "</svg>\n";
  return os.str();
}

}  // namespace knotforge::diagram
