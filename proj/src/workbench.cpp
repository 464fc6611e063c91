#include "knotforge/workbench.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "json.hpp"

namespace knotforge::workbench {

namespace {

// ---- pattern catalog ----

Matching normalize_matching(Matching m) {
  for (auto& [a, b] : m)
    if (a > b) std::swap(a, b);
  std::sort(m.begin(), m.end());
  return m;
}

Matching apply_transform(const Matching& m, int rot, bool reflect) {
  Matching out;
  for (int i = 0; i < 4; ++i) {
    auto [a, b] = m[i];
    if (reflect) {
      a = (8 - a) % 8;
      b = (8 - b) % 8;
    }
    out[i] = {(a + rot) % 8, (b + rot) % 8};
  }
  return normalize_matching(out);
}

int interleave_crossings(const Matching& m) {
  int count = 0;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      auto [a, b] = m[i];
      auto [c, d] = m[j];
      bool c_in = a < c && c < b;
      bool d_in = a < d && d < b;
      if (c_in != d_in) ++count;
    }
  return count;
}

std::vector<std::pair<int, int>> crossing_pairs(const Matching& m) {
  std::vector<std::pair<int, int>> out;
  for (int i = 0; i < 4; ++i)
    for (int j = i + 1; j < 4; ++j) {
      auto [a, b] = m[i];
      auto [c, d] = m[j];
      bool c_in = a < c && c < b;
      bool d_in = a < d && d < b;
      if (c_in != d_in) out.push_back({i, j});
    }
  return out;
}

std::vector<std::array<int, 4>> height_classes_impl(const Matching& m) {
  auto pairs = crossing_pairs(m);
  std::vector<std::array<int, 4>> reps;
  std::set<std::vector<bool>> seen;
  std::array<int, 4> perm = {0, 1, 2, 3};
  std::vector<std::array<int, 4>> all;
  do {
    all.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  std::sort(all.begin(), all.end());
  for (const auto& ranks : all) {
    std::vector<bool> mask;
    mask.reserve(pairs.size());
    for (auto [i, j] : pairs) mask.push_back(ranks[i] > ranks[j]);
    if (seen.insert(mask).second) reps.push_back(ranks);
  }
  return reps;
}

std::vector<PatternClass> build_catalog() {
  // all 105 perfect matchings of 8 points
  std::vector<Matching> matchings;
  std::vector<int> points = {0, 1, 2, 3, 4, 5, 6, 7};
  struct Rec {
    std::vector<int> rest;
    std::vector<std::pair<int, int>> pairs;
  };
  std::vector<Rec> stack{{points, {}}};
  while (!stack.empty()) {
    Rec r = stack.back();
    stack.pop_back();
    if (r.rest.empty()) {
      Matching m;
      std::copy(r.pairs.begin(), r.pairs.end(), m.begin());
      matchings.push_back(normalize_matching(m));
      continue;
    }
    int a = r.rest.front();
    for (std::size_t k = 1; k < r.rest.size(); ++k) {
      Rec next = r;
      next.rest.erase(next.rest.begin());
      next.rest.erase(next.rest.begin() + (k - 1));
      next.pairs.push_back({a, r.rest[k]});
      stack.push_back(std::move(next));
    }
  }
  std::sort(matchings.begin(), matchings.end());
  matchings.erase(std::unique(matchings.begin(), matchings.end()), matchings.end());
  if (matchings.size() != 105)
    throw std::logic_error("expected 105 matchings of 8 boundary points");

  std::map<Matching, std::vector<Matching>> orbits;  // canonical -> members
  for (const auto& m : matchings) {
    Matching canon = m;
    for (int rot = 0; rot < 8; ++rot)
      for (int refl = 0; refl < 2; ++refl) canon = std::min(canon, apply_transform(m, rot, refl));
    orbits[canon].push_back(m);
  }
  if (orbits.size() != 18)
    throw std::logic_error("expected 18 dihedral classes of quadruple-point patterns");

  std::vector<PatternClass> classes;
  for (auto& [canon, members] : orbits) {
    PatternClass pc;
    pc.canonical = canon;
    pc.crossings = interleave_crossings(canon);
    std::sort(members.begin(), members.end());
    pc.placements = members;
    pc.height_classes = height_classes_impl(canon);
    classes.push_back(std::move(pc));
  }
  std::sort(classes.begin(), classes.end(), [](const PatternClass& a, const PatternClass& b) {
    if (a.crossings != b.crossings) return a.crossings < b.crossings;
    return a.canonical < b.canonical;
  });
  for (std::size_t i = 0; i < classes.size(); ++i) classes[i].id = static_cast<int>(i) + 1;
  return classes;
}

}  // namespace

const std::vector<PatternClass>& pattern_catalog() {
  static const std::vector<PatternClass> catalog = build_catalog();
  return catalog;
}

std::vector<std::array<int, 4>> height_classes_for(const Matching& placement) {
  return height_classes_impl(normalize_matching(placement));
}

int TemplateSpec::twist_total() const {
  int s = 0;
  for (int t : twist_counts) s += t;
  return s;
}

void TemplateSpec::validate(const CrossingBudget& budget) const {
  std::size_t boxes = shape == Shape::kA ? 1 : 2;
  if (twist_counts.size() != boxes)
    throw BudgetExceeded("twist_counts must hold one entry per twist box");
  for (int t : twist_counts) {
    if (t < 0) throw BudgetExceeded("negative twist count");
    if (t > budget.per_pair_max)
      throw BudgetExceeded("twist count exceeds the per-pair crossing cap");
  }
  int cap = shape == Shape::kA ? budget.shape_a_max : budget.shape_b_max;
  if (twist_total() > cap) throw BudgetExceeded("twist total exceeds the shape cap");
  if (pattern < 1 || pattern > static_cast<int>(pattern_catalog().size()))
    throw BudgetExceeded("pattern id out of range");
  if (pattern_catalog()[pattern - 1].crossings > budget.pattern_max)
    throw BudgetExceeded("pattern exceeds the crossing cap");
  std::array<int, 4> sorted = height_order;
  std::sort(sorted.begin(), sorted.end());
  if (sorted != std::array<int, 4>{0, 1, 2, 3})
    throw BudgetExceeded("height_order must be a permutation of 0..3");
}

std::vector<TemplateSpec> enumerate_templates(const CrossingBudget& budget) {
  std::vector<TemplateSpec> out;
  auto emit_for_shape = [&](Shape shape, const std::vector<std::vector<int>>& twist_choices) {
    for (const auto& twists : twist_choices) {
      for (const auto& pc : pattern_catalog()) {
        if (pc.crossings > budget.pattern_max) continue;
        for (const auto& ranks : pc.height_classes) {
          TemplateSpec t;
          t.shape = shape;
          t.twist_counts = twists;
          t.pattern = pc.id;
          t.height_order = ranks;
          t.validate(budget);
          out.push_back(std::move(t));
        }
      }
    }
  };
  std::vector<std::vector<int>> a_twists, b_twists;
  for (int t = 0; t <= std::min(budget.per_pair_max, budget.shape_a_max); ++t)
    a_twists.push_back({t});
  for (int t1 = 0; t1 <= budget.per_pair_max; ++t1)
    for (int t2 = 0; t2 <= budget.per_pair_max; ++t2)
      if (t1 + t2 <= budget.shape_b_max) b_twists.push_back({t1, t2});
  emit_for_shape(Shape::kA, a_twists);
  emit_for_shape(Shape::kB, b_twists);
  return out;
}

// ---- geometric layouts of the two base shapes ----

namespace {

constexpr double kDiskRadius = 20.0;
constexpr double kShapeScale = 3.0;

struct Piece {
  std::vector<Vec2> pts;
  int tag = -1;  // >= 0: strand arc id; -1: assigned later
};

std::vector<Vec2> sample_bezier(Vec2 p0, Vec2 c, Vec2 p1, int samples) {
  std::vector<Vec2> out;
  for (int i = 0; i <= samples; ++i) {
    double t = static_cast<double>(i) / samples;
    double u = 1 - t;
    out.push_back(p0 * (u * u) + c * (2 * u * t) + p1 * (t * t));
  }
  return out;
}

void append_path(std::vector<Vec2>& dst, const std::vector<Vec2>& src) {
  for (const auto& p : src) {
    if (!dst.empty() && (dst.back() - p).norm() < 1e-12) continue;
    dst.push_back(p);
  }
}

// clip the polyline where it first leaves the disk; returns the clipped tail
std::vector<Vec2> trim_head_at_disk(const std::vector<Vec2>& pts) {
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    double r0 = pts[i].norm(), r1 = pts[i + 1].norm();
    if (r0 < kDiskRadius && r1 >= kDiskRadius) {
      // solve |a + t(b-a)| = R on the segment
      Vec2 a = pts[i], d = pts[i + 1] - pts[i];
      double qa = d.dot(d), qb = 2 * a.dot(d), qc = a.dot(a) - kDiskRadius * kDiskRadius;
      double disc = std::max(0.0, qb * qb - 4 * qa * qc);
      double t = (-qb + std::sqrt(disc)) / (2 * qa);
      std::vector<Vec2> out;
      out.push_back(a + d * t);
      out.insert(out.end(), pts.begin() + i + 1, pts.end());
      return out;
    }
  }
  throw FixtureError("shape path never leaves the quadruple-point disk");
}

std::vector<Vec2> trim_tail_at_disk(std::vector<Vec2> pts) {
  std::reverse(pts.begin(), pts.end());
  pts = trim_head_at_disk(pts);
  std::reverse(pts.begin(), pts.end());
  return pts;
}

struct BoxSpec {
  double x0, x1, y_top, y_bottom;
  bool contains(const Vec2& p) const {
    return p.x > x0 - 1 && p.x < x1 + 1 && p.y > y_bottom - 1 && p.y < y_top + 1;
  }
};

// the two interior polylines of a twist box with n half-twists; first starts
// at the left-top port
std::pair<std::vector<Vec2>, std::vector<Vec2>> box_strands(const BoxSpec& box, int n) {
  std::vector<Vec2> top_start, bottom_start;
  if (n == 0) {
    top_start = {{box.x0, box.y_top}, {box.x1, box.y_top}};
    bottom_start = {{box.x0, box.y_bottom}, {box.x1, box.y_bottom}};
    return {top_start, bottom_start};
  }
  double w = (box.x1 - box.x0) / n;
  for (int k = 0; k <= n; ++k) {
    double x = box.x0 + w * k;
    bool top_first = k % 2 == 0;
    top_start.push_back({x, top_first ? box.y_top : box.y_bottom});
    bottom_start.push_back({x, top_first ? box.y_bottom : box.y_top});
  }
  return {top_start, bottom_start};
}

struct ShapeLayout {
  std::vector<Piece> arcs;               // outside arcs, boundary slot to boundary slot
  std::array<Vec2, 8> slot_points;       // boundary points in ccw slot order
  std::array<int, 8> outside_partner;    // slot -> slot through the outside
  std::array<int, 8> arc_of_slot;        // slot -> arc index
  std::vector<BoxSpec> boxes;
};

using Seg = std::array<Vec2, 3>;  // quadratic bezier control triple

std::vector<Vec2> chain(const std::vector<Seg>& segs, int samples) {
  std::vector<Vec2> out;
  for (const auto& s : segs) append_path(out, sample_bezier(s[0], s[1], s[2], samples));
  return out;
}

Vec2 sc(double x, double y) { return {x * kShapeScale, y * kShapeScale}; }

Seg seg(double x0, double y0, double cx, double cy, double x1, double y1) {
  return {sc(x0, y0), sc(cx, cy), sc(x1, y1)};
}

// Assemble raw pieces (approach chains trimmed at the disk, box interiors,
// bridge) into boundary-to-boundary arcs by endpoint matching.
ShapeLayout assemble_layout(std::vector<std::vector<Vec2>> raw_pieces,
                            std::vector<BoxSpec> boxes) {
  // endpoints on the disk boundary are arc ends; others must pair up
  auto on_disk = [](const Vec2& p) { return std::abs(p.norm() - kDiskRadius) < 1e-6; };

  std::vector<bool> used(raw_pieces.size(), false);
  std::vector<Piece> arcs;
  std::vector<Vec2> arc_start, arc_end;

  auto find_continuation = [&](const Vec2& at, std::size_t except) -> int {
    for (std::size_t i = 0; i < raw_pieces.size(); ++i) {
      if (used[i] || i == except) continue;
      if ((raw_pieces[i].front() - at).norm() < 1e-6) return static_cast<int>(i);
      if ((raw_pieces[i].back() - at).norm() < 1e-6) {
        std::reverse(raw_pieces[i].begin(), raw_pieces[i].end());
        return static_cast<int>(i);
      }
    }
    return -1;
  };

  for (std::size_t start = 0; start < raw_pieces.size(); ++start) {
    if (used[start]) continue;
    bool head_on_disk = on_disk(raw_pieces[start].front());
    bool tail_on_disk = on_disk(raw_pieces[start].back());
    if (!head_on_disk && !tail_on_disk) continue;
    if (!head_on_disk) std::reverse(raw_pieces[start].begin(), raw_pieces[start].end());

    Piece arc;
    arc.tag = static_cast<int>(arcs.size());
    used[start] = true;
    append_path(arc.pts, raw_pieces[start]);
    std::size_t cur = start;
    while (!on_disk(arc.pts.back())) {
      int nxt = find_continuation(arc.pts.back(), cur);
      if (nxt < 0) throw FixtureError("shape layout piece has a dangling endpoint");
      used[nxt] = true;
      append_path(arc.pts, raw_pieces[nxt]);
      cur = nxt;
    }
    arc_start.push_back(arc.pts.front());
    arc_end.push_back(arc.pts.back());
    arcs.push_back(std::move(arc));
  }
  for (std::size_t i = 0; i < raw_pieces.size(); ++i)
    if (!used[i]) throw FixtureError("shape layout piece unused during assembly");
  if (arcs.size() != 4) throw FixtureError("shape layout must yield four outside arcs");

  // slot order by angle
  struct EndRef {
    double angle;
    int arc;
    bool is_start;
  };
  std::vector<EndRef> ends;
  for (int a = 0; a < 4; ++a) {
    ends.push_back({std::atan2(arc_start[a].y, arc_start[a].x), a, true});
    ends.push_back({std::atan2(arc_end[a].y, arc_end[a].x), a, false});
  }
  std::sort(ends.begin(), ends.end(),
            [](const EndRef& x, const EndRef& y) { return x.angle < y.angle; });

  ShapeLayout layout;
  layout.arcs = std::move(arcs);
  layout.boxes = std::move(boxes);
  std::array<int, 4> slot_of_start{}, slot_of_end{};
  for (int s = 0; s < 8; ++s) {
    const EndRef& e = ends[s];
    layout.slot_points[s] = e.is_start ? arc_start[e.arc] : arc_end[e.arc];
    layout.arc_of_slot[s] = e.arc;
    (e.is_start ? slot_of_start : slot_of_end)[e.arc] = s;
  }
  for (int a = 0; a < 4; ++a) {
    layout.outside_partner[slot_of_start[a]] = slot_of_end[a];
    layout.outside_partner[slot_of_end[a]] = slot_of_start[a];
  }
  return layout;
}

ShapeLayout build_layout(Shape shape, const std::vector<int>& twists) {
  std::vector<std::vector<Vec2>> pieces;
  std::vector<BoxSpec> boxes;
  const int bs = 8;  // samples per bezier segment

  if (shape == Shape::kA) {
    BoxSpec box{-15 * kShapeScale, 15 * kShapeScale, 60 * kShapeScale, 52.5 * kShapeScale};
    boxes.push_back(box);
    // approaches to the box, trimmed at the disk
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, 37.5, 15, 37.5, 37.5), seg(37.5, 37.5, 37.5, 60, 15, 60)}, bs)));
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, -37.5, 15, -37.5, 37.5), seg(-37.5, 37.5, -37.5, 60, -15, 60)}, bs)));
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, 30, 22.5, 30, 37.5), seg(30, 37.5, 30, 52.5, 15, 52.5)}, bs)));
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, -30, 22.5, -30, 37.5), seg(-30, 37.5, -30, 52.5, -15, 52.5)}, bs)));
    auto [top, bottom] = box_strands(box, twists[0]);
    pieces.push_back(top);
    pieces.push_back(bottom);
    // teardrops, trimmed at both ends
    pieces.push_back(trim_tail_at_disk(trim_head_at_disk(chain(
        {seg(0, 0, -18.75, -7.5, -16.875, -9.375), seg(-16.875, -9.375, -15, -11.25, 0, 0)},
        bs))));
    pieces.push_back(trim_tail_at_disk(trim_head_at_disk(chain(
        {seg(0, 0, 15, -11.25, 16.875, -9.375), seg(16.875, -9.375, 18.75, -7.5, 0, 0)}, bs))));
  } else {
    BoxSpec box_l{-45 * kShapeScale, -15 * kShapeScale, 60 * kShapeScale, 52.5 * kShapeScale};
    BoxSpec box_r{15 * kShapeScale, 45 * kShapeScale, 60 * kShapeScale, 52.5 * kShapeScale};
    boxes.push_back(box_l);
    boxes.push_back(box_r);
    // outer loop approaches
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, 67.5, 7.5, 67.5, 37.5), seg(67.5, 37.5, 67.5, 60, 45, 60)}, bs)));
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, -67.5, 7.5, -67.5, 37.5), seg(-67.5, 37.5, -67.5, 60, -45, 60)}, bs)));
    // bridge between the boxes
    pieces.push_back({sc(-15, 60), sc(15, 60)});
    // mid loops
    pieces.push_back(trim_head_at_disk(chain({seg(0, 0, -7.5, 52.5, -15, 52.5)}, bs)));
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, -60, 22.5, -60, 37.5), seg(-60, 37.5, -60, 52.5, -45, 52.5)}, bs)));
    pieces.push_back(trim_head_at_disk(chain({seg(0, 0, 7.5, 52.5, 15, 52.5)}, bs)));
    pieces.push_back(trim_head_at_disk(
        chain({seg(0, 0, 60, 22.5, 60, 37.5), seg(60, 37.5, 60, 52.5, 45, 52.5)}, bs)));
    auto [l_top, l_bottom] = box_strands(box_l, twists[0]);
    auto [r_top, r_bottom] = box_strands(box_r, twists[1]);
    pieces.push_back(l_top);
    pieces.push_back(l_bottom);
    pieces.push_back(r_top);
    pieces.push_back(r_bottom);
    // teardrop
    pieces.push_back(trim_tail_at_disk(trim_head_at_disk(
        chain({seg(0, 0, 7.5, -15, 0, -15), seg(0, -15, -7.5, -15, 0, 0)}, bs))));
  }
  return assemble_layout(std::move(pieces), std::move(boxes));
}

// ---- closed template curve and its crossings ----

struct TaggedPolygon {
  std::vector<Vec2> pts;          // cyclic
  std::vector<int> edge_tag;      // per edge: >=0 chord index, -1 outside arc
  std::vector<int> edge_chord;    // per edge: chord id or -1
};

int trace_components(const std::array<int, 8>& outside, const Matching& inside) {
  std::array<int, 8> in_partner{};
  for (const auto& [a, b] : inside) {
    in_partner[a] = b;
    in_partner[b] = a;
  }
  std::array<bool, 8> seen{};
  int comps = 0;
  for (int s = 0; s < 8; ++s) {
    if (seen[s]) continue;
    ++comps;
    int cur = s;
    do {
      seen[cur] = true;
      cur = in_partner[cur];
      seen[cur] = true;
      cur = outside[cur];
    } while (cur != s);
  }
  return comps;
}

std::vector<Vec2> chord_polyline(const ShapeLayout& layout, int u, int v) {
  Vec2 pu = layout.slot_points[u], pv = layout.slot_points[v];
  Vec2 d = pv - pu;
  Vec2 perp = Vec2{-d.y, d.x} * (1.0 / d.norm());
  double offs = 0.7 * (static_cast<double>((5 * u + 3 * v + 1) % 8) - 3.5);
  Vec2 ctrl = (pu + pv) * 0.25 + perp * offs;
  std::vector<Vec2> out;
  const int samples = 12;
  for (int i = 0; i <= samples; ++i) {
    double t = static_cast<double>(i) / samples;
    double w = 1 - t;
    out.push_back(pu * (w * w) + ctrl * (2 * w * t) + pv * (t * t));
  }
  return out;
}

TaggedPolygon build_template_curve(const ShapeLayout& layout, const Matching& inside) {
  std::array<int, 8> in_partner{};
  std::map<std::pair<int, int>, int> chord_id;
  for (int i = 0; i < 4; ++i) {
    auto [a, b] = inside[i];
    in_partner[a] = b;
    in_partner[b] = a;
    chord_id[{a, b}] = i;
  }

  TaggedPolygon poly;
  auto push = [&](const std::vector<Vec2>& pts, int chord) {
    for (const auto& p : pts) {
      if (!poly.pts.empty() && (poly.pts.back() - p).norm() < 1e-9) continue;
      if (!poly.pts.empty()) {
        poly.edge_tag.push_back(chord >= 0 ? 1 : 0);
        poly.edge_chord.push_back(chord);
      }
      poly.pts.push_back(p);
    }
  };

  int slot = 0;
  do {
    int partner = in_partner[slot];
    auto key = std::minmax(slot, partner);
    std::vector<Vec2> chord = chord_polyline(layout, slot, partner);
    push(chord, chord_id[{key.first, key.second}]);
    int arc = layout.arc_of_slot[partner];
    std::vector<Vec2> arc_pts = layout.arcs[arc].pts;
    if ((arc_pts.front() - layout.slot_points[partner]).norm() > 1e-6)
      std::reverse(arc_pts.begin(), arc_pts.end());
    push(arc_pts, -1);
    slot = layout.outside_partner[partner];
  } while (slot != 0);

  // close the cycle; with the duplicated return point dropped, its incoming
  // edge becomes the cyclic closing edge
  if ((poly.pts.back() - poly.pts.front()).norm() < 1e-9) {
    poly.pts.pop_back();
  } else {
    poly.edge_tag.push_back(0);
    poly.edge_chord.push_back(-1);
  }
  return poly;
}

struct ProtoCrossing {
  Vec2 pos;
  int edge_a, edge_b;      // edge_a < edge_b
  double t_a, t_b;
  Vec2 dir_a, dir_b;
  bool is_pattern = false;
  int arc_a = -1, arc_b = -1;  // chords (pattern crossing)
  int twist_index = -1;        // global twist bit (twist crossing)
};

struct ProtoDiagram {
  TaggedPolygon poly;
  std::vector<ProtoCrossing> crossings;
  int pattern_crossings = 0;
  int twist_crossings = 0;
};

ProtoDiagram extract_proto(const ShapeLayout& layout, const TaggedPolygon& poly,
                           const std::vector<int>& twists) {
  ProtoDiagram proto;
  proto.poly = poly;
  const std::size_t n = poly.pts.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 2; j < n; ++j) {
      if (i == 0 && j == n - 1) continue;
      Vec2 p = poly.pts[i], r = poly.pts[(i + 1) % n] - p;
      Vec2 q = poly.pts[j], s = poly.pts[(j + 1) % n] - q;
      double denom = r.cross(s);
      if (std::abs(denom) < 1e-12) continue;
      Vec2 qp = q - p;
      double t = qp.cross(s) / denom;
      double u = qp.cross(r) / denom;
      if (t <= 0 || t >= 1 || u <= 0 || u >= 1) continue;
      if (t < 0.02 || t > 0.98 || u < 0.02 || u > 0.98)
        throw FixtureError("template layout crossing too close to a vertex");
      double ang = std::atan2(std::abs(denom), r.dot(s));
      if (std::min(ang, kTau / 2 - ang) < 0.05)
        throw FixtureError("template layout crossing angle too small");
      ProtoCrossing c;
      c.pos = p + r * t;
      c.edge_a = static_cast<int>(i);
      c.edge_b = static_cast<int>(j);
      c.t_a = t;
      c.t_b = u;
      c.dir_a = r;
      c.dir_b = s;
      proto.crossings.push_back(c);
    }
  }
  for (std::size_t a = 0; a < proto.crossings.size(); ++a)
    for (std::size_t b = a + 1; b < proto.crossings.size(); ++b)
      if ((proto.crossings[a].pos - proto.crossings[b].pos).norm() < 0.5)
        throw FixtureError("template layout crossings too close together");

  // classify
  struct TwistSlot {
    int box;
    double x;
    std::size_t index;
  };
  std::vector<TwistSlot> twist_slots;
  for (std::size_t k = 0; k < proto.crossings.size(); ++k) {
    ProtoCrossing& c = proto.crossings[k];
    double r = c.pos.norm();
    if (r < kDiskRadius * 0.98) {
      c.is_pattern = true;
      int ca = poly.edge_chord[c.edge_a], cb = poly.edge_chord[c.edge_b];
      if (ca < 0 || cb < 0 || ca == cb)
        throw FixtureError("pattern-region crossing not between two distinct chords");
      c.arc_a = ca;
      c.arc_b = cb;
      ++proto.pattern_crossings;
      continue;
    }
    if (r < kDiskRadius * 1.02)
      throw FixtureError("template layout crossing on the disk boundary");
    bool in_box = false;
    for (std::size_t bx = 0; bx < layout.boxes.size(); ++bx) {
      if (layout.boxes[bx].contains(c.pos)) {
        twist_slots.push_back({static_cast<int>(bx), c.pos.x, k});
        in_box = true;
        break;
      }
    }
    if (!in_box) throw FixtureError("template layout has an unexpected outside crossing");
    ++proto.twist_crossings;
  }
  // twist bit order: box 0 first, then left to right inside each box
  std::sort(twist_slots.begin(), twist_slots.end(), [](const TwistSlot& a, const TwistSlot& b) {
    if (a.box != b.box) return a.box < b.box;
    return a.x < b.x;
  });
  for (std::size_t bit = 0; bit < twist_slots.size(); ++bit)
    proto.crossings[twist_slots[bit].index].twist_index = static_cast<int>(bit);

  int expected_twists = 0;
  for (int t : twists) expected_twists += t;
  if (proto.twist_crossings != expected_twists)
    throw FixtureError("twist crossing count does not match the template");
  return proto;
}

// over/under per crossing -> diagram nodes, wired by walking the curve
diagram::KnotDiagram assemble_diagram(const ProtoDiagram& proto,
                                      const std::vector<bool>& a_over) {
  struct Passage {
    int edge;
    double t;
    int crossing;
    bool over;
  };
  const std::size_t nc = proto.crossings.size();
  std::vector<diagram::KnotDiagram::Node> nodes(nc);
  std::vector<Passage> passages;
  passages.reserve(2 * nc);
  for (std::size_t k = 0; k < nc; ++k) {
    const ProtoCrossing& c = proto.crossings[k];
    bool a_is_over = a_over[k];
    Vec2 over_dir = a_is_over ? c.dir_a : c.dir_b;
    Vec2 under_dir = a_is_over ? c.dir_b : c.dir_a;
    nodes[k].sign = over_dir.cross(under_dir) > 0 ? +1 : -1;
    passages.push_back({a_is_over ? c.edge_b : c.edge_a, a_is_over ? c.t_b : c.t_a,
                        static_cast<int>(k), false});
    passages.push_back({a_is_over ? c.edge_a : c.edge_b, a_is_over ? c.t_a : c.t_b,
                        static_cast<int>(k), true});
  }
  std::sort(passages.begin(), passages.end(), [](const Passage& a, const Passage& b) {
    if (a.edge != b.edge) return a.edge < b.edge;
    return a.t < b.t;
  });
  auto entry_port = [&](const Passage& p) {
    if (!p.over) return diagram::KnotDiagram::kUnderIn;
    return nodes[p.crossing].sign > 0 ? 3 : 1;
  };
  auto exit_port = [&](const Passage& p) {
    if (!p.over) return diagram::KnotDiagram::kUnderOut;
    return nodes[p.crossing].sign > 0 ? 1 : 3;
  };
  for (std::size_t k = 0; k < passages.size(); ++k) {
    const Passage& cur = passages[k];
    const Passage& nxt = passages[(k + 1) % passages.size()];
    nodes[cur.crossing].adj[exit_port(cur)] = {nxt.crossing, entry_port(nxt)};
    nodes[nxt.crossing].adj[entry_port(nxt)] = {cur.crossing, exit_port(cur)};
  }
  return diagram::KnotDiagram(std::move(nodes));
}

std::vector<bool> over_flags(const ProtoDiagram& proto, const std::array<int, 4>& ranks,
                             const std::vector<int>& sign_bits) {
  std::vector<bool> a_over(proto.crossings.size());
  for (std::size_t k = 0; k < proto.crossings.size(); ++k) {
    const ProtoCrossing& c = proto.crossings[k];
    if (c.is_pattern) {
      a_over[k] = ranks[c.arc_a] > ranks[c.arc_b];
    } else {
      // bit 1: the negative-slope diagonal of the twist passes over
      bool a_descending = c.dir_a.y * c.dir_a.x < 0;
      bool over_descending = sign_bits[c.twist_index] != 0;
      a_over[k] = a_descending == over_descending;
    }
  }
  return a_over;
}

const std::array<int, 8>& outside_matching(const ShapeLayout& layout) {
  return layout.outside_partner;
}

}  // namespace

Realization realize_diagram(const TemplateSpec& tpl, const std::vector<int>& crossing_signs) {
  CrossingBudget budget;
  tpl.validate(budget);
  if (static_cast<int>(crossing_signs.size()) != tpl.twist_total())
    throw BudgetExceeded("need one over/under bit per twist crossing");

  const PatternClass& pc = pattern_catalog()[tpl.pattern - 1];
  ShapeLayout layout = build_layout(tpl.shape, tpl.twist_counts);

  const Matching* chosen = nullptr;
  for (const auto& placement : pc.placements) {
    if (trace_components(outside_matching(layout), placement) == 1) {
      chosen = &placement;
      break;
    }
  }
  if (!chosen) throw NotAKnot("every placement of the template traces multiple components");

  TaggedPolygon curve = build_template_curve(layout, *chosen);
  ProtoDiagram proto = extract_proto(layout, curve, tpl.twist_counts);
  if (proto.pattern_crossings != pc.crossings)
    throw FixtureError("pattern crossing count does not match the catalog");

  auto flags = over_flags(proto, tpl.height_order, crossing_signs);
  Realization out{assemble_diagram(proto, flags), *chosen, proto.pattern_crossings,
                  proto.twist_crossings};
  return out;
}

Classification reduce_and_classify(const diagram::KnotDiagram& d,
                                   const invariants::KnotTable& table,
                                   const CrossingBudget& budget) {
  Classification out;
  out.reduced = diagram::simplify(d);
  out.crossing_count = out.reduced.crossing_count();
  if (out.crossing_count > budget.reduced_total_max)
    throw BudgetExceeded("reduction left more than " +
                         std::to_string(budget.reduced_total_max) + " crossings");
  auto matches = invariants::identify(out.reduced, table);
  for (const auto& e : matches) {
    out.raw_matches.push_back(e.name);
    bool torus_above_three = e.torus && std::min(2 * e.torus->first, e.torus->second) > 3;
    if (e.two_bridge && e.crossing_number <= 9 && !torus_above_three)
      out.candidates.push_back(e);
  }
  return out;
}

CensusReport census(const CrossingBudget& budget, const invariants::KnotTable& table) {
  CensusReport rep;
  std::vector<std::vector<int>> twist_choices_a, twist_choices_b;
  for (int t = 0; t <= std::min(budget.per_pair_max, budget.shape_a_max); ++t)
    twist_choices_a.push_back({t});
  for (int t1 = 0; t1 <= budget.per_pair_max; ++t1)
    for (int t2 = 0; t2 <= budget.per_pair_max; ++t2)
      if (t1 + t2 <= budget.shape_b_max) twist_choices_b.push_back({t1, t2});

  auto run_shape = [&](Shape shape, const std::vector<std::vector<int>>& twist_choices) {
    for (const auto& twists : twist_choices) {
      int total_twists = 0;
      for (int t : twists) total_twists += t;
      const std::uint64_t sign_count = 1ULL << total_twists;
      ShapeLayout layout = build_layout(shape, twists);

      for (const auto& pc : pattern_catalog()) {
        if (pc.crossings > budget.pattern_max) continue;
        for (const auto& placement : pc.placements) {
          auto heights = height_classes_for(placement);
          if (trace_components(outside_matching(layout), placement) != 1) {
            rep.not_a_knot += heights.size() * sign_count;
            rep.realizations += heights.size() * sign_count;
            continue;
          }
          TaggedPolygon curve = build_template_curve(layout, placement);
          ProtoDiagram proto = extract_proto(layout, curve, twists);
          if (proto.pattern_crossings != pc.crossings)
            throw FixtureError("pattern crossing count mismatch in census");
          rep.max_realized_crossings =
              std::max(rep.max_realized_crossings,
                       proto.pattern_crossings + proto.twist_crossings);

          for (const auto& ranks : heights) {
            for (std::uint64_t bits = 0; bits < sign_count; ++bits) {
              ++rep.realizations;
              std::vector<int> sign_bits(total_twists);
              for (int b = 0; b < total_twists; ++b) sign_bits[b] = (bits >> b) & 1;
              auto flags = over_flags(proto, ranks, sign_bits);
              diagram::KnotDiagram d = assemble_diagram(proto, flags);
              try {
                Classification cls = reduce_and_classify(d, table, budget);
                rep.max_reduced_crossings =
                    std::max(rep.max_reduced_crossings, cls.crossing_count);
                if (cls.candidates.size() == 1) {
                  ++rep.types[cls.candidates.front().name];
                } else if (cls.candidates.size() > 1) {
                  ++rep.ambiguous;
                  ++rep.unidentified;
                } else {
                  if (!cls.raw_matches.empty()) ++rep.screened_out;
                  ++rep.unidentified;
                }
              } catch (const BudgetExceeded&) {
                ++rep.budget_exceeded;
              }
            }
          }
        }
      }
    }
  };
  run_shape(Shape::kA, twist_choices_a);
  run_shape(Shape::kB, twist_choices_b);
  return rep;
}

std::string CensusReport::to_json() const {
  nlohmann::json j;
  nlohmann::json t = nlohmann::json::object();
  for (const auto& [name, count] : types) t[name] = count;
  j["types"] = t;
  j["realizations"] = realizations;
  j["not_a_knot"] = not_a_knot;
  j["unidentified"] = unidentified;
  j["ambiguous"] = ambiguous;
  j["screened_out"] = screened_out;
  j["budget_exceeded"] = budget_exceeded;
  j["max_reduced_crossings"] = max_reduced_crossings;
  j["max_realized_crossings"] = max_realized_crossings;
  return j.dump(2) + "\n";
}

BoundRuleInput bound_input_from_entry(const invariants::KnotTableEntry& e) {
  BoundRuleInput in;
  in.name = e.name;
  in.bridge_index = e.bridge_index;
  in.marker = e.marker;
  in.two_bridge = e.two_bridge;
  in.torus = e.torus;
  in.edge_bound = e.edge_bound;
  return in;
}

std::vector<BoundResult> table_bounds(const std::vector<BoundRuleInput>& inputs) {
  std::vector<BoundResult> out;
  out.reserve(inputs.size());
  for (const auto& in : inputs) {
    BoundResult r;
    r.name = in.name;
    int hi = in.edge_bound / 2;
    if (in.two_bridge) hi = std::min(hi, 7);
    bool lower_by_one = in.marker == "star" || in.marker == "diamond" ||
                        in.marker == "circ_star" || in.marker == "circ_diamond";
    int lo = in.bridge_index + (lower_by_one ? 1 : 2);
    if (in.torus) {
      int exact = std::min(2 * in.torus->first, in.torus->second);
      if (exact < lo || exact > hi)
        throw InconsistentRules(in.name + ": torus value outside the rule range");
      r.lo = r.hi = exact;
      r.exact = exact;
    } else {
      if (lo > hi) throw InconsistentRules(in.name + ": lower bound exceeds upper bound");
      r.lo = lo;
      r.hi = hi;
      if (lo == hi) r.exact = lo;
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace knotforge::workbench
