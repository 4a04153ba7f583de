#include "corridors/geom.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace corridors {

Rational cross(const Point& o, const Point& a, const Point& b) {
    return (a.x - o.x) * (b.y - o.y) - (a.y - o.y) * (b.x - o.x);
}

int orient(const Point& p, const Point& q, const Point& r) {
    return sign(cross(p, q, r));
}

bool point_on_segment(const Point& p, const Segment& s) {
    if (orient(s.a, s.b, p) != 0) return false;
    return cmp(rat_min(s.a.x, s.b.x), p.x) <= 0 && cmp(p.x, rat_max(s.a.x, s.b.x)) <= 0 &&
           cmp(rat_min(s.a.y, s.b.y), p.y) <= 0 && cmp(p.y, rat_max(s.a.y, s.b.y)) <= 0;
}

namespace {

// Collinear case: project on the dominant axis and intersect parameter ranges.
SegIntersection collinear_overlap(const Segment& s, const Segment& t) {
    auto key = [&](const Point& p) -> const Rational& {
        bool use_x = s.a.x != s.b.x;
        return use_x ? p.x : p.y;
    };
    Point slo = s.a, shi = s.b, tlo = t.a, thi = t.b;
    if (key(shi) < key(slo)) std::swap(slo, shi);
    if (key(thi) < key(tlo)) std::swap(tlo, thi);
    const Point& lo = key(slo) < key(tlo) ? tlo : slo;
    const Point& hi = key(shi) < key(thi) ? shi : thi;
    int c = cmp(key(lo), key(hi));
    SegIntersection out;
    if (c > 0) return out;
    if (c == 0) {
        out.kind = SegIntersection::Kind::Point;
        out.p = lo;
        return out;
    }
    out.kind = SegIntersection::Kind::Overlap;
    out.seg = {lo, hi};
    return out;
}

}  // namespace

SegIntersection segment_intersection(const Segment& s, const Segment& t) {
    SegIntersection out;
    Rational c1 = cross(s.a, s.b, t.a);
    Rational c2 = cross(s.a, s.b, t.b);
    int d1 = sign(c1), d2 = sign(c2);
    int d3 = orient(t.a, t.b, s.a);
    int d4 = orient(t.a, t.b, s.b);

    if (d1 == 0 && d2 == 0) {
        // Same supporting line.
        if (!point_on_segment(t.a, s) && !point_on_segment(t.b, s) && !point_on_segment(s.a, t))
            return out;
        return collinear_overlap(s, t);
    }

    if (d1 * d2 < 0 && d3 * d4 < 0) {
        Rational u = c1 / (c1 - c2);
        out.kind = SegIntersection::Kind::Point;
        out.p = {t.a.x + u * (t.b.x - t.a.x), t.a.y + u * (t.b.y - t.a.y)};
        return out;
    }

    // Endpoint touches resolve without division.
    if (d1 == 0 && point_on_segment(t.a, s)) { out.kind = SegIntersection::Kind::Point; out.p = t.a; }
    else if (d2 == 0 && point_on_segment(t.b, s)) { out.kind = SegIntersection::Kind::Point; out.p = t.b; }
    else if (d3 == 0 && point_on_segment(s.a, t)) { out.kind = SegIntersection::Kind::Point; out.p = s.a; }
    else if (d4 == 0 && point_on_segment(s.b, t)) { out.kind = SegIntersection::Kind::Point; out.p = s.b; }
    return out;
}

bool segments_cross_properly(const Segment& s, const Segment& t) {
    int d1 = orient(s.a, s.b, t.a);
    int d2 = orient(s.a, s.b, t.b);
    int d3 = orient(t.a, t.b, s.a);
    int d4 = orient(t.a, t.b, s.b);
    return d1 * d2 < 0 && d3 * d4 < 0;
}

Rational SimplePolygon::signed_area2() const {
    Rational s = 0;
    for (std::size_t i = 0; i < vertices.size(); ++i) {
        const Point& a = vertices[i];
        const Point& b = vertices[(i + 1) % vertices.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return s;
}

Containment point_in_cycle(const Point& p, const std::vector<Point>& cycle) {
    bool inside = false;
    std::size_t n = cycle.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = cycle[i];
        const Point& b = cycle[(i + 1) % n];
        if (point_on_segment(p, {a, b})) return Containment::Boundary;
        bool a_above = a.y > p.y, b_above = b.y > p.y;
        if (a_above != b_above) {
            int side = orient(a, b, p);
            if ((b.y > a.y) ? (side < 0) : (side > 0)) inside = !inside;
        }
    }
    return inside ? Containment::Inside : Containment::Outside;
}

Containment point_in_polygon(const Point& p, const SimplePolygon& poly) {
    return point_in_cycle(p, poly.vertices);
}

Rational linf_point_point(const Point& p, const Point& q) {
    return rat_max(rat_abs(p.x - q.x), rat_abs(p.y - q.y));
}

Rational linf_point_segment(const Point& p, const Segment& s) {
    // d(t) = max(|px - x(t)|, |py - y(t)|) is piecewise linear in t; the
    // minimum is attained at t in {0, 1} or where one of the four linear
    // pieces changes sign or two pieces cross.
    std::vector<Rational> cands = {Rational(0), Rational(1)};
    Rational dx = s.b.x - s.a.x, dy = s.b.y - s.a.y;
    Rational ax = p.x - s.a.x, ay = p.y - s.a.y;
    // px - x(t) = ax - t*dx ; py - y(t) = ay - t*dy
    auto add_root = [&](const Rational& num, const Rational& den) {
        if (den == 0) return;
        Rational t = num / den;
        if (t > 0 && t < 1) cands.push_back(t);
    };
    add_root(ax, dx);            // px - x(t) = 0
    add_root(ay, dy);            // py - y(t) = 0
    add_root(ax - ay, dx - dy);  // (px-x) = (py-y)
    add_root(ax + ay, dx + dy);  // (px-x) = -(py-y)
    std::optional<Rational> best;
    for (const Rational& t : cands) {
        Rational vx = rat_abs(ax - t * dx), vy = rat_abs(ay - t * dy);
        Rational v = rat_max(vx, vy);
        if (!best || v < *best) best = v;
    }
    return *best;
}

Rational linf_distance_to_feature(const Point& p, const Feature& f) {
    if (std::holds_alternative<Point>(f.geom)) return linf_point_point(p, std::get<Point>(f.geom));
    return linf_point_segment(p, std::get<Segment>(f.geom));
}

Rational Frame::min_x() const {
    Rational v = corners[0].x;
    for (const auto& c : corners) v = rat_min(v, c.x);
    return v;
}
Rational Frame::max_x() const {
    Rational v = corners[0].x;
    for (const auto& c : corners) v = rat_max(v, c.x);
    return v;
}
Rational Frame::min_y() const {
    Rational v = corners[0].y;
    for (const auto& c : corners) v = rat_min(v, c.y);
    return v;
}
Rational Frame::max_y() const {
    Rational v = corners[0].y;
    for (const auto& c : corners) v = rat_max(v, c.y);
    return v;
}

int WeightedInstance::total_vertices() const {
    int n = 0;
    for (const auto& p : polygons) n += static_cast<int>(p.size());
    return n;
}

Rational WeightedInstance::total_weight() const {
    Rational w = 0;
    for (const auto& wi : weights) w += wi;
    return w;
}

Rational WeightedInstance::total_weight(const std::vector<int>& subset) const {
    Rational w = 0;
    for (int i : subset) w += weights[i];
    return w;
}

Frame make_frame(const std::vector<SimplePolygon>& polygons) {
    Rational min_x = 0, max_x = 1, min_y = 0, max_y = 1;
    bool first = true;
    for (const auto& poly : polygons)
        for (const auto& v : poly.vertices) {
            if (first) {
                min_x = max_x = v.x;
                min_y = max_y = v.y;
                first = false;
            } else {
                min_x = rat_min(min_x, v.x);
                max_x = rat_max(max_x, v.x);
                min_y = rat_min(min_y, v.y);
                max_y = rat_max(max_y, v.y);
            }
        }
    Rational side = rat_max(max_x - min_x, max_y - min_y);
    if (side == 0) side = 1;
    Rational half = side * 11 / 20;  // 10% inflation per side
    Rational cx = (min_x + max_x) / 2, cy = (min_y + max_y) / 2;
    Frame f;
    f.corners = {Point{cx - half, cy - half}, Point{cx + half, cy - half},
                 Point{cx + half, cy + half}, Point{cx - half, cy + half}};
    return f;
}

std::vector<Point> boundary_crossing_points(const SimplePolygon& p, const SimplePolygon& q) {
    std::vector<Point> pts;
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) {
            auto r = segment_intersection(p.edge(i), q.edge(j));
            if (r.kind == SegIntersection::Kind::Overlap)
                throw std::runtime_error("degenerate overlap: polygons share a sub-edge");
            if (r.kind == SegIntersection::Kind::Point &&
                segments_cross_properly(p.edge(i), q.edge(j)))
                pts.push_back(r.p);
        }
    return pts;
}

int boundary_crossings(const SimplePolygon& p, const SimplePolygon& q) {
    return static_cast<int>(boundary_crossing_points(p, q).size());
}

Containment point_in_frame(const Point& p, const Frame& f) {
    bool on = false;
    for (std::size_t i = 0; i < 4; ++i) {
        int o = orient(f.corners[i], f.corners[(i + 1) % 4], p);
        if (o < 0) return Containment::Outside;
        if (o == 0) on = true;
    }
    // orient==0 off the segment span cannot happen for a convex cycle walk
    // unless outside, which the o<0 test already caught on another edge.
    return on ? Containment::Boundary : Containment::Inside;
}

bool polygons_intersect(const SimplePolygon& p, const SimplePolygon& q) {
    for (std::size_t i = 0; i < p.size(); ++i)
        for (std::size_t j = 0; j < q.size(); ++j) {
            auto r = segment_intersection(p.edge(i), q.edge(j));
            if (r.kind != SegIntersection::Kind::Empty) return true;
        }
    if (point_in_polygon(p.vertices[0], q) != Containment::Outside) return true;
    if (point_in_polygon(q.vertices[0], p) != Containment::Outside) return true;
    return false;
}

namespace {

bool polygon_is_simple(const SimplePolygon& poly, std::string* why) {
    std::size_t n = poly.size();
    if (n < 3) {
        if (why) *why = "fewer than 3 vertices";
        return false;
    }
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            if (poly.vertices[i] == poly.vertices[j]) {
                if (why) *why = "repeated vertex";
                return false;
            }
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            bool adjacent = (j == i + 1) || (i == 0 && j == n - 1);
            auto r = segment_intersection(poly.edge(i), poly.edge(j));
            if (adjacent) {
                if (r.kind == SegIntersection::Kind::Overlap) {
                    if (why) *why = "adjacent edges overlap";
                    return false;
                }
                continue;  // shares exactly the common vertex
            }
            if (r.kind != SegIntersection::Kind::Empty) {
                if (why) *why = "non-adjacent edges meet";
                return false;
            }
        }
    }
    return true;
}

struct RatPairLess {
    bool operator()(const std::pair<Rational, Rational>& a,
                    const std::pair<Rational, Rational>& b) const {
        int c = cmp(a.first, b.first);
        if (c != 0) return c < 0;
        return a.second < b.second;
    }
};

}  // namespace

ValidationReport validate_instance(const WeightedInstance& inst) {
    ValidationReport rep;
    auto add = [&](std::string code, std::string msg) {
        rep.issues.push_back({std::move(code), std::move(msg)});
    };

    if (inst.weights.size() != inst.polygons.size())
        add("weight-count", "weight count differs from polygon count");
    for (std::size_t i = 0; i < inst.weights.size(); ++i)
        if (inst.weights[i] <= 0)
            add("weight-positive", "weight of polygon " + std::to_string(i) + " is not positive");

    for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
        std::string why;
        if (!polygon_is_simple(inst.polygons[i], &why))
            add("not-simple", "polygon " + std::to_string(i) + ": " + why);
        else if (sign(inst.polygons[i].signed_area2()) <= 0)
            add("orientation", "polygon " + std::to_string(i) + " is not counterclockwise");
    }
    if (!rep.ok()) return rep;  // later checks assume simple CCW polygons

    // Frame: an exact square, positively oriented, strictly containing everything.
    {
        const auto& c = inst.frame.corners;
        Rational sq2 = SimplePolygon{{c[0], c[1], c[2], c[3]}}.signed_area2();
        bool square = sq2 > 0;
        for (int i = 0; i < 4 && square; ++i) {
            Point u{c[(i + 1) % 4].x - c[i].x, c[(i + 1) % 4].y - c[i].y};
            Point v{c[(i + 2) % 4].x - c[(i + 1) % 4].x, c[(i + 2) % 4].y - c[(i + 1) % 4].y};
            if (u.x * v.x + u.y * v.y != 0) square = false;                    // right angle
            if (u.x * u.x + u.y * u.y != v.x * v.x + v.y * v.y) square = false;  // equal sides
        }
        if (!square) add("frame-square", "frame is not a positively oriented square");
        else {
            for (std::size_t i = 0; i < inst.polygons.size(); ++i)
                for (const auto& v : inst.polygons[i].vertices)
                    if (point_in_frame(v, inst.frame) != Containment::Inside) {
                        add("frame-containment",
                            "polygon " + std::to_string(i) + " not strictly inside the frame");
                        break;
                    }
        }
    }

    // Pairwise relations: tangency, shared sub-edges, containment; collect
    // crossing points for the triple-point check.
    std::map<std::pair<Rational, Rational>, std::set<std::size_t>, RatPairLess> crossing_owners;
    for (std::size_t i = 0; i < inst.polygons.size(); ++i) {
        for (std::size_t j = i + 1; j < inst.polygons.size(); ++j) {
            const auto& P = inst.polygons[i];
            const auto& Q = inst.polygons[j];
            bool any_crossing = false;
            bool degenerate = false;
            for (std::size_t a = 0; a < P.size() && !degenerate; ++a)
                for (std::size_t b = 0; b < Q.size(); ++b) {
                    auto r = segment_intersection(P.edge(a), Q.edge(b));
                    if (r.kind == SegIntersection::Kind::Overlap) {
                        add("shared-subedge", "polygons " + std::to_string(i) + " and " +
                                                  std::to_string(j) + " share a sub-edge");
                        degenerate = true;
                        break;
                    }
                    if (r.kind == SegIntersection::Kind::Point) {
                        if (!segments_cross_properly(P.edge(a), Q.edge(b))) {
                            add("tangency", "boundaries of polygons " + std::to_string(i) +
                                                " and " + std::to_string(j) +
                                                " touch without crossing");
                            degenerate = true;
                            break;
                        }
                        any_crossing = true;
                        crossing_owners[{r.p.x, r.p.y}].insert(i);
                        crossing_owners[{r.p.x, r.p.y}].insert(j);
                    }
                }
            if (degenerate) continue;
            if (!any_crossing) {
                if (point_in_polygon(P.vertices[0], Q) == Containment::Inside ||
                    point_in_polygon(Q.vertices[0], P) == Containment::Inside)
                    add("containment", "one of polygons " + std::to_string(i) + ", " +
                                           std::to_string(j) + " contains the other");
            }
        }
    }
    for (const auto& [pt, owners] : crossing_owners)
        if (owners.size() > 2)
            add("triple-point", "three polygon boundaries pass through a common point");

    return rep;
}

std::string ValidationReport::to_string() const {
    std::ostringstream os;
    for (const auto& issue : issues) os << issue.code << ": " << issue.message << "\n";
    return os.str();
}

namespace {

bool strong_general_position(const std::vector<SimplePolygon>& polygons) {
    std::vector<Rational> xs, ys;
    for (const auto& poly : polygons) {
        std::size_t n = poly.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = poly.vertices[i];
            const Point& b = poly.vertices[(i + 1) % n];
            if (a.x == b.x || a.y == b.y) return false;  // axis-parallel edge
            xs.push_back(a.x);
            ys.push_back(a.y);
        }
    }
    // Pairwise boundary crossings also become point sites downstream. Shared
    // sub-edges are a validation matter, not a rotation matter; skip them.
    for (std::size_t i = 0; i < polygons.size(); ++i)
        for (std::size_t j = i + 1; j < polygons.size(); ++j) {
            std::vector<Point> pts;
            try {
                pts = boundary_crossing_points(polygons[i], polygons[j]);
            } catch (const std::runtime_error&) {
                continue;
            }
            for (const auto& p : pts) {
                xs.push_back(p.x);
                ys.push_back(p.y);
            }
        }
    auto has_dup = [](std::vector<Rational>& v) {
        std::sort(v.begin(), v.end(), RationalLess{});
        return std::adjacent_find(v.begin(), v.end()) != v.end();
    };
    return !has_dup(xs) && !has_dup(ys);
}

}  // namespace

bool in_general_position(const WeightedInstance& inst) {
    return strong_general_position(inst.polygons);
}

WeightedInstance ensure_general_position(const WeightedInstance& inst, GeneralPositionInfo* info) {
    if (info) *info = {};
    if (strong_general_position(inst.polygons)) return inst;

    for (long k = 1000000; k < 1000010; ++k) {
        Rational den = make_rational(k) * k + 1;
        Rational cos_t = (make_rational(k) * k - 1) / den;
        Rational sin_t = make_rational(2 * k) / den;
        WeightedInstance rotated = inst;
        for (auto& poly : rotated.polygons)
            for (auto& v : poly.vertices) {
                Rational nx = cos_t * v.x - sin_t * v.y;
                Rational ny = sin_t * v.x + cos_t * v.y;
                v = {nx, ny};
            }
        if (!strong_general_position(rotated.polygons)) continue;
        rotated.frame = make_frame(rotated.polygons);
        if (info) {
            info->rotated = true;
            info->k = k;
        }
        return rotated;
    }
    throw std::runtime_error("ensure_general_position: rotation schedule exhausted");
}

int max_line_crossings(const SimplePolygon& poly) {
    // For direction u, a line with normal-ish sweep transversal to u crosses
    // the boundary at most M(u) times, where M(u) is the number of local
    // extrema of the vertex projections onto u. M is piecewise constant
    // between directions perpendicular to edges; probe one direction per
    // angular gap.
    std::size_t n = poly.size();
    std::vector<Point> dirs;  // edge normals; probes between them miss every edge
    for (std::size_t i = 0; i < n; ++i) {
        Segment e = poly.edge(i);
        Point d{e.b.x - e.a.x, e.b.y - e.a.y};
        dirs.push_back({-d.y, d.x});
        dirs.push_back({d.y, -d.x});
    }
    auto half = [](const Point& d) { return (d.y > 0 || (d.y == 0 && d.x > 0)) ? 0 : 1; };
    std::sort(dirs.begin(), dirs.end(), [&](const Point& a, const Point& b) {
        int ha = half(a), hb = half(b);
        if (ha != hb) return ha < hb;
        return sign(a.x * b.y - a.y * b.x) > 0;
    });
    dirs.erase(std::unique(dirs.begin(), dirs.end()), dirs.end());

    int best = 0;
    for (std::size_t i = 0; i < dirs.size(); ++i) {
        const Point& a = dirs[i];
        const Point& b = dirs[(i + 1) % dirs.size()];
        Point u{a.x + b.x, a.y + b.y};  // interior of the angular gap
        if (u.x == 0 && u.y == 0) continue;
        int extrema = 0;
        for (std::size_t v = 0; v < n; ++v) {
            const Point& prev = poly.vertices[(v + n - 1) % n];
            const Point& cur = poly.vertices[v];
            const Point& next = poly.vertices[(v + 1) % n];
            Rational dp = (cur.x - prev.x) * u.x + (cur.y - prev.y) * u.y;
            Rational dn = (next.x - cur.x) * u.x + (next.y - cur.y) * u.y;
            if (sign(dp) != 0 && sign(dn) != 0 && sign(dp) != sign(dn)) ++extrema;
        }
        best = std::max(best, extrema);
    }
    return best;
}

std::string format_point(const Point& p) {
    return "(" + format_rational(p.x) + "," + format_rational(p.y) + ")";
}

}  // namespace corridors
