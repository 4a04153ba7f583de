#include "corridors/arrangement.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace corridors {

namespace {

struct IBox {
    std::int64_t xlo, xhi, ylo, yhi;
};

IBox ibox_of(const Segment& s) {
    return {floor_int64(rat_min(s.a.x, s.b.x)), ceil_int64(rat_max(s.a.x, s.b.x)),
            floor_int64(rat_min(s.a.y, s.b.y)), ceil_int64(rat_max(s.a.y, s.b.y))};
}

bool boxes_meet(const IBox& a, const IBox& b) {
    return a.xlo <= b.xhi && b.xlo <= a.xhi && a.ylo <= b.yhi && b.ylo <= a.yhi;
}

// Direction bucket for CCW angular order: 0 = upper half (y>0, or y==0 && x>0).
int dir_half(const Point& d) { return (d.y > 0 || (d.y == 0 && d.x > 0)) ? 0 : 1; }

}  // namespace

bool PlanarSubdivision::vertex_is_crossing(int v) const {
    return std::binary_search(crossing_vertices_.begin(), crossing_vertices_.end(), v);
}

void PlanarSubdivision::build(const std::vector<InputSegment>& segments) {
    vertex_points_.clear();
    subs_.clear();
    halves_.clear();
    orbit_halves_.clear();
    orbit_area2_.clear();
    orbit_face_.clear();
    faces_.clear();
    crossing_vertices_.clear();

    std::vector<InputSegment> input;
    input.reserve(segments.size());
    for (const auto& s : segments)
        if (!(s.seg.a == s.seg.b)) input.push_back(s);

    // Pairwise splitting.
    std::vector<std::vector<Point>> cuts(input.size());
    std::vector<IBox> boxes(input.size());
    for (std::size_t i = 0; i < input.size(); ++i) boxes[i] = ibox_of(input[i].seg);

    std::map<Point, bool, PointLess> crossing_mark;
    for (std::size_t i = 0; i < input.size(); ++i) {
        for (std::size_t j = i + 1; j < input.size(); ++j) {
            if (!boxes_meet(boxes[i], boxes[j])) continue;
            auto r = segment_intersection(input[i].seg, input[j].seg);
            if (r.kind == SegIntersection::Kind::Point) {
                cuts[i].push_back(r.p);
                cuts[j].push_back(r.p);
                bool pp = input[i].tag.kind == EdgeTag::Kind::PolygonEdge &&
                          input[j].tag.kind == EdgeTag::Kind::PolygonEdge &&
                          input[i].tag.owner != input[j].tag.owner &&
                          segments_cross_properly(input[i].seg, input[j].seg);
                if (pp) crossing_mark[r.p] = true;
            } else if (r.kind == SegIntersection::Kind::Overlap) {
                cuts[i].push_back(r.seg.a);
                cuts[i].push_back(r.seg.b);
                cuts[j].push_back(r.seg.a);
                cuts[j].push_back(r.seg.b);
            }
        }
    }

    // Assemble sub-edges; merge duplicates by canonical endpoints.
    std::map<std::pair<Point, Point>, int,
             decltype([](const std::pair<Point, Point>& a, const std::pair<Point, Point>& b) {
                 if (a.first != b.first) return lex_less(a.first, b.first);
                 return lex_less(a.second, b.second);
             })>
        sub_index;
    for (std::size_t i = 0; i < input.size(); ++i) {
        const Segment& s = input[i].seg;
        Point d{s.b.x - s.a.x, s.b.y - s.a.y};
        auto along = [&](const Point& p) -> Rational { return d.x * p.x + d.y * p.y; };
        std::vector<Point> pts = {s.a, s.b};
        for (const auto& c : cuts[i]) pts.push_back(c);
        std::sort(pts.begin(), pts.end(), [&](const Point& p, const Point& q) {
            return along(p) < along(q);
        });
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
        for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
            Point a = pts[k], b = pts[k + 1];
            if (a == b) continue;
            if (lex_less(b, a)) std::swap(a, b);
            auto key = std::make_pair(a, b);
            auto it = sub_index.find(key);
            if (it == sub_index.end()) {
                SubEdge se;
                se.a = a;
                se.b = b;
                se.tags.push_back(input[i].tag);
                sub_index.emplace(key, static_cast<int>(subs_.size()));
                subs_.push_back(std::move(se));
            } else {
                auto& tags = subs_[it->second].tags;
                if (std::find(tags.begin(), tags.end(), input[i].tag) == tags.end())
                    tags.push_back(input[i].tag);
            }
        }
    }

    // Vertices.
    std::map<Point, int, PointLess> vid;
    auto vertex_id = [&](const Point& p) {
        auto it = vid.find(p);
        if (it != vid.end()) return it->second;
        int id = static_cast<int>(vertex_points_.size());
        vid.emplace(p, id);
        vertex_points_.push_back(p);
        return id;
    };
    for (auto& se : subs_) {
        se.va = vertex_id(se.a);
        se.vb = vertex_id(se.b);
    }
    for (const auto& [p, is_cross] : crossing_mark) {
        auto it = vid.find(p);
        if (it != vid.end()) crossing_vertices_.push_back(it->second);
    }
    std::sort(crossing_vertices_.begin(), crossing_vertices_.end());

    // Half-edges.
    halves_.reserve(subs_.size() * 2);
    std::vector<std::vector<int>> outgoing(vertex_points_.size());
    for (std::size_t si = 0; si < subs_.size(); ++si) {
        auto& se = subs_[si];
        HalfEdge hab{se.va, se.vb, -1, -1, static_cast<int>(si), -1};
        HalfEdge hba{se.vb, se.va, -1, -1, static_cast<int>(si), -1};
        se.h_ab = static_cast<int>(halves_.size());
        halves_.push_back(hab);
        se.h_ba = static_cast<int>(halves_.size());
        halves_.push_back(hba);
        halves_[se.h_ab].twin = se.h_ba;
        halves_[se.h_ba].twin = se.h_ab;
        outgoing[se.va].push_back(se.h_ab);
        outgoing[se.vb].push_back(se.h_ba);
    }

    // CCW angular order of outgoing half-edges around each vertex.
    auto hdir = [&](int h) {
        const auto& he = halves_[h];
        const Point& f = vertex_points_[he.from];
        const Point& t = vertex_points_[he.to];
        return Point{t.x - f.x, t.y - f.y};
    };
    for (std::size_t v = 0; v < outgoing.size(); ++v) {
        auto& out = outgoing[v];
        std::sort(out.begin(), out.end(), [&](int h1, int h2) {
            Point d1 = hdir(h1), d2 = hdir(h2);
            int a = dir_half(d1), b = dir_half(d2);
            if (a != b) return a < b;
            int c = sign(d1.x * d2.y - d1.y * d2.x);
            if (c != 0) return c > 0;
            return h1 < h2;  // parallel duplicates should not happen post-merge
        });
        // next(h) for h ending at v: the outgoing edge clockwise-adjacent to twin(h).
        for (std::size_t k = 0; k < out.size(); ++k) {
            int h_out = out[k];
            int prev = out[(k + out.size() - 1) % out.size()];
            halves_[halves_[h_out].twin].next = prev;
        }
    }

    // Orbits.
    for (std::size_t h = 0; h < halves_.size(); ++h) {
        if (halves_[h].orbit != -1) continue;
        int orbit = static_cast<int>(orbit_halves_.size());
        orbit_halves_.emplace_back();
        Rational area2 = 0;
        int cur = static_cast<int>(h);
        while (halves_[cur].orbit == -1) {
            halves_[cur].orbit = orbit;
            orbit_halves_[orbit].push_back(cur);
            const Point& a = vertex_points_[halves_[cur].from];
            const Point& b = vertex_points_[halves_[cur].to];
            area2 += a.x * b.y - b.x * a.y;
            cur = halves_[cur].next;
        }
        orbit_area2_.push_back(area2);
    }

    // Faces: positive orbits bound them; other orbits attach as holes of the
    // smallest positive orbit strictly containing a probe point.
    int n_orbits = static_cast<int>(orbit_halves_.size());
    orbit_face_.assign(n_orbits, -1);
    std::vector<int> positive;
    for (int o = 0; o < n_orbits; ++o)
        if (orbit_area2_[o] > 0) positive.push_back(o);

    std::vector<std::vector<Point>> orbit_pts(n_orbits);
    for (int o = 0; o < n_orbits; ++o) orbit_pts[o] = orbit_points(o);

    faces_.clear();
    for (int o : positive) {
        Face f;
        f.outer_orbit = o;
        orbit_face_[o] = static_cast<int>(faces_.size());
        faces_.push_back(std::move(f));
    }
    unbounded_face_ = static_cast<int>(faces_.size());
    {
        Face f;
        f.unbounded = true;
        faces_.push_back(std::move(f));
    }

    for (int o = 0; o < n_orbits; ++o) {
        if (orbit_area2_[o] > 0) continue;
        // Probe: midpoint of the first sub-edge on this orbit.
        int h = orbit_halves_[o].front();
        const Point& a = vertex_points_[halves_[h].from];
        const Point& b = vertex_points_[halves_[h].to];
        Point probe{(a.x + b.x) / 2, (a.y + b.y) / 2};
        int best = -1;
        for (int p : positive) {
            if (orbit_area2_[p] <= 0) continue;
            if (point_in_cycle(probe, orbit_pts[p]) != Containment::Inside) continue;
            if (best == -1 || orbit_area2_[p] < orbit_area2_[best]) best = p;
        }
        int face = best == -1 ? unbounded_face_ : orbit_face_[best];
        orbit_face_[o] = face;
        faces_[face].hole_orbits.push_back(o);
    }

    propagate_covers();
}

std::vector<Point> PlanarSubdivision::orbit_points(int orbit) const {
    std::vector<Point> pts;
    pts.reserve(orbit_halves_[orbit].size());
    for (int h : orbit_halves_[orbit]) pts.push_back(vertex_points_[halves_[h].from]);
    return pts;
}

void PlanarSubdivision::propagate_covers() {
    if (faces_.empty()) return;
    std::vector<bool> done(faces_.size(), false);
    std::vector<int> queue = {unbounded_face_};
    faces_[unbounded_face_].cover.clear();
    faces_[unbounded_face_].inside_frame = false;
    done[unbounded_face_] = true;
    while (!queue.empty()) {
        int f = queue.back();
        queue.pop_back();
        std::vector<int> orbits = faces_[f].hole_orbits;
        if (faces_[f].outer_orbit != -1) orbits.push_back(faces_[f].outer_orbit);
        for (int o : orbits) {
            for (int h : orbit_halves_[o]) {
                int g = orbit_face_[halves_[halves_[h].twin].orbit];
                if (g == f && halves_[halves_[h].twin].orbit == halves_[h].orbit) continue;
                const auto& tags = subs_[halves_[h].sub].tags;
                std::vector<int> cover = faces_[f].cover;
                bool inside_frame = faces_[f].inside_frame;
                for (const auto& tag : tags) {
                    if (tag.kind == EdgeTag::Kind::PolygonEdge) {
                        auto it = std::lower_bound(cover.begin(), cover.end(), tag.owner);
                        if (it != cover.end() && *it == tag.owner)
                            cover.erase(it);
                        else
                            cover.insert(it, tag.owner);
                    } else if (tag.kind == EdgeTag::Kind::FrameEdge) {
                        inside_frame = !inside_frame;
                    }
                }
                if (!done[g]) {
                    faces_[g].cover = std::move(cover);
                    faces_[g].inside_frame = inside_frame;
                    done[g] = true;
                    queue.push_back(g);
                } else if (faces_[g].cover != cover || faces_[g].inside_frame != inside_frame) {
                    throw std::runtime_error("planar subdivision: inconsistent cover propagation");
                }
            }
        }
    }
    for (bool d : done)
        if (!d) throw std::runtime_error("planar subdivision: unreachable face");
}

int PlanarSubdivision::locate(const Point& p, bool* boundary) const {
    if (boundary) *boundary = false;
    for (std::size_t si = 0; si < subs_.size(); ++si) {
        const auto& se = subs_[si];
        if (point_on_segment(p, {se.a, se.b})) {
            if (boundary) *boundary = true;
            return face_of_halfedge(se.h_ab);
        }
    }
    for (std::size_t f = 0; f < faces_.size(); ++f) {
        const auto& face = faces_[f];
        if (face.unbounded) continue;
        if (point_in_cycle(p, orbit_points(face.outer_orbit)) != Containment::Inside) continue;
        bool in_hole = false;
        for (int ho : face.hole_orbits) {
            // A hole's contents are not part of the face; twin-orbit faces hold them.
            if (point_in_cycle(p, orbit_points(ho)) == Containment::Inside) {
                // Inside relative to the hole cycle's winding means the probe
                // is within the hole region only if the cycle winds around it.
                in_hole = true;
                break;
            }
        }
        if (!in_hole) return static_cast<int>(f);
    }
    return unbounded_face_;
}

Rational PlanarSubdivision::face_area(int f) const {
    const auto& face = faces_[f];
    if (face.unbounded) return Rational(0);
    Rational a2 = orbit_area2_[face.outer_orbit];
    for (int o : face.hole_orbits) a2 += orbit_area2_[o];
    return a2 / 2;
}

namespace {

std::vector<InputSegment> instance_segments(const WeightedInstance& inst,
                                            const std::vector<int>& subset, bool with_frame) {
    std::vector<InputSegment> segs;
    for (int id : subset) {
        const auto& poly = inst.polygons[id];
        for (std::size_t e = 0; e < poly.size(); ++e)
            segs.push_back({poly.edge(e),
                            {EdgeTag::Kind::PolygonEdge, id, static_cast<int>(e), -1}});
    }
    if (with_frame)
        for (std::size_t e = 0; e < 4; ++e)
            segs.push_back({inst.frame.edge(e),
                            {EdgeTag::Kind::FrameEdge, -1, static_cast<int>(e), -1}});
    return segs;
}

}  // namespace

ArrangementSummary build_arrangement(const WeightedInstance& inst, const std::vector<int>& subset) {
    ArrangementSummary out;
    out.subdivision = std::make_shared<PlanarSubdivision>();
    out.subdivision->build(instance_segments(inst, subset, true));
    const auto& sub = *out.subdivision;

    int t = 0;
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j)
            t += boundary_crossings(inst.polygons[subset[i]], inst.polygons[subset[j]]);
    out.t = t;
    if (static_cast<int>(sub.crossing_vertices().size()) != t)
        throw std::runtime_error("arrangement: crossing count mismatch (degenerate input?)");
    for (int v : sub.crossing_vertices()) out.vertex_locations.push_back(sub.vertices()[v]);

    for (std::size_t f = 0; f < sub.faces().size(); ++f) {
        const auto& face = sub.faces()[f];
        if (face.unbounded || !face.inside_frame || !face.cover.empty()) continue;
        FaceInfo info;
        info.face_id = static_cast<int>(f);
        info.outer_cycle = sub.orbit_points(face.outer_orbit);
        for (int o : face.hole_orbits) info.hole_cycles.push_back(sub.orbit_points(o));
        std::set<int> owners;
        std::set<int> boundary_vertices;
        auto scan = [&](int orbit) {
            for (int h : sub.orbit_halfedges(orbit)) {
                for (const auto& tag : sub.sub_edges()[sub.half_edges()[h].sub].tags)
                    if (tag.kind == EdgeTag::Kind::PolygonEdge) owners.insert(tag.owner);
                boundary_vertices.insert(sub.half_edges()[h].from);
            }
        };
        scan(face.outer_orbit);
        for (int o : face.hole_orbits) scan(o);
        info.incident_polygons.assign(owners.begin(), owners.end());
        info.k_f = static_cast<int>(owners.size());
        for (int v : boundary_vertices)
            if (sub.vertex_is_crossing(v)) ++info.t_f;
        out.faces.push_back(std::move(info));
    }
    return out;
}

IntersectionGraph intersection_graph(const WeightedInstance& inst, const std::vector<int>& subset) {
    IntersectionGraph g;
    g.ids = subset;
    std::sort(g.ids.begin(), g.ids.end());
    g.adjacency.assign(g.ids.size(), {});
    for (std::size_t i = 0; i < g.ids.size(); ++i)
        for (std::size_t j = i + 1; j < g.ids.size(); ++j)
            if (polygons_intersect(inst.polygons[g.ids[i]], inst.polygons[g.ids[j]])) {
                g.edges.emplace_back(g.ids[i], g.ids[j]);
                g.adjacency[i].push_back(g.ids[j]);
                g.adjacency[j].push_back(g.ids[i]);
            }
    return g;
}

bool IntersectionGraph::has_edge(int a, int b) const {
    if (a > b) std::swap(a, b);
    for (const auto& e : edges)
        if (e.first == a && e.second == b) return true;
    return false;
}

std::pair<int, int> edge_density_probe(const WeightedInstance& inst,
                                       const std::vector<int>& subset) {
    auto g = intersection_graph(inst, subset);
    return {static_cast<int>(subset.size()), g.edge_count()};
}

}  // namespace corridors
