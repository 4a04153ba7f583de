#include "corridors/medial.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>

namespace corridors {

namespace {

constexpr std::int64_t kIntInf = (std::int64_t(1) << 62);

struct Scale {
    Rational factor;
    std::int64_t lo(const Rational& q) const { return floor_int64(q * factor) - 1; }
    std::int64_t hi(const Rational& q) const { return ceil_int64(q * factor) + 1; }
};

struct ClipBox {
    Rational xlo, xhi, ylo, yhi;
    std::vector<Point> corners() const {
        return {{xlo, ylo}, {xhi, ylo}, {xhi, yhi}, {xlo, yhi}};
    }
};

std::vector<Point> clip_by_halfplane(const std::vector<Point>& poly, const Halfplane& h) {
    std::vector<Point> out;
    std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % n];
        Rational fa = h.eval(a), fb = h.eval(b);
        bool ina = fa >= 0, inb = fb >= 0;
        if (ina) out.push_back(a);
        if (ina != inb) {
            Rational t = fa / (fa - fb);
            out.push_back({a.x + t * (b.x - a.x), a.y + t * (b.y - a.y)});
        }
    }
    return out;
}

Rational polygon_area2(const std::vector<Point>& poly) {
    Rational s = 0;
    for (std::size_t i = 0; i < poly.size(); ++i) {
        const Point& a = poly[i];
        const Point& b = poly[(i + 1) % poly.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return s;
}

// Engine-internal context shared by the construction passes.
struct Engine {
    std::vector<SiteCycle> cycles;
    std::vector<MedialFeature> features;
    std::vector<DistancePiece> pieces;
    std::vector<std::vector<int>> feature_pieces;
    std::vector<std::array<std::int64_t, 4>> feature_box;  // xlo,xhi,ylo,yhi scaled
    ClipBox box;
    Scale scale;

    void build_sites();
    void build_pieces();
    void finish_piece(DistancePiece& p);
    bool in_free_space(const Point& q) const;
};

void Engine::build_sites() {
    int outer_count = 0;
    for (std::size_t ci = 0; ci < cycles.size(); ++ci) {
        const SiteCycle& c = cycles[ci];
        if (c.outer) ++outer_count;
        std::size_t n = c.pts.size();
        if (n < 3 && !c.pts.empty())
            throw std::runtime_error("medial axis: degenerate site cycle");
        for (std::size_t i = 0; i < n; ++i) {
            const Point& a = c.pts[i];
            const Point& b = c.pts[(i + 1) % n];
            MedialFeature e;
            e.kind = MedialFeature::Kind::Edge;
            e.a = a;
            e.b = b;
            e.owners = c.owners[i];
            e.cycle = static_cast<int>(ci);
            e.axis_parallel = (a.x == b.x || a.y == b.y);
            if (e.axis_parallel && !(c.outer && c.omit_corner_sites))
                throw std::runtime_error(
                    "medial axis: axis-parallel site edge; run ensure_general_position");
            features.push_back(std::move(e));
            if (!c.omit_corner_sites) {
                MedialFeature v;
                v.kind = MedialFeature::Kind::Vertex;
                v.a = a;
                std::vector<int> owners = c.owners[i];
                for (int o : c.owners[(i + n - 1) % n])
                    if (std::find(owners.begin(), owners.end(), o) == owners.end())
                        owners.push_back(o);
                std::sort(owners.begin(), owners.end());
                v.owners = std::move(owners);
                v.cycle = static_cast<int>(ci);
                features.push_back(std::move(v));
            }
        }
    }
    if (outer_count != 1) throw std::runtime_error("medial axis: need exactly one outer cycle");
}

void Engine::finish_piece(DistancePiece& p) {
    std::vector<Point> dom_poly = box.corners();
    for (int i = 0; i < p.ndom && !dom_poly.empty(); ++i)
        dom_poly = clip_by_halfplane(dom_poly, p.dom[i]);
    if (dom_poly.empty()) {
        p.dropped = true;
        return;
    }
    p.ulo = p.wlo = p.xlo = p.ylo = kIntInf;
    p.uhi = p.whi = p.xhi = p.yhi = -kIntInf;
    for (const auto& q : dom_poly) {
        Rational u = q.x + q.y, w = q.x - q.y;
        p.ulo = std::min(p.ulo, scale.lo(u));
        p.uhi = std::max(p.uhi, scale.hi(u));
        p.wlo = std::min(p.wlo, scale.lo(w));
        p.whi = std::max(p.whi, scale.hi(w));
        p.xlo = std::min(p.xlo, scale.lo(q.x));
        p.xhi = std::max(p.xhi, scale.hi(q.x));
        p.ylo = std::min(p.ylo, scale.lo(q.y));
        p.yhi = std::max(p.yhi, scale.hi(q.y));
    }
}

void Engine::build_pieces() {
    feature_pieces.assign(features.size(), {});
    feature_box.assign(features.size(), {});
    for (std::size_t fi = 0; fi < features.size(); ++fi) {
        const MedialFeature& f = features[fi];
        feature_box[fi] = {
            std::min(scale.lo(f.a.x), f.kind == MedialFeature::Kind::Edge ? scale.lo(f.b.x)
                                                                          : scale.lo(f.a.x)),
            std::max(scale.hi(f.a.x), f.kind == MedialFeature::Kind::Edge ? scale.hi(f.b.x)
                                                                          : scale.hi(f.a.x)),
            std::min(scale.lo(f.a.y), f.kind == MedialFeature::Kind::Edge ? scale.lo(f.b.y)
                                                                          : scale.lo(f.a.y)),
            std::max(scale.hi(f.a.y), f.kind == MedialFeature::Kind::Edge ? scale.hi(f.b.y)
                                                                          : scale.hi(f.a.y))};

        auto add = [&](DistancePiece p) {
            p.feature = static_cast<int>(fi);
            finish_piece(p);
            if (p.dropped) return;
            feature_pieces[fi].push_back(static_cast<int>(pieces.size()));
            pieces.push_back(std::move(p));
        };

        if (f.kind == MedialFeature::Kind::Vertex) {
            const Rational& px = f.a.x;
            const Rational& py = f.a.y;
            // East / West / North / South cones of max(|dx|, |dy|).
            {
                DistancePiece p;  // E: x - px >= |y - py|
                p.ndom = 2;
                p.dom[0] = {1, -1, py - px};
                p.dom[1] = {1, 1, -px - py};
                p.v = {1, 0, -px};
                p.zx = {0, 0, px};
                p.zy = {0, 0, py};
                add(p);
            }
            {
                DistancePiece p;  // W
                p.ndom = 2;
                p.dom[0] = {-1, -1, px + py};
                p.dom[1] = {-1, 1, px - py};
                p.v = {-1, 0, px};
                p.zx = {0, 0, px};
                p.zy = {0, 0, py};
                add(p);
            }
            {
                DistancePiece p;  // N
                p.ndom = 2;
                p.dom[0] = {-1, 1, px - py};
                p.dom[1] = {1, 1, -px - py};
                p.v = {0, 1, -py};
                p.zx = {0, 0, px};
                p.zy = {0, 0, py};
                add(p);
            }
            {
                DistancePiece p;  // S
                p.ndom = 2;
                p.dom[0] = {-1, -1, px + py};
                p.dom[1] = {1, -1, py - px};
                p.v = {0, -1, py};
                p.zx = {0, 0, px};
                p.zy = {0, 0, py};
                add(p);
            }
            continue;
        }

        // Edge feature, free space on the left of a -> b.
        Rational dx = f.b.x - f.a.x, dy = f.b.y - f.a.y;
        Rational nlx = -dy, nly = dx;               // left normal
        Rational c0 = nlx * f.a.x + nly * f.a.y;    // line: nl . q = c0
        Rational D = rat_abs(nlx) + rat_abs(nly);
        // v = (nl . q - c0) / D on the free side, for every edge orientation.
        AffineScalar v{nlx / D, nly / D, -c0 / D};
        Halfplane free_side{nlx, nly, -c0};

        if (!f.axis_parallel) {
            Rational ux = sign(nlx) > 0 ? -1 : 1;
            Rational uy = sign(nly) > 0 ? -1 : 1;
            // Contact z = q + v * u; first touch of the square's corner.
            AffineScalar zx{1 + v.a * ux, v.b * ux, v.c * ux};
            AffineScalar zy{v.a * uy, 1 + v.b * uy, v.c * uy};
            // Slab: dot(d, z) within [dot(d,a), dot(d,b)].
            AffineScalar along{dx * zx.a + dy * zy.a, dx * zx.b + dy * zy.b,
                               dx * zx.c + dy * zy.c};
            Rational lo = dx * f.a.x + dy * f.a.y;
            Rational hi = dx * f.b.x + dy * f.b.y;
            DistancePiece p;
            p.ndom = 3;
            p.dom[0] = free_side;
            p.dom[1] = {along.a, along.b, along.c - lo};
            p.dom[2] = {-along.a, -along.b, hi - along.c};
            p.v = v;
            p.zx = zx;
            p.zy = zy;
            add(p);
            continue;
        }

        // Axis-parallel (frame) edge: contact sets can be one-dimensional;
        // collapse to the lexicographically smallest contact point, splitting
        // the regime where the clamp binds.
        if (f.a.x == f.b.x) {
            const Rational& X = f.a.x;
            Rational y0 = rat_min(f.a.y, f.b.y), y1 = rat_max(f.a.y, f.b.y);
            Halfplane span_lo{0, 1, -y0}, span_hi{0, -1, y1};
            {
                DistancePiece p;  // contact (X, y - v)
                p.ndom = 4;
                p.dom[0] = free_side;
                p.dom[1] = span_lo;
                p.dom[2] = span_hi;
                p.dom[3] = {-v.a, 1 - v.b, -v.c - y0};  // y - v >= y0
                p.v = v;
                p.zx = {0, 0, X};
                p.zy = {-v.a, 1 - v.b, -v.c};
                add(p);
            }
            {
                DistancePiece p;  // contact clamped to (X, y0)
                p.ndom = 4;
                p.dom[0] = free_side;
                p.dom[1] = span_lo;
                p.dom[2] = span_hi;
                p.dom[3] = {v.a, v.b - 1, v.c + y0};  // y - v <= y0
                p.v = v;
                p.zx = {0, 0, X};
                p.zy = {0, 0, y0};
                add(p);
            }
        } else {
            const Rational& Y = f.a.y;
            Rational x0 = rat_min(f.a.x, f.b.x), x1 = rat_max(f.a.x, f.b.x);
            Halfplane span_lo{1, 0, -x0}, span_hi{-1, 0, x1};
            {
                DistancePiece p;  // contact (x - v, Y)
                p.ndom = 4;
                p.dom[0] = free_side;
                p.dom[1] = span_lo;
                p.dom[2] = span_hi;
                p.dom[3] = {1 - v.a, -v.b, -v.c - x0};  // x - v >= x0
                p.v = v;
                p.zx = {1 - v.a, -v.b, -v.c};
                p.zy = {0, 0, Y};
                add(p);
            }
            {
                DistancePiece p;  // contact clamped to (x0, Y)
                p.ndom = 4;
                p.dom[0] = free_side;
                p.dom[1] = span_lo;
                p.dom[2] = span_hi;
                p.dom[3] = {v.a - 1, v.b, v.c + x0};  // x - v <= x0
                p.v = v;
                p.zx = {0, 0, x0};
                p.zy = {0, 0, Y};
                add(p);
            }
        }
    }
}

bool Engine::in_free_space(const Point& q) const {
    for (const auto& c : cycles) {
        Containment r = point_in_cycle(q, c.pts);
        if (c.outer) {
            if (r != Containment::Inside) return false;
        } else {
            if (r != Containment::Outside) return false;
        }
    }
    return true;
}

struct Interval {
    Rational lo, hi;
};

// Remove the open interval (blo, bhi) from a sorted disjoint interval list.
void subtract_open(std::vector<Interval>& ivals, const std::optional<Rational>& blo,
                   const std::optional<Rational>& bhi) {
    std::vector<Interval> out;
    for (auto& iv : ivals) {
        bool cut_lo = !blo || *blo < iv.hi;    // bad region reaches below iv.hi
        bool cut_hi = !bhi || *bhi > iv.lo;    // bad region reaches above iv.lo
        if (!cut_lo || !cut_hi) {
            out.push_back(iv);
            continue;
        }
        if (blo && *blo >= iv.lo) out.push_back({iv.lo, rat_min(*blo, iv.hi)});
        if (bhi && *bhi <= iv.hi) out.push_back({rat_max(*bhi, iv.lo), iv.hi});
    }
    ivals = std::move(out);
}

struct RawArc {
    Point a, b;
    int piece1, piece2;
    Rational la, lb, lc;  // line a x + b y + c = 0 (v1 - v2)
};

struct LineKeyLess {
    bool operator()(const std::array<Rational, 3>& p, const std::array<Rational, 3>& q) const {
        for (int i = 0; i < 3; ++i) {
            int c = cmp(p[i], q[i]);
            if (c != 0) return c < 0;
        }
        return false;
    }
};

}  // namespace

Rational nearest_site_distance(const Point& p, const std::vector<MedialFeature>& features) {
    std::optional<Rational> best;
    for (const auto& f : features) {
        Rational d = f.kind == MedialFeature::Kind::Vertex ? linf_point_point(p, f.a)
                                                           : linf_point_segment(p, {f.a, f.b});
        if (!best || d < *best) best = d;
    }
    if (!best) throw std::runtime_error("nearest_site_distance: no features");
    return *best;
}

MedialAxis compute_medial_axis_cycles(std::vector<SiteCycle> cycles) {
    Engine eng;
    eng.cycles = std::move(cycles);

    // Clip box: outer cycle bbox, slightly inflated.
    {
        const SiteCycle* outer = nullptr;
        for (const auto& c : eng.cycles)
            if (c.outer) outer = &c;
        if (!outer || outer->pts.empty())
            throw std::runtime_error("medial axis: missing outer cycle");
        Rational xlo = outer->pts[0].x, xhi = xlo, ylo = outer->pts[0].y, yhi = ylo;
        for (const auto& p : outer->pts) {
            xlo = rat_min(xlo, p.x);
            xhi = rat_max(xhi, p.x);
            ylo = rat_min(ylo, p.y);
            yhi = rat_max(yhi, p.y);
        }
        Rational pad = rat_max(xhi - xlo, yhi - ylo) / 8 + 1;
        eng.box = {xlo - pad, xhi + pad, ylo - pad, yhi + pad};
        Rational span = rat_max(eng.box.xhi - eng.box.xlo, eng.box.yhi - eng.box.ylo);
        eng.scale.factor = make_rational(std::int64_t(1) << 28) / span;
    }

    eng.build_sites();
    eng.build_pieces();
    const auto& pieces = eng.pieces;
    const auto& features = eng.features;

    // Candidate arcs from every active pair of pieces of distinct features.
    std::vector<RawArc> raw;
    std::vector<Halfplane> boxhp = {{1, 0, -eng.box.xlo},
                                    {-1, 0, eng.box.xhi},
                                    {0, 1, -eng.box.ylo},
                                    {0, -1, eng.box.yhi}};
    const std::size_t np = pieces.size();
    for (std::size_t i = 0; i < np; ++i) {
        const DistancePiece& p1 = pieces[i];
        for (std::size_t j = i + 1; j < np; ++j) {
            const DistancePiece& p2 = pieces[j];
            if (p1.feature == p2.feature) continue;
            if (p1.ulo > p2.uhi || p2.ulo > p1.uhi) continue;
            if (p1.wlo > p2.whi || p2.wlo > p1.whi) continue;

            Rational la = p1.v.a - p2.v.a, lb = p1.v.b - p2.v.b, lc = p1.v.c - p2.v.c;
            if (la == 0 && lb == 0) {
                if (lc != 0) continue;  // parallel values, never equal
                // Identical distance functions: legitimate only when the
                // domains share no interior point (collinear split edges).
                std::vector<Point> overlap = eng.box.corners();
                for (int k = 0; k < p1.ndom && !overlap.empty(); ++k)
                    overlap = clip_by_halfplane(overlap, p1.dom[k]);
                for (int k = 0; k < p2.ndom && !overlap.empty(); ++k)
                    overlap = clip_by_halfplane(overlap, p2.dom[k]);
                if (!overlap.empty() && polygon_area2(overlap) != 0)
                    throw std::runtime_error(
                        "medial axis: two-dimensional distance tie; run ensure_general_position");
                continue;
            }

            // Parametrize the bisector line.
            Point P0;
            Point Dir{-lb, la};
            if (rat_abs(la) >= rat_abs(lb))
                P0 = {-lc / la, 0};
            else
                P0 = {0, -lc / lb};

            auto clip_t = [&](const Halfplane& h, Rational& lo, Rational& hi, bool& empty) {
                Rational alpha = h.a * Dir.x + h.b * Dir.y;
                Rational beta = h.a * P0.x + h.b * P0.y + h.c;
                int s = sign(alpha);
                if (s == 0) {
                    if (beta < 0) empty = true;
                    return;
                }
                Rational bound = -beta / alpha;
                if (s > 0)
                    lo = rat_max(lo, bound);
                else
                    hi = rat_min(hi, bound);
            };

            bool empty = false;
            Rational tlo, thi;
            {
                // Seed the parameter range from the clip box corners (their
                // projections bound the line's passage through the box), then
                // clip exactly below.
                Rational norm = Dir.x * Dir.x + Dir.y * Dir.y;
                bool first = true;
                for (const auto& c : eng.box.corners()) {
                    Rational t = (Dir.x * (c.x - P0.x) + Dir.y * (c.y - P0.y)) / norm;
                    if (first) {
                        tlo = thi = t;
                        first = false;
                    } else {
                        tlo = rat_min(tlo, t);
                        thi = rat_max(thi, t);
                    }
                }
                tlo -= 1;
                thi += 1;
            }
            for (const auto& h : boxhp) clip_t(h, tlo, thi, empty);
            for (int k = 0; k < p1.ndom && !empty; ++k) clip_t(p1.dom[k], tlo, thi, empty);
            for (int k = 0; k < p2.ndom && !empty; ++k) clip_t(p2.dom[k], tlo, thi, empty);
            if (empty || tlo >= thi) continue;

            auto at = [&](const Rational& t) {
                return Point{P0.x + t * Dir.x, P0.y + t * Dir.y};
            };
            Point A = at(tlo), B = at(thi);

            // Contact identity along the line: never medial.
            if (p1.contact(A) == p2.contact(A) && p1.contact(B) == p2.contact(B)) continue;

            // Killers: every other feature can carve out one open interval.
            std::vector<Interval> ivals = {{tlo, thi}};
            Rational v_lo = p1.v.eval(A), v_hi = p1.v.eval(B);
            std::int64_t vmax = eng.scale.hi(rat_max(v_lo, v_hi));
            std::int64_t cxlo = eng.scale.lo(rat_min(A.x, B.x));
            std::int64_t cxhi = eng.scale.hi(rat_max(A.x, B.x));
            std::int64_t cylo = eng.scale.lo(rat_min(A.y, B.y));
            std::int64_t cyhi = eng.scale.hi(rat_max(A.y, B.y));

            for (std::size_t g = 0; g < features.size() && !ivals.empty(); ++g) {
                if (static_cast<int>(g) == p1.feature || static_cast<int>(g) == p2.feature)
                    continue;
                const auto& fb = eng.feature_box[g];
                std::int64_t gapx = std::max<std::int64_t>(
                    0, std::max(fb[0] - cxhi, cxlo - fb[1]));
                std::int64_t gapy = std::max<std::int64_t>(
                    0, std::max(fb[2] - cyhi, cylo - fb[3]));
                if (std::max(gapx, gapy) > vmax) continue;
                for (int pi : eng.feature_pieces[g]) {
                    const DistancePiece& p3 = pieces[pi];
                    // Bad region: p3 active and strictly closer.
                    std::optional<Rational> blo, bhi;
                    bool infeasible = false;
                    auto clip_bad = [&](const Rational& a, const Rational& b, const Rational& c) {
                        // constraint a*q.x + b*q.y + c >= 0 restricted to the line
                        Rational alpha = a * Dir.x + b * Dir.y;
                        Rational beta = a * P0.x + b * P0.y + c;
                        int s = sign(alpha);
                        if (s == 0) {
                            if (beta < 0) infeasible = true;
                            return;
                        }
                        Rational bound = -beta / alpha;
                        if (s > 0) {
                            if (!blo || bound > *blo) blo = bound;
                        } else {
                            if (!bhi || bound < *bhi) bhi = bound;
                        }
                    };
                    // v - v3 >= 0  (p3 at most as far)
                    Rational da = p1.v.a - p3.v.a, db = p1.v.b - p3.v.b, dc = p1.v.c - p3.v.c;
                    Rational alpha_v = da * Dir.x + db * Dir.y;
                    Rational beta_v = da * P0.x + db * P0.y + dc;
                    if (alpha_v == 0 && beta_v == 0) continue;  // ties along the line: no kill
                    clip_bad(da, db, dc);
                    for (int k = 0; k < p3.ndom && !infeasible; ++k)
                        clip_bad(p3.dom[k].a, p3.dom[k].b, p3.dom[k].c);
                    if (infeasible) continue;
                    if (blo && bhi && *blo >= *bhi) continue;
                    subtract_open(ivals, blo, bhi);
                    if (ivals.empty()) break;
                }
            }

            for (const auto& iv : ivals) {
                if (!(iv.lo < iv.hi)) continue;
                Point A2 = at(iv.lo), B2 = at(iv.hi);
                Point mid{(A2.x + B2.x) / 2, (A2.y + B2.y) / 2};
                if (!eng.in_free_space(mid)) continue;
                raw.push_back({A2, B2, static_cast<int>(i), static_cast<int>(j), la, lb, lc});
            }
        }
    }

    // Group collinear arcs, split at every endpoint, drop exact duplicates.
    MedialAxis out;
    out.cycles = std::move(eng.cycles);
    out.features = std::move(eng.features);
    out.pieces = std::move(eng.pieces);

    std::map<std::array<Rational, 3>, std::vector<int>, LineKeyLess> groups;
    for (std::size_t r = 0; r < raw.size(); ++r) {
        Rational a = raw[r].la, b = raw[r].lb, c = raw[r].lc;
        Rational lead = (a != 0) ? a : b;
        a /= lead;
        b /= lead;
        c /= lead;
        groups[{a, b, c}].push_back(static_cast<int>(r));
    }

    std::map<Point, int, PointLess> node_id;
    auto get_node = [&](const Point& p) {
        auto it = node_id.find(p);
        if (it != node_id.end()) return it->second;
        int id = static_cast<int>(out.graph.nodes.size());
        node_id.emplace(p, id);
        out.graph.nodes.push_back(p);
        return id;
    };

    for (auto& [key, arcs] : groups) {
        // Canonical parameter along the line.
        Point P0, Dir{-key[1], key[0]};
        if (key[0] != 0)
            P0 = {-key[2] / key[0], 0};
        else
            P0 = {0, -key[2] / key[1]};
        Rational denom = Dir.x * Dir.x + Dir.y * Dir.y;
        auto param = [&](const Point& p) -> Rational {
            return (Dir.x * (p.x - P0.x) + Dir.y * (p.y - P0.y)) / denom;
        };
        struct Span {
            Rational lo, hi;
            int rep;
        };
        std::vector<Span> spans;
        std::vector<Rational> cuts;
        for (int r : arcs) {
            Rational ta = param(raw[r].a), tb = param(raw[r].b);
            if (tb < ta) std::swap(ta, tb);
            spans.push_back({ta, tb, r});
            cuts.push_back(ta);
            cuts.push_back(tb);
        }
        std::sort(cuts.begin(), cuts.end(), RationalLess{});
        cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
        for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
            const Rational& ta = cuts[k];
            const Rational& tb = cuts[k + 1];
            Rational mid = (ta + tb) / 2;
            int rep = -1;
            for (const auto& s : spans)
                if (s.lo <= mid && mid <= s.hi) {
                    if (rep == -1 || std::min(raw[s.rep].piece1, raw[s.rep].piece2) <
                                         std::min(raw[rep].piece1, raw[rep].piece2))
                        rep = s.rep;
                }
            if (rep == -1) continue;
            Point A{P0.x + ta * Dir.x, P0.y + ta * Dir.y};
            Point B{P0.x + tb * Dir.x, P0.y + tb * Dir.y};
            int u = get_node(A), v = get_node(B);
            if (u == v) continue;
            out.graph.arcs.push_back({u, v, raw[rep].piece1, raw[rep].piece2});
        }
    }

    out.graph.incident.assign(out.graph.nodes.size(), {});
    for (std::size_t a = 0; a < out.graph.arcs.size(); ++a) {
        out.graph.incident[out.graph.arcs[a].u].push_back(static_cast<int>(a));
        out.graph.incident[out.graph.arcs[a].v].push_back(static_cast<int>(a));
    }
    out.rebuild_chains();
    return out;
}

void MedialAxis::rebuild_chains() {
    chains.clear();
    const auto& g = graph;
    std::vector<bool> used(g.arcs.size(), false);

    auto owners_of = [&](int piece) { return features[pieces[piece].feature].owners; };
    auto make_chain = [&](std::vector<int> path, std::vector<int> arc_ids, bool closed) {
        MedialChain c;
        c.node_path = std::move(path);
        c.arc_ids = std::move(arc_ids);
        c.closed = closed;
        c.contact_owners = {owners_of(g.arcs[c.arc_ids.front()].piece1),
                            owners_of(g.arcs[c.arc_ids.front()].piece2)};
        for (int a : c.arc_ids) {
            auto o1 = owners_of(g.arcs[a].piece1);
            auto o2 = owners_of(g.arcs[a].piece2);
            std::vector<int> both;
            std::set_intersection(o1.begin(), o1.end(), o2.begin(), o2.end(),
                                  std::back_inserter(both));
            for (int o : both)
                if (o >= 0) c.same_polygon_bridge = true;
        }
        chains.push_back(std::move(c));
    };

    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (g.degree(static_cast<int>(v)) == 2) continue;
        for (int a0 : g.incident[v]) {
            if (used[a0]) continue;
            std::vector<int> path = {static_cast<int>(v)};
            std::vector<int> arc_ids;
            int cur = static_cast<int>(v);
            int arc = a0;
            while (true) {
                used[arc] = true;
                arc_ids.push_back(arc);
                cur = g.other_end(arc, cur);
                path.push_back(cur);
                if (g.degree(cur) != 2) break;
                int nxt = g.incident[cur][0] == arc ? g.incident[cur][1] : g.incident[cur][0];
                arc = nxt;
            }
            make_chain(std::move(path), std::move(arc_ids), false);
        }
    }
    // Leftover pure cycles.
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
        if (used[a]) continue;
        int start = g.arcs[a].u;
        // Deterministic: start at the lexicographically smallest node on the cycle.
        {
            int cur = g.arcs[a].u;
            int arc = static_cast<int>(a);
            int best = cur;
            do {
                cur = g.other_end(arc, cur);
                if (lex_less(g.nodes[cur], g.nodes[best])) best = cur;
                arc = g.incident[cur][0] == arc ? g.incident[cur][1] : g.incident[cur][0];
            } while (cur != g.arcs[a].u);
            start = best;
        }
        std::vector<int> path = {start};
        std::vector<int> arc_ids;
        int cur = start;
        int arc = g.incident[start][0];
        while (true) {
            used[arc] = true;
            arc_ids.push_back(arc);
            cur = g.other_end(arc, cur);
            path.push_back(cur);
            if (cur == start) break;
            arc = g.incident[cur][0] == arc ? g.incident[cur][1] : g.incident[cur][0];
        }
        make_chain(std::move(path), std::move(arc_ids), true);
    }
}

MedialAxis compute_medial_axis(const WeightedInstance& inst, const std::vector<int>& subset) {
    for (std::size_t i = 0; i < subset.size(); ++i)
        for (std::size_t j = i + 1; j < subset.size(); ++j)
            if (boundary_crossings(inst.polygons[subset[i]], inst.polygons[subset[j]]) > 0)
                throw std::runtime_error(
                    "compute_medial_axis: subset polygons intersect; use the per-face "
                    "decomposition");

    std::vector<SiteCycle> cycles;
    {
        SiteCycle frame;
        frame.pts = inst.frame.cycle();
        frame.owners.assign(4, {-1});
        frame.outer = true;
        frame.omit_corner_sites = true;
        cycles.push_back(std::move(frame));
    }
    for (int id : subset) {
        const auto& poly = inst.polygons[id];
        SiteCycle c;
        c.pts.assign(poly.vertices.rbegin(), poly.vertices.rend());  // CW: free on the left
        c.owners.assign(poly.size(), {id});
        cycles.push_back(std::move(c));
    }
    return compute_medial_axis_cycles(std::move(cycles));
}

ReducedMedialAxis prune_tendrils(const MedialAxis& m) {
    const auto& g = m.graph;
    std::vector<int> degree(g.nodes.size());
    std::vector<bool> dead(g.arcs.size(), false);
    for (std::size_t v = 0; v < g.nodes.size(); ++v) degree[v] = g.degree(static_cast<int>(v));

    std::vector<int> stack;
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (degree[v] == 1) stack.push_back(static_cast<int>(v));
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        if (degree[v] != 1) continue;
        for (int a : g.incident[v]) {
            if (dead[a]) continue;
            dead[a] = true;
            degree[v] = 0;
            int u = g.other_end(a, v);
            if (--degree[u] == 1) stack.push_back(u);
            break;
        }
    }

    ReducedMedialAxis out;
    out.axis.cycles = m.cycles;
    out.axis.features = m.features;
    out.axis.pieces = m.pieces;
    std::vector<int> remap(g.nodes.size(), -1);
    for (std::size_t a = 0; a < g.arcs.size(); ++a) {
        if (dead[a]) continue;
        const auto& arc = g.arcs[a];
        for (int end : {arc.u, arc.v})
            if (remap[end] == -1) {
                remap[end] = static_cast<int>(out.axis.graph.nodes.size());
                out.axis.graph.nodes.push_back(g.nodes[end]);
            }
        out.axis.graph.arcs.push_back({remap[arc.u], remap[arc.v], arc.piece1, arc.piece2});
    }
    out.axis.graph.incident.assign(out.axis.graph.nodes.size(), {});
    for (std::size_t a = 0; a < out.axis.graph.arcs.size(); ++a) {
        out.axis.graph.incident[out.axis.graph.arcs[a].u].push_back(static_cast<int>(a));
        out.axis.graph.incident[out.axis.graph.arcs[a].v].push_back(static_cast<int>(a));
    }
    out.axis.rebuild_chains();
    return out;
}

namespace {

struct ContactEval {
    Rational radius;
    std::vector<BranchContact> contacts;
};

ContactEval evaluate_contacts(const Point& p, const MedialAxis& axis) {
    std::optional<Rational> best;
    for (const auto& piece : axis.pieces) {
        bool in = true;
        for (int k = 0; k < piece.ndom && in; ++k)
            if (piece.dom[k].eval(p) < 0) in = false;
        if (!in) continue;
        Rational v = piece.v.eval(p);
        if (!best || v < *best) best = v;
    }
    if (!best) throw std::runtime_error("contact evaluation: no active piece");
    ContactEval out;
    out.radius = *best;
    std::map<Point, BranchContact, PointLess> by_point;
    for (const auto& piece : axis.pieces) {
        bool in = true;
        for (int k = 0; k < piece.ndom && in; ++k)
            if (piece.dom[k].eval(p) < 0) in = false;
        if (!in) continue;
        if (piece.v.eval(p) != *best) continue;
        Point z = piece.contact(p);
        auto it = by_point.find(z);
        const auto& f = axis.features[piece.feature];
        if (it == by_point.end()) {
            BranchContact c;
            c.z = z;
            c.owners = f.owners;
            c.feature = piece.feature;
            c.cycle = f.cycle;
            by_point.emplace(z, std::move(c));
        } else {
            for (int o : f.owners)
                if (!std::binary_search(it->second.owners.begin(), it->second.owners.end(), o)) {
                    it->second.owners.push_back(o);
                    std::sort(it->second.owners.begin(), it->second.owners.end());
                }
        }
    }
    for (auto& [z, c] : by_point) out.contacts.push_back(c);
    return out;
}

}  // namespace

std::vector<BranchVertex> branch_vertices(const ReducedMedialAxis& m) {
    const auto& g = m.axis.graph;
    std::vector<BranchVertex> out;

    // Union-find over nodes for component analysis.
    std::vector<int> parent(g.nodes.size());
    for (std::size_t i = 0; i < parent.size(); ++i) parent[i] = static_cast<int>(i);
    std::function<int(int)> find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    for (const auto& arc : g.arcs) parent[find(arc.u)] = find(arc.v);

    std::set<int> comp_with_branch;
    for (std::size_t v = 0; v < g.nodes.size(); ++v) {
        if (g.degree(static_cast<int>(v)) < 3) continue;
        comp_with_branch.insert(find(static_cast<int>(v)));
        auto eval = evaluate_contacts(g.nodes[v], m.axis);
        BranchVertex bv;
        bv.node = static_cast<int>(v);
        bv.p = g.nodes[v];
        bv.radius = eval.radius;
        bv.contacts = std::move(eval.contacts);
        out.push_back(std::move(bv));
    }

    // Annulus rule: a component that is a pure cycle gets one artificial
    // vertex whose two spokes slit the annulus open.
    std::map<int, std::vector<int>> comp_nodes;
    for (std::size_t v = 0; v < g.nodes.size(); ++v)
        if (g.degree(static_cast<int>(v)) > 0) comp_nodes[find(static_cast<int>(v))].push_back(static_cast<int>(v));
    for (auto& [root, nodes] : comp_nodes) {
        if (comp_with_branch.count(root)) continue;
        std::sort(nodes.begin(), nodes.end(), [&](int a, int b) {
            return lex_less(g.nodes[a], g.nodes[b]);
        });
        const BranchContact* island_pick = nullptr;
        const BranchContact* outer_pick = nullptr;
        int chosen = -1;
        ContactEval chosen_eval;
        for (int v : nodes) {
            auto eval = evaluate_contacts(g.nodes[v], m.axis);
            const BranchContact* island = nullptr;
            const BranchContact* outer = nullptr;
            for (const auto& c : eval.contacts) {
                bool on_outer = m.axis.cycles[c.cycle].outer;
                if (on_outer && !outer) outer = &c;
                if (!on_outer && !island) island = &c;
            }
            if (island && outer) {
                chosen = v;
                chosen_eval = eval;
                island_pick = island;
                outer_pick = outer;
                break;
            }
        }
        if (chosen == -1) {
            // Fall back to the lexicographically smallest node with two contacts.
            chosen = nodes.front();
            chosen_eval = evaluate_contacts(g.nodes[chosen], m.axis);
            if (chosen_eval.contacts.size() < 2)
                throw std::runtime_error("annulus rule: node with fewer than 2 contacts");
            island_pick = &chosen_eval.contacts[0];
            outer_pick = &chosen_eval.contacts[1];
        }
        BranchVertex bv;
        bv.node = chosen;
        bv.p = g.nodes[chosen];
        bv.radius = chosen_eval.radius;
        bv.contacts = {*island_pick, *outer_pick};
        bv.artificial = true;
        out.push_back(std::move(bv));
    }

    std::sort(out.begin(), out.end(),
              [](const BranchVertex& a, const BranchVertex& b) { return lex_less(a.p, b.p); });
    return out;
}

std::vector<Spoke> emit_spokes(const std::vector<BranchVertex>& vertices,
                               const std::vector<SiteCycle>& cycles) {
    std::vector<Spoke> spokes;
    for (std::size_t vi = 0; vi < vertices.size(); ++vi) {
        const auto& bv = vertices[vi];
        for (std::size_t ci = 0; ci < bv.contacts.size(); ++ci) {
            const auto& c = bv.contacts[ci];
            if (c.z == bv.p) continue;  // zero-length spoke cannot happen for r > 0
            spokes.push_back({{bv.p, c.z}, static_cast<int>(vi), static_cast<int>(ci)});
        }
    }
    for (const auto& s : spokes)
        for (const auto& cyc : cycles)
            for (std::size_t e = 0; e < cyc.pts.size(); ++e) {
                Segment edge{cyc.pts[e], cyc.pts[(e + 1) % cyc.pts.size()]};
                if (segments_cross_properly(s.seg, edge))
                    throw std::runtime_error("spoke crosses a site edge: upstream bug");
            }
    return spokes;
}

}  // namespace corridors
