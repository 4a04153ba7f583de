#include "corridors/corridor.hpp"

#include <algorithm>
#include <atomic>
#include <set>
#include <sstream>
#include <stdexcept>

namespace corridors {

namespace {

std::atomic<long> g_tiling_violations{0};

std::vector<Point> canonical_cell(std::vector<Point> walk) {
    // Drop pass-through collinear vertices (same direction on both sides).
    bool changed = true;
    while (changed && walk.size() > 3) {
        changed = false;
        std::vector<Point> next;
        std::size_t n = walk.size();
        for (std::size_t i = 0; i < n; ++i) {
            const Point& prev = walk[(i + n - 1) % n];
            const Point& cur = walk[i];
            const Point& nxt = walk[(i + 1) % n];
            if (orient(prev, cur, nxt) == 0) {
                Rational dot = (cur.x - prev.x) * (nxt.x - cur.x) +
                               (cur.y - prev.y) * (nxt.y - cur.y);
                if (dot > 0) {
                    changed = true;
                    continue;  // pass-through point
                }
            }
            next.push_back(cur);
        }
        walk = std::move(next);
    }
    // Rotate to the lexicographically smallest sequence.
    std::size_t n = walk.size();
    std::size_t best = 0;
    for (std::size_t s = 1; s < n; ++s) {
        for (std::size_t k = 0; k < n; ++k) {
            const Point& a = walk[(s + k) % n];
            const Point& b = walk[(best + k) % n];
            if (a == b) continue;
            if (lex_less(a, b)) best = s;
            break;
        }
    }
    std::vector<Point> rot;
    rot.reserve(n);
    for (std::size_t k = 0; k < n; ++k) rot.push_back(walk[(best + k) % n]);
    return rot;
}

Rational walk_area2(const std::vector<Point>& walk) {
    Rational s = 0;
    for (std::size_t i = 0; i < walk.size(); ++i) {
        const Point& a = walk[i];
        const Point& b = walk[(i + 1) % walk.size()];
        s += a.x * b.y - b.x * a.y;
    }
    return s;
}

std::string corridor_key(const Corridor& c) {
    std::ostringstream os;
    if (c.covered) {
        os << "C|";
        for (int id : c.cover) os << id << ",";
    } else {
        os << "D[";
        for (int id : c.defining) os << id << ",";
        os << "]|V[";
        std::vector<std::string> vs;
        for (const auto& gv : c.gen_vertices)
            vs.push_back(format_point(gv.p) + "r" + format_rational(gv.radius));
        std::sort(vs.begin(), vs.end());
        for (const auto& s : vs) os << s << ";";
        os << "]|S[";
        std::vector<std::string> ss;
        for (const auto& sp : c.spokes)
            ss.push_back(format_point(sp.first) + "-" + format_point(sp.second));
        std::sort(ss.begin(), ss.end());
        for (const auto& s : ss) os << s << ";";
        os << "]";
    }
    os << "|A" << (c.cell.empty() ? std::string("()") : format_point(c.cell.front()));
    os << "|a" << format_rational(c.area);
    return os.str();
}

struct FaceDecomp {
    std::vector<BranchVertex> vertices;
    std::vector<Spoke> spokes;
    int reduced_edges = 0;
};

// Branch structure of one free region given by site cycles.
FaceDecomp decompose_region(std::vector<SiteCycle> cycles, DecompositionStats& stats) {
    FaceDecomp out;
    MedialAxis m = compute_medial_axis_cycles(std::move(cycles));
    ReducedMedialAxis red = prune_tendrils(m);
    out.vertices = branch_vertices(red);
    out.spokes = emit_spokes(out.vertices, red.axis.cycles);

    // Chains of the reduced graph, counting annulus slit vertices as nodes.
    std::set<int> split_nodes;
    for (const auto& bv : out.vertices) split_nodes.insert(bv.node);
    for (const auto& chain : red.axis.chains) {
        if (!chain.closed) {
            ++out.reduced_edges;
        } else {
            int marks = 0;
            for (std::size_t i = 0; i + 1 < chain.node_path.size(); ++i)
                if (split_nodes.count(chain.node_path[i])) ++marks;
            out.reduced_edges += std::max(marks, 1);
        }
        if (chain.same_polygon_bridge) {
            if (std::find(stats.flags.begin(), stats.flags.end(), "same-polygon-bridge") ==
                stats.flags.end())
                stats.flags.push_back("same-polygon-bridge");
        }
    }
    return out;
}

CorridorDecomposition assemble(const WeightedInstance& inst, std::vector<int> subset,
                               std::vector<BranchVertex> vertices, std::vector<Spoke> spokes,
                               DecompositionStats stats) {
    CorridorDecomposition out;
    out.subset = std::move(subset);
    out.vertices = std::move(vertices);
    out.spokes = std::move(spokes);
    out.stats = std::move(stats);

    std::vector<InputSegment> segs;
    for (int id : out.subset) {
        const auto& poly = inst.polygons[id];
        for (std::size_t e = 0; e < poly.size(); ++e)
            segs.push_back({poly.edge(e), {EdgeTag::Kind::PolygonEdge, id, static_cast<int>(e), -1}});
    }
    for (std::size_t e = 0; e < 4; ++e)
        segs.push_back({inst.frame.edge(e), {EdgeTag::Kind::FrameEdge, -1, static_cast<int>(e), -1}});
    for (std::size_t s = 0; s < out.spokes.size(); ++s)
        segs.push_back({out.spokes[s].seg, {EdgeTag::Kind::Spoke, -1, -1, static_cast<int>(s)}});

    out.subdivision = std::make_shared<PlanarSubdivision>();
    out.subdivision->build(segs);
    const auto& sub = *out.subdivision;

    Rational free_area = 0, covered_area = 0;
    for (std::size_t f = 0; f < sub.faces().size(); ++f) {
        const auto& face = sub.faces()[f];
        if (face.unbounded || !face.inside_frame) continue;

        Corridor c;
        c.face_id = static_cast<int>(f);
        c.covered = !face.cover.empty();
        c.cover = face.cover;
        if (!face.hole_orbits.empty())
            throw std::runtime_error("corridor cell with a hole: upstream connectivity bug");

        std::vector<Point> walk = sub.orbit_points(face.outer_orbit);
        c.cell = canonical_cell(std::move(walk));
        c.area = walk_area2(c.cell) / 2;
        c.bbox_xlo = c.cell[0].x;
        c.bbox_xhi = c.cell[0].x;
        c.bbox_ylo = c.cell[0].y;
        c.bbox_yhi = c.cell[0].y;
        for (const auto& p : c.cell) {
            c.bbox_xlo = rat_min(c.bbox_xlo, p.x);
            c.bbox_xhi = rat_max(c.bbox_xhi, p.x);
            c.bbox_ylo = rat_min(c.bbox_ylo, p.y);
            c.bbox_yhi = rat_max(c.bbox_yhi, p.y);
        }

        if (!c.covered) {
            // Boundary classification: spokes and chains.
            std::set<int> spoke_ids;
            const auto& orbit = sub.orbit_halfedges(face.outer_orbit);
            int cur_owner = -2;
            std::vector<Point> cur_chain;
            auto flush = [&]() {
                if (cur_owner != -2 && cur_chain.size() >= 2)
                    c.chains.emplace_back(cur_owner, cur_chain);
                cur_owner = -2;
                cur_chain.clear();
            };
            for (int h : orbit) {
                const auto& he = sub.half_edges()[h];
                const auto& tags = sub.sub_edges()[he.sub].tags;
                int spoke_id = -1, owner = -2;
                for (const auto& tag : tags) {
                    if (tag.kind == EdgeTag::Kind::Spoke && spoke_id == -1) spoke_id = tag.spoke_id;
                    if (tag.kind != EdgeTag::Kind::Spoke && owner == -2) owner = tag.owner;
                }
                if (spoke_id >= 0) {
                    flush();
                    spoke_ids.insert(spoke_id);
                } else {
                    const Point& a = sub.vertices()[he.from];
                    const Point& b = sub.vertices()[he.to];
                    if (owner != cur_owner) {
                        flush();
                        cur_owner = owner;
                        cur_chain = {a, b};
                    } else {
                        cur_chain.push_back(b);
                    }
                }
            }
            flush();
            // Merge a wrapped chain (last run continuing into the first).
            if (c.chains.size() >= 2 && c.chains.front().first == c.chains.back().first) {
                auto& first = c.chains.front().second;
                auto& last = c.chains.back().second;
                if (last.back() == first.front()) {
                    last.insert(last.end(), first.begin() + 1, first.end());
                    first = std::move(last);
                    c.chains.pop_back();
                }
            }

            std::set<int> gen_nodes;
            for (int sid : spoke_ids) {
                const Spoke& sp = out.spokes[sid];
                c.spokes.emplace_back(sp.seg.a, sp.seg.b);
                gen_nodes.insert(sp.vertex_index);
            }
            std::sort(c.spokes.begin(), c.spokes.end(),
                      [](const std::pair<Point, Point>& a, const std::pair<Point, Point>& b) {
                          if (!(a.first == b.first)) return lex_less(a.first, b.first);
                          return lex_less(a.second, b.second);
                      });
            std::set<int> defining;
            for (int vi : gen_nodes) {
                const auto& bv = out.vertices[vi];
                c.gen_vertices.push_back({bv.p, bv.radius});
                for (const auto& contact : bv.contacts)
                    for (int o : contact.owners)
                        if (o >= 0) defining.insert(o);
            }
            std::sort(c.gen_vertices.begin(), c.gen_vertices.end(),
                      [](const Corridor::GenVertex& a, const Corridor::GenVertex& b) {
                          return lex_less(a.p, b.p);
                      });
            c.defining.assign(defining.begin(), defining.end());

            if (static_cast<int>(c.defining.size()) > 4) out.stats.flags.push_back("defining>4");
            if (static_cast<int>(gen_nodes.size()) > 2) out.stats.flags.push_back("genverts>2");
            int poly_chains = 0;
            for (const auto& ch : c.chains)
                if (ch.first >= 0) ++poly_chains;
            if (poly_chains > 2) out.stats.flags.push_back("chains>2");
            if (c.spokes.size() > 4) out.stats.flags.push_back("spokes>4");
        }

        c.key = corridor_key(c);
        if (c.covered) {
            covered_area += c.area;
            out.covered_cells.push_back(std::move(c));
        } else {
            free_area += c.area;
            out.corridors.push_back(std::move(c));
        }
    }

    out.stats.corridor_count = static_cast<int>(out.corridors.size());
    out.stats.covered_count = static_cast<int>(out.covered_cells.size());
    out.stats.branch_vertex_count = static_cast<int>(out.vertices.size());

    // Exact tiling audit: free + covered cells partition the frame.
    Rational frame_area = SimplePolygon{inst.frame.cycle()}.area();
    if (free_area + covered_area != frame_area) {
        ++g_tiling_violations;
        throw std::runtime_error("corridor decomposition: tiling audit failed");
    }
    return out;
}

}  // namespace

long tiling_violation_count() { return g_tiling_violations.load(); }

const Corridor* CorridorDecomposition::find_by_key(const std::string& key) const {
    for (const auto& c : corridors)
        if (c.key == key) return &c;
    for (const auto& c : covered_cells)
        if (c.key == key) return &c;
    return nullptr;
}

CorridorDecomposition corridor_decomposition(const WeightedInstance& inst,
                                             const std::vector<int>& subset) {
    std::vector<int> ids = subset;
    std::sort(ids.begin(), ids.end());

    DecompositionStats stats;
    stats.disjoint_mode = true;

    std::vector<SiteCycle> cycles;
    {
        SiteCycle frame;
        frame.pts = inst.frame.cycle();
        frame.owners.assign(4, {-1});
        frame.outer = true;
        frame.omit_corner_sites = true;
        cycles.push_back(std::move(frame));
    }
    for (int id : ids) {
        const auto& poly = inst.polygons[id];
        SiteCycle c;
        c.pts.assign(poly.vertices.rbegin(), poly.vertices.rend());
        c.owners.assign(poly.size(), {id});
        cycles.push_back(std::move(c));
    }
    for (std::size_t i = 0; i < ids.size(); ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j)
            if (boundary_crossings(inst.polygons[ids[i]], inst.polygons[ids[j]]) > 0)
                throw std::runtime_error(
                    "corridor_decomposition: polygons intersect; use corridor_decomposition_general");

    FaceDecomp fd = decompose_region(std::move(cycles), stats);
    stats.reduced_edge_count = fd.reduced_edges;
    return assemble(inst, ids, std::move(fd.vertices), std::move(fd.spokes), std::move(stats));
}

CorridorDecomposition corridor_decomposition_general(const WeightedInstance& inst,
                                                     const std::vector<int>& subset) {
    std::vector<int> ids = subset;
    std::sort(ids.begin(), ids.end());

    bool disjoint = true;
    int t = 0;
    for (std::size_t i = 0; i < ids.size() && disjoint; ++i)
        for (std::size_t j = i + 1; j < ids.size(); ++j) {
            int c = boundary_crossings(inst.polygons[ids[i]], inst.polygons[ids[j]]);
            t += c;
            if (c > 0) {
                disjoint = false;
                break;
            }
        }
    if (disjoint) return corridor_decomposition(inst, ids);

    DecompositionStats stats;
    stats.disjoint_mode = false;

    ArrangementSummary arr = build_arrangement(inst, ids);
    stats.t = arr.t;
    const auto& sub = *arr.subdivision;

    std::vector<BranchVertex> vertices;
    std::vector<Spoke> spokes;
    int reduced_edges = 0;
    for (const auto& face : arr.faces) {
        // Site cycles straight from the face orbits: free region on the left.
        std::vector<SiteCycle> cycles;
        auto cycle_from_orbit = [&](int orbit, bool outer) {
            SiteCycle c;
            c.outer = outer;
            bool all_frame = true;
            for (int h : sub.orbit_halfedges(orbit)) {
                const auto& he = sub.half_edges()[h];
                c.pts.push_back(sub.vertices()[he.from]);
                std::vector<int> owners;
                for (const auto& tag : sub.sub_edges()[he.sub].tags) {
                    if (tag.kind == EdgeTag::Kind::PolygonEdge) {
                        owners.push_back(tag.owner);
                        all_frame = false;
                    } else if (tag.kind == EdgeTag::Kind::FrameEdge) {
                        owners.push_back(-1);
                    }
                }
                std::sort(owners.begin(), owners.end());
                owners.erase(std::unique(owners.begin(), owners.end()), owners.end());
                c.owners.push_back(std::move(owners));
            }
            c.omit_corner_sites = all_frame;
            return c;
        };
        const auto& frec = sub.faces()[face.face_id];
        cycles.push_back(cycle_from_orbit(frec.outer_orbit, true));
        for (int ho : frec.hole_orbits) cycles.push_back(cycle_from_orbit(ho, false));

        FaceDecomp fd = decompose_region(std::move(cycles), stats);
        reduced_edges += fd.reduced_edges;
        int base = static_cast<int>(vertices.size());
        for (auto& sp : fd.spokes) {
            sp.vertex_index += base;
            spokes.push_back(sp);
        }
        for (auto& bv : fd.vertices) vertices.push_back(std::move(bv));
    }
    stats.reduced_edge_count = reduced_edges;
    return assemble(inst, ids, std::move(vertices), std::move(spokes), std::move(stats));
}

const CorridorDecomposition& DecompCache::get(const WeightedInstance& inst,
                                              std::vector<int> subset) {
    std::sort(subset.begin(), subset.end());
    auto it = map_.find(subset);
    if (it != map_.end()) return *it->second;
    auto decomp = std::make_shared<CorridorDecomposition>(
        corridor_decomposition_general(inst, subset));
    auto [pos, inserted] = map_.emplace(subset, std::move(decomp));
    return *pos->second;
}

namespace {

Rational linf_point_to_polygon_boundary(const Point& p, const SimplePolygon& poly) {
    std::optional<Rational> best;
    for (std::size_t e = 0; e < poly.size(); ++e) {
        Rational d = linf_point_segment(p, poly.edge(e));
        if (!best || d < *best) best = d;
    }
    return *best;
}

bool polygon_region_meets_cell(const SimplePolygon& poly, const Corridor& c) {
    for (std::size_t e = 0; e < poly.size(); ++e) {
        Segment pe = poly.edge(e);
        for (std::size_t i = 0; i < c.cell.size(); ++i) {
            Segment ce{c.cell[i], c.cell[(i + 1) % c.cell.size()]};
            if (segment_intersection(pe, ce).kind != SegIntersection::Kind::Empty) return true;
        }
    }
    if (point_in_cycle(poly.vertices[0], c.cell) != Containment::Outside) return true;
    if (point_in_polygon(c.cell[0], poly) != Containment::Outside) return true;
    return false;
}

// Boundary-crossing semantics for covered cells: does the polygon's boundary
// meet the cell's interior?
bool polygon_boundary_enters_cell(const SimplePolygon& poly, const Corridor& c) {
    for (std::size_t e = 0; e < poly.size(); ++e) {
        Segment pe = poly.edge(e);
        for (std::size_t i = 0; i < c.cell.size(); ++i) {
            Segment ce{c.cell[i], c.cell[(i + 1) % c.cell.size()]};
            if (segments_cross_properly(pe, ce)) return true;
        }
    }
    for (const auto& v : poly.vertices)
        if (point_in_cycle(v, c.cell) == Containment::Inside) return true;
    return false;
}

bool bbox_gap_exceeds(const Corridor& c, const SimplePolygon& poly, const Rational& r) {
    Rational pxlo = poly.vertices[0].x, pxhi = pxlo, pylo = poly.vertices[0].y, pyhi = pylo;
    for (const auto& v : poly.vertices) {
        pxlo = rat_min(pxlo, v.x);
        pxhi = rat_max(pxhi, v.x);
        pylo = rat_min(pylo, v.y);
        pyhi = rat_max(pyhi, v.y);
    }
    Rational gx = rat_max(rat_max(c.bbox_xlo - pxhi, pxlo - c.bbox_xhi), Rational(0));
    Rational gy = rat_max(rat_max(c.bbox_ylo - pyhi, pylo - c.bbox_yhi), Rational(0));
    return rat_max(gx, gy) > r;
}

}  // namespace

std::vector<int> conflict_list(const Corridor& c, const WeightedInstance& inst,
                               const std::vector<int>& universe, ConflictMode mode,
                               DecompCache& cache) {
    std::vector<int> out;
    for (int sigma : universe) {
        if (std::binary_search(c.defining.begin(), c.defining.end(), sigma)) continue;
        const auto& poly = inst.polygons[sigma];

        if (c.covered) {
            if (std::binary_search(c.cover.begin(), c.cover.end(), sigma)) continue;
            if (polygon_boundary_enters_cell(poly, c)) out.push_back(sigma);
            continue;
        }

        // Fast path shared by both modes: a polygon meeting the cell conflicts.
        Rational reach = 0;
        for (const auto& gv : c.gen_vertices) reach = rat_max(reach, gv.radius);
        bool decided = false, conflicts = false;
        if (bbox_gap_exceeds(c, poly, reach)) {
            // Too far to meet the cell or any critical square.
            decided = true;
            conflicts = false;
        } else if (polygon_region_meets_cell(poly, c)) {
            decided = true;
            conflicts = true;
        } else if (mode == ConflictMode::Fast) {
            decided = true;
            for (const auto& gv : c.gen_vertices) {
                Rational d = linf_point_to_polygon_boundary(gv.p, poly);
                if (point_in_polygon(gv.p, poly) != Containment::Outside) d = 0;
                int cmp_r = cmp(d, gv.radius);
                if (cmp_r < 0) {
                    conflicts = true;
                    break;
                }
                if (cmp_r == 0) {
                    decided = false;  // exact tie: literal fallback
                    break;
                }
            }
        }
        if (!decided) {
            std::vector<int> with = c.defining;
            with.push_back(sigma);
            const auto& redo = cache.get(inst, with);
            conflicts = redo.find_by_key(c.key) == nullptr;
        }
        if (conflicts) out.push_back(sigma);
    }
    return out;
}

ClarksonShorReport check_cs_conditions(
    const std::vector<std::vector<int>>& subsets,
    const std::map<std::string, std::pair<std::vector<int>, std::vector<int>>>& family,
    const std::map<std::vector<int>, std::vector<std::string>>& cells_of_subset) {
    ClarksonShorReport rep;
    rep.subsets_checked = static_cast<int>(subsets.size());
    rep.corridors_checked = static_cast<int>(family.size());
    auto subset_of = [](const std::vector<int>& a, const std::vector<int>& b) {
        return std::includes(b.begin(), b.end(), a.begin(), a.end());
    };
    auto disjoint_with = [](const std::vector<int>& a, const std::vector<int>& b) {
        std::vector<int> tmp;
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(tmp));
        return tmp.empty();
    };
    for (const auto& S : subsets) {
        const auto& cells = cells_of_subset.at(S);
        std::set<std::string> present(cells.begin(), cells.end());
        for (const auto& key : cells) {
            const auto& [D, K] = family.at(key);
            if (!subset_of(D, S))
                rep.violations.push_back("(i) defining set not within sample for " + key);
            if (!disjoint_with(K, S))
                rep.violations.push_back("(i) conflict polygon present in sample for " + key);
        }
        for (const auto& [key, dk] : family) {
            if (!subset_of(dk.first, S) || !disjoint_with(dk.second, S)) continue;
            if (!present.count(key))
                rep.violations.push_back("(ii) corridor missing from sample decomposition: " + key);
        }
    }
    return rep;
}

ClarksonShorReport verify_clarkson_shor(const WeightedInstance& inst,
                                        const std::vector<int>& universe) {
    if (universe.size() > 8)
        throw std::runtime_error("verify_clarkson_shor: universe larger than 8 refused");
    std::vector<int> ids = universe;
    std::sort(ids.begin(), ids.end());

    DecompCache cache;
    std::vector<std::vector<int>> subsets;
    std::map<std::vector<int>, std::vector<std::string>> cells_of_subset;
    std::map<std::string, std::pair<std::vector<int>, std::vector<int>>> family;

    for (std::size_t mask = 0; mask < (std::size_t(1) << ids.size()); ++mask) {
        std::vector<int> S;
        for (std::size_t b = 0; b < ids.size(); ++b)
            if (mask & (std::size_t(1) << b)) S.push_back(ids[b]);
        const auto& decomp = cache.get(inst, S);
        std::vector<std::string> keys;
        for (const auto& c : decomp.corridors) keys.push_back(c.key);
        cells_of_subset[S] = keys;
        for (const auto& c : decomp.corridors)
            if (!family.count(c.key)) family.emplace(c.key, std::make_pair(c.defining, std::vector<int>{}));
        subsets.push_back(std::move(S));
    }
    for (auto& [key, dk] : family) {
        // Literal stopping set over the whole universe.
        const Corridor* c = nullptr;
        const auto& owner_decomp = cache.get(inst, dk.first);
        c = owner_decomp.find_by_key(key);
        if (c == nullptr) {
            // Corridor not reproduced by its own defining set: a direct
            // violation of the locality property.
            ClarksonShorReport rep;
            rep.violations.push_back("corridor not reproduced by its defining set: " + key);
            return rep;
        }
        for (int sigma : ids) {
            if (std::binary_search(dk.first.begin(), dk.first.end(), sigma)) continue;
            std::vector<int> with = dk.first;
            with.push_back(sigma);
            std::sort(with.begin(), with.end());
            if (cache.get(inst, with).find_by_key(key) == nullptr) dk.second.push_back(sigma);
        }
    }
    return check_cs_conditions(subsets, family, cells_of_subset);
}

}  // namespace corridors
