#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <vector>

#include "corridors/geom.hpp"

namespace corridors {

// A boundary cycle of the region being decomposed, with free space on the
// LEFT of every directed edge. For the disjoint-polygon case the outer cycle
// is the frame (CCW) and each polygon boundary appears reversed (CW). For the
// per-face case the cycles come straight from the arrangement face orbits.
struct SiteCycle {
    std::vector<Point> pts;                  // pts[i] -> pts[(i+1) % n]
    std::vector<std::vector<int>> owners;    // per edge, sorted polygon ids (-1 = frame)
    bool outer = false;
    bool omit_corner_sites = false;          // set for the axis-parallel frame
};

struct MedialFeature {
    enum class Kind { Vertex, Edge } kind = Kind::Vertex;
    Point a, b;                  // Vertex uses a; Edge runs a -> b, free side on the left
    std::vector<int> owners;     // sorted, -1 = frame
    int cycle = -1;
    bool axis_parallel = false;  // frame edges only
};

struct AffineScalar {
    Rational a, b, c;  // a x + b y + c
    Rational eval(const Point& p) const { return a * p.x + b * p.y + c; }
};

struct Halfplane {
    Rational a, b, c;  // a x + b y + c >= 0
    Rational eval(const Point& p) const { return a * p.x + b * p.y + c; }
};

// One linear regime of a feature's Chebyshev distance function: value and
// contact point are affine in the query point over a convex domain.
struct DistancePiece {
    int feature = -1;
    std::array<Halfplane, 4> dom;
    int ndom = 0;
    AffineScalar v;
    AffineScalar zx, zy;
    std::int64_t ulo = 0, uhi = 0, wlo = 0, whi = 0;  // scaled (x+y, x-y) bounds
    std::int64_t xlo = 0, xhi = 0, ylo = 0, yhi = 0;  // scaled bbox of the domain
    bool dropped = false;

    Point contact(const Point& q) const { return {zx.eval(q), zy.eval(q)}; }
};

struct MedialArc {
    int u = -1, v = -1;          // node ids
    int piece1 = -1, piece2 = -1;  // representative defining pieces
};

// Straight-segment level medial-axis graph. Arcs are pairwise interior
// disjoint and meet only at shared nodes.
struct MedialGraph {
    std::vector<Point> nodes;
    std::vector<MedialArc> arcs;
    std::vector<std::vector<int>> incident;  // node -> arc ids

    int degree(int node) const { return static_cast<int>(incident[node].size()); }
    int other_end(int arc, int node) const {
        return arcs[arc].u == node ? arcs[arc].v : arcs[arc].u;
    }
};

// A maximal chain of arcs through degree-2 nodes; the graph edge of the
// reduced structure. `closed` marks a full cycle with no branch nodes.
struct MedialChain {
    std::vector<int> node_path;   // closed chains repeat the first node at the end
    std::vector<int> arc_ids;
    std::pair<std::vector<int>, std::vector<int>> contact_owners;  // sides of the first arc
    bool closed = false;
    bool same_polygon_bridge = false;  // both sides on one polygon somewhere
};

struct MedialAxis {
    std::vector<SiteCycle> cycles;
    std::vector<MedialFeature> features;
    std::vector<DistancePiece> pieces;
    MedialGraph graph;
    std::vector<MedialChain> chains;

    void rebuild_chains();
};

struct ReducedMedialAxis {
    MedialAxis axis;
};

struct BranchContact {
    Point z;
    std::vector<int> owners;   // sorted polygon ids (-1 = frame)
    int feature = -1;
    int cycle = -1;
};

struct BranchVertex {
    int node = -1;
    Point p;
    Rational radius;
    std::vector<BranchContact> contacts;  // distinct contact points
    bool artificial = false;              // annulus rule
};

struct Spoke {
    Segment seg;          // vertex -> contact
    int vertex_index = -1;
    int contact_index = -1;
};

// Medial axis of the free region bounded by the given cycles (one outer cycle,
// any number of islands), exact throughout. Throws on degenerate inputs that
// violate the strong general-position assumptions.
MedialAxis compute_medial_axis_cycles(std::vector<SiteCycle> cycles);

// Disjoint-polygon entry point: frame as the outer cycle, subset polygons as
// islands. Errors if the subset polygons are not pairwise disjoint.
MedialAxis compute_medial_axis(const WeightedInstance& inst, const std::vector<int>& subset);

ReducedMedialAxis prune_tendrils(const MedialAxis& m);

// Degree->=3 nodes with critical squares and contacts; components without them
// get one artificial vertex per the annulus rule (a node with contacts on both
// the island and the outer boundary, lexicographically smallest).
std::vector<BranchVertex> branch_vertices(const ReducedMedialAxis& m);

// One spoke per contact per vertex. Checks that no spoke properly crosses a
// site edge; throws if one does.
std::vector<Spoke> emit_spokes(const std::vector<BranchVertex>& vertices,
                               const std::vector<SiteCycle>& cycles);

// Exact nearest-site distance from a point, minimum over all features.
Rational nearest_site_distance(const Point& p, const std::vector<MedialFeature>& features);

}  // namespace corridors
