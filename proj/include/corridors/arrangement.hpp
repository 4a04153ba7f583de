#pragma once

#include <cstdint>
#include <memory>
#include <vector>

#include "corridors/geom.hpp"

namespace corridors {

struct EdgeTag {
    enum class Kind { PolygonEdge, FrameEdge, Spoke };
    Kind kind = Kind::PolygonEdge;
    int owner = -1;     // polygon id; -1 for frame
    int index = -1;     // edge index within the owner cycle
    int spoke_id = -1;  // for spokes

    bool operator==(const EdgeTag& o) const {
        return kind == o.kind && owner == o.owner && index == o.index && spoke_id == o.spoke_id;
    }
};

struct InputSegment {
    Segment seg;
    EdgeTag tag;
};

// Exact planar subdivision of a set of segments: pairwise splitting, half-edge
// structure, face extraction, and cover propagation (which polygons cover each
// face, and whether it lies inside the frame).
class PlanarSubdivision {
public:
    struct SubEdge {
        Point a, b;  // a < b lexicographically
        std::vector<EdgeTag> tags;
        int va = -1, vb = -1;
        int h_ab = -1, h_ba = -1;  // half-edge ids
    };

    struct HalfEdge {
        int from = -1, to = -1;
        int twin = -1, next = -1;
        int sub = -1;
        int orbit = -1;
    };

    struct Face {
        int outer_orbit = -1;            // -1 for the unbounded face
        std::vector<int> hole_orbits;
        std::vector<int> cover;          // sorted polygon ids covering the face
        bool inside_frame = false;
        bool unbounded = false;
    };

    void build(const std::vector<InputSegment>& segments);

    const std::vector<Point>& vertices() const { return vertex_points_; }
    const std::vector<SubEdge>& sub_edges() const { return subs_; }
    const std::vector<HalfEdge>& half_edges() const { return halves_; }
    const std::vector<Face>& faces() const { return faces_; }
    int unbounded_face() const { return unbounded_face_; }

    // Vertices created by proper polygon-boundary crossings.
    const std::vector<int>& crossing_vertices() const { return crossing_vertices_; }
    bool vertex_is_crossing(int v) const;

    int face_of_halfedge(int h) const { return orbit_face_[halves_[h].orbit]; }
    int face_of_orbit(int orbit) const { return orbit_face_[orbit]; }
    const std::vector<int>& orbit_halfedges(int orbit) const { return orbit_halves_[orbit]; }
    std::vector<Point> orbit_points(int orbit) const;

    // Face membership of a point; `boundary` set when the point lies on the
    // face's boundary (in which case the face returned is one of the incident
    // faces).
    int locate(const Point& p, bool* boundary = nullptr) const;

    Rational face_area(int f) const;  // 0 for the unbounded face

private:
    std::vector<Point> vertex_points_;
    std::vector<SubEdge> subs_;
    std::vector<HalfEdge> halves_;
    std::vector<std::vector<int>> orbit_halves_;
    std::vector<Rational> orbit_area2_;
    std::vector<int> orbit_face_;
    std::vector<Face> faces_;
    std::vector<int> crossing_vertices_;
    int unbounded_face_ = -1;

    void propagate_covers();
};

struct FaceInfo {
    int face_id = -1;
    std::vector<Point> outer_cycle;               // empty for the unbounded face
    std::vector<std::vector<Point>> hole_cycles;
    std::vector<int> incident_polygons;           // distinct owners on the boundary
    int t_f = 0;                                   // intersection vertices on the boundary
    int k_f = 0;                                   // distinct polygons on the boundary
};

struct ArrangementSummary {
    int t = 0;                        // total intersection vertices
    std::vector<FaceInfo> faces;      // faces of the complement of the union, inside the frame
    std::vector<Point> vertex_locations;
    std::shared_ptr<PlanarSubdivision> subdivision;  // full structure, all faces
};

// Arrangement of the boundaries of the subset's polygons plus the frame.
ArrangementSummary build_arrangement(const WeightedInstance& inst, const std::vector<int>& subset);

struct IntersectionGraph {
    std::vector<int> ids;                         // subset, sorted
    std::vector<std::pair<int, int>> edges;       // pairs of polygon ids, i < j
    std::vector<std::vector<int>> adjacency;      // indexed like ids

    bool has_edge(int a, int b) const;
    int edge_count() const { return static_cast<int>(edges.size()); }
};

IntersectionGraph intersection_graph(const WeightedInstance& inst, const std::vector<int>& subset);

// (|X|, |E(G_X)|) for the sparsity probe.
std::pair<int, int> edge_density_probe(const WeightedInstance& inst, const std::vector<int>& subset);

}  // namespace corridors
