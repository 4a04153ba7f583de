#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "corridors/rational.hpp"

namespace corridors {

struct Point {
    Rational x, y;

    Point() = default;
    Point(Rational px, Rational py) : x(std::move(px)), y(std::move(py)) {}

    bool operator==(const Point& o) const { return x == o.x && y == o.y; }
    bool operator!=(const Point& o) const { return !(*this == o); }
};

// Lexicographic order (x, then y); the project-wide tie-break order.
inline bool lex_less(const Point& a, const Point& b) {
    int c = cmp(a.x, b.x);
    if (c != 0) return c < 0;
    return a.y < b.y;
}

struct PointLess {
    bool operator()(const Point& a, const Point& b) const { return lex_less(a, b); }
};

struct Segment {
    Point a, b;
    Segment() = default;
    Segment(Point pa, Point pb) : a(std::move(pa)), b(std::move(pb)) {}
};

// Sign of cross(q-p, r-p): +1 left turn, 0 collinear, -1 right turn.
int orient(const Point& p, const Point& q, const Point& r);

// Exact cross and dot helpers.
Rational cross(const Point& o, const Point& a, const Point& b);

bool point_on_segment(const Point& p, const Segment& s);  // includes endpoints

struct SegIntersection {
    enum class Kind { Empty, Point, Overlap } kind = Kind::Empty;
    Point p;       // valid when kind == Point
    Segment seg;   // valid when kind == Overlap
};

SegIntersection segment_intersection(const Segment& s, const Segment& t);

// True when segments share a point interior to both (a transversal crossing).
bool segments_cross_properly(const Segment& s, const Segment& t);

enum class Containment { Inside, Boundary, Outside };

struct SimplePolygon {
    std::vector<Point> vertices;  // counterclockwise

    std::size_t size() const { return vertices.size(); }
    Segment edge(std::size_t i) const {
        return {vertices[i], vertices[(i + 1) % vertices.size()]};
    }
    Rational signed_area2() const;                    // twice the signed area
    Rational area() const { return signed_area2() / 2; }
};

Containment point_in_polygon(const Point& p, const SimplePolygon& poly);
Containment point_in_cycle(const Point& p, const std::vector<Point>& cycle);

// Chebyshev distances; exact rationals.
Rational linf_point_point(const Point& p, const Point& q);
Rational linf_point_segment(const Point& p, const Segment& s);

struct Feature {
    // A polygon/frame boundary feature: a vertex or an edge.
    std::variant<Point, Segment> geom;
};

Rational linf_distance_to_feature(const Point& p, const Feature& f);

struct Frame {
    std::array<Point, 4> corners;  // counterclockwise square

    std::vector<Point> cycle() const { return {corners.begin(), corners.end()}; }
    Segment edge(std::size_t i) const { return {corners[i], corners[(i + 1) % 4]}; }
    Rational min_x() const;
    Rational max_x() const;
    Rational min_y() const;
    Rational max_y() const;
};

struct WeightedInstance {
    std::vector<SimplePolygon> polygons;
    std::vector<Rational> weights;
    Frame frame;

    int m() const { return static_cast<int>(polygons.size()); }
    int total_vertices() const;
    Rational total_weight() const;
    Rational total_weight(const std::vector<int>& subset) const;
};

// Axis-parallel bounding square of all polygon vertices, inflated by 10% per
// side. Polygons end up strictly inside.
Frame make_frame(const std::vector<SimplePolygon>& polygons);

// Count of proper boundary crossing points between two simple polygons.
// Throws std::runtime_error on shared sub-edges (degenerate overlap).
int boundary_crossings(const SimplePolygon& p, const SimplePolygon& q);

// All proper crossing points between the boundaries of two polygons.
std::vector<Point> boundary_crossing_points(const SimplePolygon& p, const SimplePolygon& q);

struct ValidationIssue {
    std::string code;     // e.g. "not-simple", "containment", "triple-point"
    std::string message;
};

struct ValidationReport {
    std::vector<ValidationIssue> issues;
    bool ok() const { return issues.empty(); }
    std::string to_string() const;
};

ValidationReport validate_instance(const WeightedInstance& inst);

struct GeneralPositionInfo {
    bool rotated = false;
    long k = 0;  // rotation parameter when rotated
};

// Rigid exact rotation by (cos,sin) = ((k^2-1)/(k^2+1), 2k/(k^2+1)) for the
// first k in {10^6, 10^6+1, ...} that leaves no polygon edge axis-parallel and
// no two scene points (vertices or pairwise boundary crossings) sharing an x
// or y coordinate. Identity when the instance is already in general position;
// on rotation the frame is recomputed to enclose the rotated scene.
WeightedInstance ensure_general_position(const WeightedInstance& inst,
                                         GeneralPositionInfo* info = nullptr);

// True when the strong general-position conditions above hold.
bool in_general_position(const WeightedInstance& inst);

// Exact point containment in the (convex, CCW) frame square.
Containment point_in_frame(const Point& p, const Frame& f);

// Region-level polygon intersection test (closed regions).
bool polygons_intersect(const SimplePolygon& p, const SimplePolygon& q);

// Maximum number of intersections of any line with the polygon boundary,
// computed exactly by sweeping the critical directions.
int max_line_crossings(const SimplePolygon& p);

std::string format_point(const Point& p);

}  // namespace corridors
