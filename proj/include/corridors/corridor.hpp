#pragma once

#include <map>
#include <memory>
#include <string>
#include <vector>

#include "corridors/arrangement.hpp"
#include "corridors/medial.hpp"

namespace corridors {

struct Corridor {
    std::vector<Point> cell;  // canonical boundary walk, CCW, collinear-merged
    Rational area;
    Rational bbox_xlo, bbox_xhi, bbox_ylo, bbox_yhi;

    std::vector<int> defining;  // sorted polygon ids, frame excluded
    struct GenVertex {
        Point p;
        Rational radius;
    };
    std::vector<GenVertex> gen_vertices;               // bounding branch vertices
    std::vector<std::pair<Point, Point>> spokes;       // distinct (vertex, contact)
    std::vector<std::pair<int, std::vector<Point>>> chains;  // owner (-1 frame) -> polyline

    bool covered = false;      // cell inside the union (general mode); not a corridor proper
    std::vector<int> cover;    // covering polygons for covered cells
    int face_id = -1;
    std::string key;           // identity key, stable across decompositions
};

struct DecompositionStats {
    bool disjoint_mode = true;
    int corridor_count = 0;
    int covered_count = 0;
    int branch_vertex_count = 0;   // includes artificial vertices
    int reduced_edge_count = 0;    // chains of the reduced graph, annulus slits counted
    int t = 0;                     // intersection vertices (general mode)
    std::vector<std::string> flags;
};

struct CorridorDecomposition {
    std::vector<int> subset;  // sorted generating polygon ids
    std::vector<Corridor> corridors;
    std::vector<Corridor> covered_cells;
    std::vector<BranchVertex> vertices;
    std::vector<Spoke> spokes;  // vertex_index points into `vertices`
    std::shared_ptr<PlanarSubdivision> subdivision;
    DecompositionStats stats;

    const Corridor* find_by_key(const std::string& key) const;
};

// Count of exact tiling failures observed process-wide; every decomposition
// verifies sum(cell areas) == frame area on construction.
long tiling_violation_count();

// Corridor decomposition of pairwise disjoint polygons (throws otherwise).
CorridorDecomposition corridor_decomposition(const WeightedInstance& inst,
                                             const std::vector<int>& subset);

// Per-face decomposition; intersections allowed. For disjoint subsets the
// result coincides with corridor_decomposition.
CorridorDecomposition corridor_decomposition_general(const WeightedInstance& inst,
                                                     const std::vector<int>& subset);

enum class ConflictMode { Fast, Literal };

class DecompCache {
public:
    const CorridorDecomposition& get(const WeightedInstance& inst, std::vector<int> subset);
    std::size_t size() const { return map_.size(); }

private:
    std::map<std::vector<int>, std::shared_ptr<const CorridorDecomposition>> map_;
};

// Stopping set K(C): polygons outside D(C) whose presence destroys C.
// Fast mode resolves by exact geometry (cell intersection / critical-square
// tests) with a literal re-decomposition fallback on exact ties. Literal mode
// re-decomposes for everything the cell-intersection fast path cannot settle.
std::vector<int> conflict_list(const Corridor& c, const WeightedInstance& inst,
                               const std::vector<int>& universe, ConflictMode mode,
                               DecompCache& cache);

struct ClarksonShorReport {
    int subsets_checked = 0;
    int corridors_checked = 0;
    std::vector<std::string> violations;
    bool ok() const { return violations.empty(); }
};

// Exhaustive verification of the sampling conditions over every subset of the
// universe: (i) C in CD(S) implies D(C) subset of S and S disjoint from K(C);
// (ii) the converse. Refuses universes larger than 8.
ClarksonShorReport verify_clarkson_shor(const WeightedInstance& inst,
                                        const std::vector<int>& universe);

// Internal hook used by verify_clarkson_shor and by fault-injection tests.
ClarksonShorReport check_cs_conditions(
    const std::vector<std::vector<int>>& subsets,
    const std::map<std::string, std::pair<std::vector<int>, std::vector<int>>>& family,
    const std::map<std::vector<int>, std::vector<std::string>>& cells_of_subset);

}  // namespace corridors
