#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <unordered_set>
#include <vector>

#include "voromesh/pattern_engine.hpp"

namespace voromesh {

/// Octree (quadtree) cell address: level plus integer coordinates in
/// [0, 2^level)^dim. The unit cube is cell (0, 0,0,0).
struct CellIndex {
    int32_t level = 0;
    Vec3i coords{0, 0, 0};

    friend bool operator==(const CellIndex& a, const CellIndex& b) {
        return a.level == b.level && a.coords == b.coords;
    }
    friend bool operator<(const CellIndex& a, const CellIndex& b) {
        if (a.level != b.level) return a.level < b.level;
        return a.coords < b.coords;
    }
};

struct CellIndexHash {
    size_t operator()(const CellIndex& c) const {
        return Vec3iHash()(c.coords) * 31 + size_t(c.level);
    }
};

/// Grid node (vertex or hanging midpoint) in global integer coordinates at
/// scale 2^max_level; physical position = key * 2^-max_level.
using NodeKey = Vec3i;

/// Adaptively refined Cartesian grid of the unit cube with the 1-level
/// face/edge transition constraint. Immutable once built; the refine
/// functions return new grids.
class PrimalGrid {
public:
    static PrimalGrid unit_cube(int dim, int level_cap = 12);
    static PrimalGrid uniform(int dim, int level, int level_cap = 12);

    int dim() const { return dim_; }
    int max_level() const { return max_level_; }
    int level_cap() const { return level_cap_; }

    const std::vector<CellIndex>& leaves() const { return leaves_; }
    bool is_leaf(const CellIndex& c) const { return leaf_set_.count(c) > 0; }

    /// The leaf equal to `c` or the ancestor leaf containing it.
    std::optional<CellIndex> leaf_covering(CellIndex c) const;

    /// True if the region of `c` lies in the domain and is subdivided
    /// beyond `c.level` (no leaf at or above it).
    bool region_split(const CellIndex& c) const;

    bool in_domain(const CellIndex& c) const;

    /// All grid nodes (leaf corners; hanging midpoints are corners of the
    /// finer neighbors), sorted. Scale 2^max_level.
    const std::vector<NodeKey>& nodes() const { return nodes_; }
    bool is_node(const NodeKey& n) const;

    /// Hanging-node constellation of a leaf; bit layout per RefinementKey.
    RefinementKey refinement_key(const CellIndex& cell) const;

    /// Nodes on the closed boundary of a leaf: corners always plus the
    /// midpoints flagged by the key, ascending LocalNodeId.
    std::vector<std::pair<int, NodeKey>> boundary_nodes(const CellIndex& cell) const;

    /// Global node coordinate of a local reference position (scale 48)
    /// inside a leaf. Requires the position to land on the node lattice.
    NodeKey global_node(const CellIndex& cell, Vec3i local) const;

    /// Exact leaf volume in units of 8^-level (2D: 4^-level).
    double leaf_volume(const CellIndex& cell) const;

private:
    friend PrimalGrid refine(const PrimalGrid&, std::vector<CellIndex>);
    void finalize();

    int dim_ = 3;
    int max_level_ = 0;
    int level_cap_ = 12;
    std::vector<CellIndex> leaves_;
    std::unordered_set<CellIndex, CellIndexHash> leaf_set_;
    std::vector<NodeKey> nodes_;
};

/// Replace each marked leaf by its 2^dim children and re-establish the
/// 1-level face/edge grading by closure refinement (deterministic,
/// lexicographic processing). Throws if the level cap would be exceeded.
PrimalGrid refine(const PrimalGrid& grid, std::vector<CellIndex> marked);

/// Refine every leaf whose closed region sees an indicator sign change on
/// a fixed 5x5x5 (5x5 in 2D) sub-lattice, until `target_level`.
PrimalGrid refine_by_indicator(const PrimalGrid& grid,
                               const std::function<bool(Vec3d)>& indicator,
                               int target_level);

/// Built-in refinement indicators.
std::function<bool(Vec3d)> paraboloid_indicator();
std::function<bool(Vec3d)> sphere_indicator();

/// Number of elementary grid faces: nonconforming coarse/fine contacts
/// count at the fine resolution, domain boundary faces included.
int64_t count_faces(const PrimalGrid& grid);

/// JSON serialization: {dim, max_level, leaves:[[level,i,j,k],...]},
/// leaves sorted lexicographically; bit-exact round-trip.
void save_grid(const PrimalGrid& grid, std::ostream& os);
PrimalGrid load_grid(std::istream& is);

}  // namespace voromesh
