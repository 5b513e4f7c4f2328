#pragma once

#include <cstdint>
#include <vector>

#include "voromesh/geo.hpp"

namespace voromesh {

/// Reference-cell geometry. The reference cell is [0,SCALE]^dim with
/// SCALE = 48; all atom vertices land on the 12-lattice and every atom
/// centroid is an exact integer point, so L-inf comparisons and tie
/// detection are exact.
inline constexpr int32_t kRefScale = 48;

/// Denominator of atom volumes in units of the cell volume.
inline constexpr int64_t kVolumeUnit3D = 384;  // cube=6, prism=3, tet=1
inline constexpr int64_t kVolumeUnit2D = 32;   // square=2, triangle=1

inline constexpr int64_t volume_unit_den(int dim) {
    return dim == 3 ? kVolumeUnit3D : kVolumeUnit2D;
}

enum class AtomKind : uint8_t { Cube, Prism, Tet, Square, Triangle };

/// One boundary facet of an atom: a polygon in 3D, a segment in 2D.
/// Vertices wind counterclockwise about the outward normal.
struct AtomFacet {
    std::vector<Vec3i> verts;
};

/// One piece of the fixed reference-cell subdivision.
struct Atom {
    AtomKind kind;
    std::vector<Vec3i> verts;
    Vec3i centroid;            // exact, scale 48
    int32_t volume_units;      // in 1/384 (3D) resp. 1/32 (2D) of cell volume
    std::vector<AtomFacet> facets;
};

/// Planar polygon with exact area bookkeeping. Areas on diagonal planes
/// carry a factor sqrt(2); the rational part and the tag are kept separate
/// so no irrational value enters until export. In 2D this degenerates to a
/// segment and `area` is its length as a fraction of the cell edge.
struct FacePolygon {
    std::vector<Vec3i> verts;  // CCW about `normal`
    Vec3i normal;              // primitive direction: axis or plane diagonal
    bool sqrt2 = false;
    Fraction area;             // fraction of cell-face area (3D) / edge length (2D)
};

/// The fixed subdivision of the reference cell: 128 atoms in 3D
/// (32 cubes, 48 prisms, 48 tetrahedra), 20 in 2D (12 squares, 8
/// triangles). Cached; atom ids are positions in the returned vector.
const std::vector<Atom>& subdivide_reference_cell(int dim);

/// L-inf distance and squared Euclidean distance between two lattice
/// points. The Euclidean part is used solely for tie-breaking; it realizes
/// the prolonged-separator rule for degenerate L-inf bisectors.
struct ScaledDist {
    int32_t dinf;
    int64_t d2;
};
ScaledDist linf_dist2_scaled(Vec3i a, Vec3i b);

/// Deterministic nearest-node assignment: minimizes (dinf, d2, node id)
/// lexicographically. `nodes` pairs a priority id with a position.
int assign_centroid(Vec3i centroid, const std::vector<std::pair<int, Vec3i>>& nodes);
int assign_atom(const Atom& atom, const std::vector<std::pair<int, Vec3i>>& nodes);

/// Primitive normal (gcd-reduced) of a planar polygon; asserts the result
/// is one of the 6 axis or 12 plane-diagonal directions.
Vec3i primitive_normal(const std::vector<Vec3i>& poly);

/// Exact area of a polygon with primitive normal `n`, as a fraction of the
/// reference cell-face area plus a sqrt2 tag.
struct ExactArea {
    Fraction frac;
    bool sqrt2;
};
ExactArea polygon_area(const std::vector<Vec3i>& poly, Vec3i n);
ExactArea segment_length(Vec3i a, Vec3i b);

/// Merge coplanar polygons (all CCW about `normal`) into maximal simple
/// polygons. With `split_t_junctions` set, edges are first subdivided at
/// any input vertex lying in their interior, which makes the merge exact
/// for pieces coming from different refinement levels.
std::vector<std::vector<Vec3i>> merge_coplanar_polygons(
    const std::vector<std::vector<Vec3i>>& polys, Vec3i normal,
    bool split_t_junctions = false);

/// All 2D facets shared between an atom of `ids_a` and an atom of `ids_b`,
/// merged into maximal coplanar polygons, oriented from A to B.
std::vector<FacePolygon> interface_faces(const std::vector<Atom>& atoms,
                                         const std::vector<int>& ids_a,
                                         const std::vector<int>& ids_b, int dim);

namespace detail {
/// In-plane integer basis (u, w) with cross(u, w) a positive multiple of n.
void plane_basis(Vec3i n, Vec3i& u, Vec3i& w);
}  // namespace detail

}  // namespace voromesh
