#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <unordered_map>
#include <utility>
#include <vector>

#include "voromesh/local_geometry.hpp"

namespace voromesh {

/// Hanging-node constellation of one primal cell. 3D: bits 0-11 flag edge
/// midpoints, bits 12-17 face midpoints (face order x=0,x=1,y=0,y=1,z=0,z=1).
/// 2D: bits 0-3 flag edge midpoints in the same order.
using RefinementKey = uint32_t;

/// Local node ids on the reference cell:
///   3D: 0-7 corners (id = x + 2y + 4z), 8-11 x-parallel edge midpoints
///       (8 + y + 2z), 12-15 y-parallel (12 + x + 2z), 16-19 z-parallel
///       (16 + x + 2y), 20-25 face midpoints (x=0,x=1,y=0,y=1,z=0,z=1).
///   2D: 0-3 corners (id = x + 2y), 4-7 edge midpoints (x=0,x=1,y=0,y=1).
int node_count(int dim);                    // 26 resp. 8
int key_bit_count(int dim);                 // 18 resp. 4
Vec3i node_position(int dim, int id);       // scale 48
int node_from_position(int dim, Vec3i p);   // -1 if not a candidate position
int node_of_key_bit(int dim, int bit);
int key_bit_of_node(int dim, int id);       // -1 for corners

bool key_valid(int dim, RefinementKey key);

/// All keys satisfying the face=>edges constraint, ascending.
/// 3D: 6210 keys, 2D: 16.
std::vector<RefinementKey> enumerate_valid_keys(int dim);

/// Node positions (id, coordinate) present for a key: corners always,
/// midpoints iff the bit is set. Ascending by id.
std::vector<std::pair<int, Vec3i>> key_nodes(int dim, RefinementKey key);

/// One of the 48 (3D) resp. 8 (2D) cell self-mappings: a signed axis
/// permutation acting about the cell center, y_i = +-x_perm[i] (+- about 24).
struct SymmetryOp {
    std::array<int8_t, 3> perm{0, 1, 2};
    std::array<int8_t, 3> neg{0, 0, 0};

    Vec3i apply(Vec3i p) const {
        Vec3i r;
        for (int i = 0; i < 3; ++i) {
            const int32_t c = p[perm[i]];
            r[i] = neg[i] ? kRefScale - c : c;
        }
        return r;
    }
    int det() const;
    friend bool operator==(const SymmetryOp& a, const SymmetryOp& b) {
        return a.perm == b.perm && a.neg == b.neg;
    }
};

/// Fixed enumeration of the symmetry group (axis permutations in
/// lexicographic order, then sign bits); op indices in serialized tables
/// refer to this order.
const std::vector<SymmetryOp>& symmetry_group(int dim);
int symmetry_index(int dim, const SymmetryOp& op);
SymmetryOp compose(const SymmetryOp& a, const SymmetryOp& b);  // apply b, then a
SymmetryOp inverse(const SymmetryOp& op);

RefinementKey transform_key(int dim, const SymmetryOp& op, RefinementKey key);
int transform_node(int dim, const SymmetryOp& op, int id);

struct PatternRegion {
    int node;                 // LocalNodeId
    int64_t volume_units;     // in 1/384 (3D) resp. 1/32 (2D) of cell volume
    std::vector<int> atoms;   // ascending atom ids
};

struct PatternFace {
    int a, b;                 // LocalNodeIds of the separated regions, a < b
    FacePolygon poly;         // normal oriented a -> b
};

/// Partition of the reference cell into local Voronoi regions for one key,
/// with exact volumes, maximal internal faces and boundary traces. The
/// trace of face f assigns every 2D atom of the face's own subdivision to
/// the node owning the adjacent 3D atom; adjacent cells agreeing on the
/// face's bit configuration produce identical traces.
struct LocalPattern {
    int dim = 3;
    RefinementKey key = 0;
    std::vector<int8_t> owner;                   // atom id -> LocalNodeId
    std::vector<PatternRegion> regions;          // ascending node id
    std::vector<PatternFace> faces;
    std::vector<std::vector<int8_t>> traces;     // [face][2D atom] -> node id
};

LocalPattern build_pattern(int dim, RefinementKey key);

/// Canonical representative (minimum key over the orbit) and an op with
/// transform_key(op, canonical) == key.
std::pair<RefinementKey, SymmetryOp> canonicalize(int dim, RefinementKey key);

LocalPattern apply_symmetry(const LocalPattern& p, const SymmetryOp& op);

/// 5-bit configuration of one face: 4 edge bits (fixed per-face edge order)
/// plus the face-midpoint bit. Keys agreeing on a face's config have equal
/// traces there.
int face_config(RefinementKey key, int face);

struct TableEntry {
    int32_t canon_id;
    int32_t op_index;  // into symmetry_group(dim)
};

struct PatternTable {
    int dim = 3;
    std::vector<LocalPattern> canonical;                    // ascending key
    std::unordered_map<RefinementKey, TableEntry> index;    // every valid key

    const LocalPattern& canonical_for(RefinementKey key) const {
        return canonical[size_t(index.at(key).canon_id)];
    }
};

/// Builds canonical patterns once and maps every valid key to (canonical
/// id, symmetry op); construction cross-checks a sample of entries against
/// direct recomputation.
PatternTable build_table(int dim);

/// Pattern for an arbitrary valid key, via table lookup plus symmetry.
LocalPattern instantiate(const PatternTable& table, RefinementKey key);

void save_pattern_table(const PatternTable& table, std::ostream& os);
PatternTable load_pattern_table(std::istream& is);

/// Brute-force sampling oracle: assigns the centers of a resolution^dim
/// lattice of sample cells to the nearest node under the (dinf, d2, id)
/// rule and returns per-node volume fractions. Test oracle only.
std::map<int, double> local_voronoi_oracle(int dim, RefinementKey key,
                                           int resolution = 96);

/// Raw lattice assignment against an arbitrary node set (positions at
/// reference scale 48, possibly outside the cell); exposes the per-sample
/// winners so restricted and extended node sets can be compared exactly.
std::vector<int32_t> oracle_assign_lattice(int dim,
                                           const std::vector<std::pair<int, Vec3i>>& nodes,
                                           int resolution);

}  // namespace voromesh
