#include <doctest.h>

#include <map>
#include <set>

#include "voromesh/local_geometry.hpp"

using namespace voromesh;

namespace {

int find_atom(const std::vector<Atom>& atoms, Vec3i centroid) {
    for (size_t i = 0; i < atoms.size(); ++i)
        if (atoms[i].centroid == centroid) return int(i);
    return -1;
}

}  // namespace

TEST_CASE("3D subdivision: 128 atoms, kind census, exact volume partition") {
    const auto& atoms = subdivide_reference_cell(3);
    CHECK(atoms.size() == 128);
    std::map<AtomKind, int> census;
    int64_t vol = 0;
    for (const auto& a : atoms) {
        ++census[a.kind];
        vol += a.volume_units;
    }
    CHECK(census[AtomKind::Cube] == 64 - 24 - 8);
    CHECK(census[AtomKind::Prism] == 48);
    CHECK(census[AtomKind::Tet] == 48);
    CHECK(vol == kVolumeUnit3D);
}

TEST_CASE("2D subdivision: 20 atoms, exact partition") {
    const auto& atoms = subdivide_reference_cell(2);
    CHECK(atoms.size() == 20);
    std::map<AtomKind, int> census;
    int64_t vol = 0;
    for (const auto& a : atoms) {
        ++census[a.kind];
        vol += a.volume_units;
    }
    CHECK(census[AtomKind::Square] == 12);
    CHECK(census[AtomKind::Triangle] == 8);
    CHECK(vol == kVolumeUnit2D);
}

TEST_CASE("atom centroids are distinct exact lattice points") {
    for (int dim : {2, 3}) {
        const auto& atoms = subdivide_reference_cell(dim);
        std::set<std::array<int32_t, 3>> seen;
        for (const auto& a : atoms) {
            CHECK(seen.insert(a.centroid.v).second);
            for (int i = 0; i < dim; ++i) {
                CHECK(a.centroid[i] > 0);
                CHECK(a.centroid[i] < kRefScale);
            }
        }
    }
}

TEST_CASE("watertightness: every facet is boundary or shared exactly once") {
    for (int dim : {2, 3}) {
        const auto& atoms = subdivide_reference_cell(dim);
        std::map<std::vector<Vec3i>, int> uses;
        for (const auto& a : atoms)
            for (const auto& f : a.facets) {
                auto key = f.verts;
                std::sort(key.begin(), key.end());
                ++uses[key];
            }
        for (const auto& [key, n] : uses) {
            CHECK(n >= 1);
            CHECK(n <= 2);
            if (n == 1) {
                // boundary facet: on one reference-cell face
                bool on_boundary = false;
                for (int axis = 0; axis < dim; ++axis)
                    for (int32_t c : {0, kRefScale}) {
                        bool all = true;
                        for (const auto& v : key) all = all && v[axis] == c;
                        on_boundary = on_boundary || all;
                    }
                CHECK(on_boundary);
            }
        }
    }
}

TEST_CASE("facet normals are axis or plane-diagonal directions") {
    const auto& atoms = subdivide_reference_cell(3);
    for (const auto& a : atoms)
        for (const auto& f : a.facets) {
            const Vec3i n = primitive_normal(f.verts);
            const int nz = (n[0] != 0) + (n[1] != 0) + (n[2] != 0);
            CHECK(nz >= 1);
            CHECK(nz <= 2);
        }
}

TEST_CASE("linf metric examples") {
    CHECK(linf_dist2_scaled({5, 7, 9}, {5, 7, 9}).dinf == 0);
    CHECK(linf_dist2_scaled({5, 7, 9}, {5, 7, 9}).d2 == 0);

    const auto d = linf_dist2_scaled({0, 0, 0}, {48, 24, 0});
    CHECK(d.dinf == 48);
    CHECK(d.d2 == 2880);

    // cube-atom centroid vs corner and face midpoint: dinf ties at 18,
    // the Euclidean part breaks the tie toward the face midpoint
    const auto dc = linf_dist2_scaled({18, 18, 18}, {0, 0, 0});
    const auto df = linf_dist2_scaled({18, 18, 18}, {24, 24, 0});
    CHECK(dc.dinf == 18);
    CHECK(df.dinf == 18);
    CHECK(dc.d2 == 972);
    CHECK(df.d2 == 396);
}

TEST_CASE("tie-break realizes the prolonged separator for axis-aligned node pairs") {
    // nodes (0,0) and (24,0): the L-inf bisector is unique only on the
    // segment x = 12, |y| <= 12; beyond it a whole cone ties in the max
    // norm and the Euclidean part must extend the straight line x = 12
    const std::vector<std::pair<int, Vec3i>> nodes{{0, {0, 0, 0}}, {1, {24, 0, 0}}};
    for (int32_t y : {14, 20, 40}) {
        for (int32_t x = 1; x < 24; ++x) {
            const auto da = linf_dist2_scaled({x, y, 0}, nodes[0].second);
            const auto db = linf_dist2_scaled({x, y, 0}, nodes[1].second);
            if (x < 12) {
                CHECK(assign_centroid({x, y, 0}, nodes) == 0);
            } else if (x > 12) {
                CHECK(assign_centroid({x, y, 0}, nodes) == 1);
            }
            if (y > std::max(x, 24 - x)) {
                CHECK(da.dinf == db.dinf);  // inside the ambiguous cone
            }
        }
        // on the prolonged line both metrics tie; the node id decides
        CHECK(assign_centroid({12, y, 0}, nodes) == 0);
    }
}

TEST_CASE("assignment: spec examples") {
    std::vector<std::pair<int, Vec3i>> corners;
    for (int z = 0; z <= 1; ++z)
        for (int y = 0; y <= 1; ++y)
            for (int x = 0; x <= 1; ++x)
                corners.emplace_back(x + 2 * y + 4 * z,
                                     Vec3i{48 * x, 48 * y, 48 * z});

    CHECK(assign_centroid({6, 6, 6}, corners) == 0);

    auto with_face = corners;
    with_face.emplace_back(24, Vec3i{24, 24, 0});
    CHECK(assign_centroid({18, 18, 6}, with_face) == 24);

    const std::vector<std::pair<int, Vec3i>> single{{7, {48, 48, 48}}};
    CHECK(assign_centroid({6, 6, 6}, single) == 7);
}

TEST_CASE("interface of two face-adjacent cubes: one axis square, area 1/16") {
    const auto& atoms = subdivide_reference_cell(3);
    const int a = find_atom(atoms, {6, 6, 6});
    const int b = find_atom(atoms, {6, 6, 18});
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    const auto faces = interface_faces(atoms, {a}, {b}, 3);
    REQUIRE(faces.size() == 1);
    CHECK(faces[0].normal == Vec3i{0, 0, 1});
    CHECK(faces[0].sqrt2 == false);
    CHECK(faces[0].area == Fraction(1, 16));
    CHECK(faces[0].verts.size() == 4);
}

TEST_CASE("diagonal interfaces carry the sqrt2 tag with exact areas") {
    const auto& atoms = subdivide_reference_cell(3);

    // the two prisms of the face-midpoint cube [12,24]^2 x [0,12]
    const int pa = find_atom(atoms, {20, 16, 6});
    const int pb = find_atom(atoms, {16, 20, 6});
    REQUIRE(pa >= 0);
    REQUIRE(pb >= 0);
    const auto pf = interface_faces(atoms, {pa}, {pb}, 3);
    REQUIRE(pf.size() == 1);
    CHECK(pf[0].sqrt2 == true);
    CHECK(pf[0].area == Fraction(1, 16));
    const int nz = (pf[0].normal[0] != 0) + (pf[0].normal[1] != 0) + (pf[0].normal[2] != 0);
    CHECK(nz == 2);

    // two tetrahedra of a central cube across one diagonal cut
    // (orderings x>=y>=z and x>=z>=y of the Kuhn subdivision share x: y=z)
    const int ta = find_atom(atoms, {21, 18, 15});
    const int tb = find_atom(atoms, {21, 15, 18});
    REQUIRE(ta >= 0);
    REQUIRE(tb >= 0);
    const auto tf = interface_faces(atoms, {ta}, {tb}, 3);
    REQUIRE(tf.size() == 1);
    CHECK(tf[0].sqrt2 == true);
    CHECK(tf[0].area == Fraction(1, 32));
    CHECK(tf[0].verts.size() == 3);

    // prism/tet contacts are axis-normal half-square triangles
    const auto xf = interface_faces(atoms, {pa, pb}, {ta, tb}, 3);
    for (const auto& f : xf) {
        CHECK(f.sqrt2 == false);
        CHECK(f.area == Fraction(1, 32));
    }
    CHECK(xf.size() == 1);  // only the x>=y>=z tet touches the {y<=x} prism below
}

TEST_CASE("non-adjacent atoms have empty interface") {
    const auto& atoms = subdivide_reference_cell(3);
    const int a = find_atom(atoms, {6, 6, 6});
    const int b = find_atom(atoms, {42, 42, 42});
    REQUIRE(a >= 0);
    REQUIRE(b >= 0);
    CHECK(interface_faces(atoms, {a}, {b}, 3).empty());
}

TEST_CASE("coplanar merge: quarters fuse to a maximal square") {
    // four unit quads in the z=0 plane forming a 2x2 block
    std::vector<std::vector<Vec3i>> quads;
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            quads.push_back({{12 * i, 12 * j, 0},
                             {12 * i + 12, 12 * j, 0},
                             {12 * i + 12, 12 * j + 12, 0},
                             {12 * i, 12 * j + 12, 0}});
    const auto merged = merge_coplanar_polygons(quads, {0, 0, 1});
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].size() == 4);  // collinear mid-edge points dropped
    const auto area = polygon_area(merged[0], {0, 0, 1});
    CHECK(area.frac == Fraction(24 * 24, 48 * 48));
}

TEST_CASE("coplanar merge: T-junction splitting joins mixed-size quads") {
    // one 24x24 quad and two 12x24 quads stacked beside it
    std::vector<std::vector<Vec3i>> quads;
    quads.push_back({{0, 0, 0}, {24, 0, 0}, {24, 24, 0}, {0, 24, 0}});
    quads.push_back({{24, 0, 0}, {36, 0, 0}, {36, 12, 0}, {24, 12, 0}});
    quads.push_back({{24, 12, 0}, {36, 12, 0}, {36, 24, 0}, {24, 24, 0}});
    const auto merged = merge_coplanar_polygons(quads, {0, 0, 1}, true);
    REQUIRE(merged.size() == 1);
    CHECK(merged[0].size() == 4);
    CHECK(polygon_area(merged[0], {0, 0, 1}).frac == Fraction(36 * 24, 48 * 48));
}

TEST_CASE("disconnected coplanar pieces stay separate polygons") {
    std::vector<std::vector<Vec3i>> quads;
    quads.push_back({{0, 0, 0}, {12, 0, 0}, {12, 12, 0}, {0, 12, 0}});
    quads.push_back({{24, 24, 0}, {36, 24, 0}, {36, 36, 0}, {24, 36, 0}});
    CHECK(merge_coplanar_polygons(quads, {0, 0, 1}).size() == 2);
}
