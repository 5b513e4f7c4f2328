#include <doctest.h>

#include <cmath>

#include "voromesh/flux_model.hpp"

using namespace voromesh;

TEST_CASE("flux counts reproduce the reference comparison row") {
    const FluxCountInputs in{112106, 345564, 121561, 152630};
    const FluxCountReport r = flux_count(in);
    CHECK(r.diamond.primal_to_dual == 1345272);
    CHECK(r.diamond.dual_to_primal == 345564);
    CHECK(r.diamond.total() == 1690836);
    CHECK(r.hll.primal_to_dual == 691128);
    CHECK(r.hll.dual_to_primal == 691128);
    CHECK(r.hll.total() == 1382256);
    CHECK(r.voronoi.primal_to_dual == 457890);
    CHECK(r.voronoi.dual_to_primal == 364683);
    CHECK(r.voronoi.total() == 822573);

    // printed-rounding agreement with the reference values in millions
    auto mround = [](int64_t x) { return std::round(double(x) / 1e6 * 100.0) / 100.0; };
    CHECK(mround(r.diamond.primal_to_dual) == 1.35);
    CHECK(mround(r.diamond.dual_to_primal) == 0.35);
    CHECK(mround(r.diamond.total()) == 1.69);
    CHECK(mround(r.hll.primal_to_dual) == 0.69);
    CHECK(mround(r.hll.dual_to_primal) == 0.69);
    CHECK(mround(r.hll.total()) == 1.38);
    CHECK(mround(r.voronoi.primal_to_dual) == 0.46);
    CHECK(mround(r.voronoi.dual_to_primal) == 0.36);
    CHECK(mround(r.voronoi.total()) == 0.82);
}

TEST_CASE("all-zero inputs give all-zero counts") {
    const FluxCountReport r = flux_count({0, 0, 0, 0});
    CHECK(r.diamond.total() == 0);
    CHECK(r.hll.total() == 0);
    CHECK(r.voronoi.total() == 0);
}

TEST_CASE("negative inputs are rejected") {
    CHECK_THROWS(flux_count({-1, 0, 0, 0}));
}

TEST_CASE("census row on a uniform grid: A/N = 1 and consistent columns") {
    const PatternTable t = build_table(3);
    const PrimalGrid g = PrimalGrid::uniform(3, 2);
    const DualMesh m = assemble(g, t);
    const CensusRow row = census(g, t, m);
    CHECK(row.level == 2);
    CHECK(row.primal_cells == 64);
    CHECK(row.dual_cells == 125);
    CHECK(row.trivial_fraction == 1.0);  // every cell is hanging-node free
    CHECK(row.distinct_patterns == 1);
    CHECK(row.fluxes_non_staggered == 4 * row.primal_faces);
    CHECK(row.fluxes_staggered == 3 * (row.dual_nodes + row.primal_nodes));
}
