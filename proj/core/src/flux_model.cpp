#include "voromesh/flux_model.hpp"

#include <stdexcept>

namespace voromesh {

FluxCountReport flux_count(const FluxCountInputs& in) {
    if (in.primal_cells < 0 || in.primal_faces < 0 || in.primal_nodes < 0 ||
        in.dual_nodes < 0)
        throw std::invalid_argument("flux_count: negative input");
    FluxCountReport r;
    r.inputs = in;
    r.diamond = {12 * in.primal_cells, 1 * in.primal_faces};
    r.hll = {2 * in.primal_faces, 2 * in.primal_faces};
    r.voronoi = {3 * in.dual_nodes, 3 * in.primal_nodes};
    return r;
}

FluxCountInputs census_inputs(const MeshStats& stats) {
    return {stats.leaves, stats.primal_faces, stats.primal_nodes, stats.dual_nodes};
}

CensusRow census(const PrimalGrid& grid, const PatternTable& table, const DualMesh& mesh) {
    const MeshStats st = mesh_stats(grid, table, mesh);
    const FluxCountReport fc = flux_count(census_inputs(st));
    CensusRow row;
    row.level = grid.max_level();
    row.primal_cells = st.leaves;
    row.dual_cells = st.dual_cells;
    row.fluxes_non_staggered = fc.hll.total();      // two HLL timesteps
    row.fluxes_staggered = fc.voronoi.total();      // the two transfer steps
    row.primal_faces = st.primal_faces;
    row.primal_nodes = st.primal_nodes;
    row.dual_nodes = st.dual_nodes;
    row.distinct_patterns = st.distinct_patterns;
    row.trivial_fraction = st.trivial_fraction;
    return row;
}

}  // namespace voromesh
