#pragma once

#include "voromesh/dual_assembly.hpp"

namespace voromesh {

/// Grid census values the cost model runs on.
struct FluxCountInputs {
    int64_t primal_cells = 0;
    int64_t primal_faces = 0;
    int64_t primal_nodes = 0;
    int64_t dual_nodes = 0;
};

/// Flux evaluations in two successive timesteps for the three schemes:
/// diamond dual grid, non-staggered HLL, and the Voronoi staggered pair.
struct FluxCountReport {
    struct SchemeCount {
        int64_t primal_to_dual = 0;
        int64_t dual_to_primal = 0;
        int64_t total() const { return primal_to_dual + dual_to_primal; }
    };
    FluxCountInputs inputs;
    SchemeCount diamond;  // 12 * cells, 1 * faces
    SchemeCount hll;      // 2 * faces, 2 * faces
    SchemeCount voronoi;  // 3 * dual nodes, 3 * primal nodes
};

FluxCountReport flux_count(const FluxCountInputs& in);

/// One comparison-table row for a grid: cell counts plus the two-timestep
/// flux totals of the non-staggered HLL scheme and the staggered Voronoi
/// pair, with property-H statistics.
struct CensusRow {
    int level = 0;
    int64_t primal_cells = 0;
    int64_t dual_cells = 0;
    int64_t fluxes_non_staggered = 0;
    int64_t fluxes_staggered = 0;
    int64_t primal_faces = 0;
    int64_t primal_nodes = 0;
    int64_t dual_nodes = 0;
    int64_t distinct_patterns = 0;
    double trivial_fraction = 0.0;  // property-H cell ratio A/N
};

CensusRow census(const PrimalGrid& grid, const PatternTable& table, const DualMesh& mesh);

FluxCountInputs census_inputs(const MeshStats& stats);

}  // namespace voromesh
