#pragma once

#include <iosfwd>
#include <optional>

#include "voromesh/staggered_solver.hpp"

namespace voromesh {

/// Legacy VTK ASCII, UNSTRUCTURED_GRID with VTK_POLYHEDRON (type 42) cells:
/// one polyhedron per dual cell with per-cell volume, contributing-leaf
/// count and optionally the gauss residual. 3D meshes only.
void write_dual_vtk(const DualMesh& mesh, std::ostream& os,
                    bool with_residuals = false);

/// Faces-only POLYDATA view of the dual mesh (every compound face once).
void write_dual_faces_vtk(const DualMesh& mesh, std::ostream& os);

/// Primal grid with an optional cell field as voxel (pixel in 2D) cells.
void write_primal_vtk(const PrimalGrid& grid, std::ostream& os,
                      const std::vector<double>* cell_values = nullptr,
                      const char* value_name = "v");

}  // namespace voromesh
