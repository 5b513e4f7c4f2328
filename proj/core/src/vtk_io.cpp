#include "voromesh/vtk_io.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

namespace voromesh {

namespace {

class PointBank {
public:
    explicit PointBank(int max_level) : scale_(1.0 / (48.0 * double(int64_t(1) << max_level))) {}

    size_t id(Vec3i p) {
        auto [it, fresh] = index_.emplace(p, points_.size());
        if (fresh) points_.push_back(p);
        return it->second;
    }
    void write(std::ostream& os) const {
        os << "POINTS " << points_.size() << " double\n";
        for (const auto& p : points_)
            os << p[0] * scale_ << ' ' << p[1] * scale_ << ' ' << p[2] * scale_ << '\n';
    }
    size_t size() const { return points_.size(); }

private:
    double scale_;
    std::vector<Vec3i> points_;
    std::unordered_map<Vec3i, size_t, Vec3iHash> index_;
};

void header(std::ostream& os, const char* title) {
    os << "# vtk DataFile Version 3.0\n" << title << "\nASCII\n";
}

}  // namespace

namespace {

/// 2D dual cells as VTK_POLYGON cells: the cell boundary is recovered by
/// chaining the CCW-oriented face segments.
void write_dual_vtk_2d(const DualMesh& mesh, std::ostream& os) {
    header(os, "voromesh dual cells");
    os << "DATASET UNSTRUCTURED_GRID\n";
    PointBank points(mesh.grid().max_level());
    std::vector<std::vector<size_t>> polys(mesh.cells().size());
    for (size_t ci = 0; ci < mesh.cells().size(); ++ci) {
        std::map<std::array<int32_t, 3>, Vec3i> next;
        for (const auto& f : mesh.cell_faces(ci)) next[f.verts[0].v] = f.verts[1];
        if (next.empty()) continue;
        const Vec3i start = Vec3i{next.begin()->first[0], next.begin()->first[1],
                                  next.begin()->first[2]};
        Vec3i cur = start;
        do {
            polys[ci].push_back(points.id(cur));
            const auto it = next.find(cur.v);
            if (it == next.end())
                throw std::logic_error("write_dual_vtk: open 2D cell boundary");
            cur = it->second;
        } while (!(cur == start));
    }
    points.write(os);
    size_t total = 0;
    for (const auto& p : polys) total += p.size() + 1;
    os << "CELLS " << polys.size() << ' ' << total << '\n';
    for (const auto& p : polys) {
        os << p.size();
        for (size_t id : p) os << ' ' << id;
        os << '\n';
    }
    os << "CELL_TYPES " << polys.size() << '\n';
    for (size_t i = 0; i < polys.size(); ++i) os << "7\n";
    os << "CELL_DATA " << polys.size() << '\n';
    os << "SCALARS volume double 1\nLOOKUP_TABLE default\n";
    for (const auto& c : mesh.cells()) os << c.volume << '\n';
}

}  // namespace

void write_dual_vtk(const DualMesh& mesh, std::ostream& os, bool with_residuals) {
    if (mesh.dim() == 2) {
        write_dual_vtk_2d(mesh, os);
        return;
    }
    header(os, "voromesh dual cells");
    os << "DATASET UNSTRUCTURED_GRID\n";

    PointBank points(mesh.grid().max_level());
    struct CellStream {
        std::vector<int64_t> entries;  // nFaces (nPts ids...)*
    };
    std::vector<CellStream> streams(mesh.cells().size());
    std::vector<double> residuals;
    size_t stream_total = 0;
    for (size_t ci = 0; ci < mesh.cells().size(); ++ci) {
        const auto faces = mesh.cell_faces(ci);
        auto& cs = streams[ci];
        cs.entries.push_back(int64_t(faces.size()));
        double surface = 0.0;
        for (const auto& f : faces) {
            cs.entries.push_back(int64_t(f.verts.size()));
            for (const auto& v : f.verts) cs.entries.push_back(int64_t(points.id(v)));
            if (with_residuals)
                for (const auto& [x, w] : f.quadrature(mesh.grid().max_level()))
                    surface += w * dot(x, f.unit_normal) / 3.0;
        }
        if (with_residuals)
            residuals.push_back(std::abs(surface - mesh.cells()[ci].volume) /
                                mesh.cells()[ci].volume);
        stream_total += cs.entries.size() + 1;
    }

    points.write(os);
    os << "CELLS " << mesh.cells().size() << ' ' << stream_total << '\n';
    for (const auto& cs : streams) {
        os << cs.entries.size();
        for (int64_t e : cs.entries) os << ' ' << e;
        os << '\n';
    }
    os << "CELL_TYPES " << mesh.cells().size() << '\n';
    for (size_t ci = 0; ci < mesh.cells().size(); ++ci) os << "42\n";

    os << "CELL_DATA " << mesh.cells().size() << '\n';
    os << "SCALARS volume double 1\nLOOKUP_TABLE default\n";
    for (const auto& c : mesh.cells()) os << c.volume << '\n';
    os << "SCALARS contributing_leaves int 1\nLOOKUP_TABLE default\n";
    for (const auto& c : mesh.cells()) os << c.contributing_leaves.size() << '\n';
    if (with_residuals) {
        os << "SCALARS gauss_residual double 1\nLOOKUP_TABLE default\n";
        for (double r : residuals) os << r << '\n';
    }
}

void write_dual_faces_vtk(const DualMesh& mesh, std::ostream& os) {
    if (mesh.dim() != 3)
        throw std::invalid_argument("write_dual_faces_vtk: 3D meshes only");
    header(os, "voromesh dual faces");
    os << "DATASET POLYDATA\n";
    PointBank points(mesh.grid().max_level());
    std::vector<std::vector<size_t>> polys;
    std::vector<double> areas;
    for (size_t ci = 0; ci < mesh.cells().size(); ++ci)
        for (const auto& f : mesh.cell_faces(ci)) {
            // interior faces appear in both cells; emit from the owner side only
            if (!f.on_domain_boundary && !(f.owner < f.neighbor)) continue;
            std::vector<size_t> ids;
            ids.reserve(f.verts.size());
            for (const auto& v : f.verts) ids.push_back(points.id(v));
            polys.push_back(std::move(ids));
            areas.push_back(f.area);
        }
    points.write(os);
    size_t total = 0;
    for (const auto& p : polys) total += p.size() + 1;
    os << "POLYGONS " << polys.size() << ' ' << total << '\n';
    for (const auto& p : polys) {
        os << p.size();
        for (size_t id : p) os << ' ' << id;
        os << '\n';
    }
    os << "CELL_DATA " << polys.size() << '\n';
    os << "SCALARS area double 1\nLOOKUP_TABLE default\n";
    for (double a : areas) os << a << '\n';
}

void write_primal_vtk(const PrimalGrid& grid, std::ostream& os,
                      const std::vector<double>* cell_values, const char* value_name) {
    header(os, "voromesh primal grid");
    os << "DATASET UNSTRUCTURED_GRID\n";
    PointBank points(grid.max_level());
    const int dim = grid.dim();
    const int corners = dim == 3 ? 8 : 4;
    std::vector<std::array<size_t, 8>> cells(grid.leaves().size());
    for (size_t li = 0; li < grid.leaves().size(); ++li) {
        const CellIndex& c = grid.leaves()[li];
        const int32_t s = (int32_t(1) << (grid.max_level() - c.level)) * kRefScale;
        int k = 0;
        const int nz = dim == 3 ? 1 : 0;
        for (int dz = 0; dz <= nz; ++dz)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dx = 0; dx <= 1; ++dx)
                    cells[li][size_t(k++)] = points.id(
                        {(c.coords[0] + dx) * s, (c.coords[1] + dy) * s,
                         (c.coords[2] + dz) * s});
    }
    points.write(os);
    os << "CELLS " << cells.size() << ' ' << cells.size() * size_t(corners + 1) << '\n';
    for (const auto& cell : cells) {
        os << corners;
        for (int k = 0; k < corners; ++k) os << ' ' << cell[size_t(k)];
        os << '\n';
    }
    os << "CELL_TYPES " << cells.size() << '\n';
    for (size_t i = 0; i < cells.size(); ++i) os << (dim == 3 ? "11\n" : "8\n");
    if (cell_values) {
        os << "CELL_DATA " << cells.size() << '\n';
        os << "SCALARS " << value_name << " double 1\nLOOKUP_TABLE default\n";
        for (double v : *cell_values) os << v << '\n';
    }
}

}  // namespace voromesh
