#include "voromesh/dual_assembly.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <map>
#include <stdexcept>

namespace voromesh {

namespace {

double physical_scale(int max_level) { return 1.0 / (48.0 * double(int64_t(1) << max_level)); }

Vec3d to_physical(Vec3i v, int max_level) {
    const double s = physical_scale(max_level);
    return {v[0] * s, v[1] * s, v[2] * s};
}

/// Area of an exact global polygon (scale 48*2^L) with primitive normal n.
double physical_area(const std::vector<Vec3i>& poly, Vec3i n, int dim, int max_level) {
    const double s = physical_scale(max_level);
    if (dim == 2) {
        const Vec3i d = poly.back() - poly.front();
        const int nz = (n[0] != 0) + (n[1] != 0);
        if (nz == 1) return (std::abs(d[0]) + std::abs(d[1])) * s;  // axis segment
        return std::abs(d[0]) * std::sqrt(2.0) * s;                 // 45-degree segment
    }
    std::array<int64_t, 3> acc{0, 0, 0};
    for (size_t k = 0; k < poly.size(); ++k) {
        const auto c = cross64(poly[k], poly[(k + 1) % poly.size()]);
        for (int i = 0; i < 3; ++i) acc[i] += c[i];
    }
    int64_t m = 0;
    for (int i = 0; i < 3; ++i)
        if (n[i] != 0) m = acc[i] / n[i];
    const bool diag = (n[0] != 0) + (n[1] != 0) + (n[2] != 0) == 2;
    const double base = double(m) * 0.5 * s * s;
    return diag ? base * std::sqrt(2.0) : base;
}

Vec3d unit_of(Vec3i dir) {
    const double len = std::sqrt(double(dot(dir, dir)));
    return {dir[0] / len, dir[1] / len, dir[2] / len};
}

struct PlaneKey {
    Vec3i n;
    int64_t off;
    bool operator<(const PlaneKey& o) const {
        if (n != o.n) return n < o.n;
        return off < o.off;
    }
};

/// Chain collinear segments (2D faces); input oriented along +dir.
std::vector<std::vector<Vec3i>> merge_segments(std::vector<std::pair<Vec3i, Vec3i>> segs,
                                               Vec3i n) {
    const Vec3i dir{-n[1], n[0], 0};
    for (auto& s : segs)
        if (dot(s.first, dir) > dot(s.second, dir)) std::swap(s.first, s.second);
    std::sort(segs.begin(), segs.end(), [&](const auto& a, const auto& b) {
        return dot(a.first, dir) < dot(b.first, dir);
    });
    std::vector<std::vector<Vec3i>> out;
    size_t k = 0;
    while (k < segs.size()) {
        const Vec3i lo = segs[k].first;
        Vec3i hi = segs[k].second;
        size_t j = k + 1;
        while (j < segs.size() && segs[j].first == hi) hi = segs[j++].second;
        out.push_back({lo, hi});
        k = j;
    }
    return out;
}

}  // namespace

std::vector<std::pair<Vec3d, double>> DualFace::quadrature(int max_level) const {
    std::vector<std::pair<Vec3d, double>> q;
    const size_t n = verts.size();
    if (n == 2) {  // 2D segment: trapezoidal rule
        q.emplace_back(to_physical(verts[0], max_level), area / 2.0);
        q.emplace_back(to_physical(verts[1], max_level), area / 2.0);
        return q;
    }
    std::vector<Vec3d> p(n);
    Vec3d mean{0, 0, 0};
    for (size_t i = 0; i < n; ++i) {
        p[i] = to_physical(verts[i], max_level);
        mean = mean + p[i];
    }
    mean = (1.0 / double(n)) * mean;
    std::vector<double> w(n, 0.0);
    double total = 0.0;
    for (size_t i = 0; i < n; ++i) {
        const size_t i1 = (i + 1) % n;
        const double t = 0.5 * dot(cross(p[i] - mean, p[i1] - mean), unit_normal);
        w[i] += t / 3.0;
        w[i1] += t / 3.0;
        total += t;  // the fan-center share, redistributed below
    }
    for (size_t i = 0; i < n; ++i) {
        q.emplace_back(p[i], w[i] + total / (3.0 * double(n)));
    }
    return q;
}

int64_t DualMesh::cell_index(const NodeKey& n) const {
    const auto& nodes = grid_->nodes();
    const auto it = std::lower_bound(nodes.begin(), nodes.end(), n);
    if (it == nodes.end() || !(*it == n)) return -1;
    return it - nodes.begin();
}

const LocalPattern& DualMesh::pattern(RefinementKey key) const {
    return *patterns_.at(key);
}

int64_t DualMesh::total_volume_units() const {
    int64_t t = 0;
    for (const auto& c : cells_) t += c.volume_units;
    return t;
}

int64_t DualMesh::volume_unit_den() const {
    const int dim = grid_->dim();
    return voromesh::volume_unit_den(dim) * (int64_t(1) << (dim * grid_->max_level()));
}

DualMesh assemble(const PrimalGrid& grid, const PatternTable& table) {
    if (table.dim != grid.dim())
        throw std::invalid_argument("assemble: table and grid dimensions differ");
    DualMesh mesh;
    mesh.grid_ = &grid;
    const int dim = grid.dim();
    const int L = grid.max_level();

    mesh.cells_.resize(grid.nodes().size());
    for (size_t i = 0; i < grid.nodes().size(); ++i) mesh.cells_[i].node = grid.nodes()[i];

    mesh.leaf_keys_.reserve(grid.leaves().size());
    const double unit =
        1.0 / (double(voromesh::volume_unit_den(dim)) * double(int64_t(1) << (dim * L)));
    for (const auto& leaf : grid.leaves()) {
        const RefinementKey key = grid.refinement_key(leaf);
        mesh.leaf_keys_.push_back(key);
        auto it = mesh.patterns_.find(key);
        if (it == mesh.patterns_.end())
            it = mesh.patterns_
                     .emplace(key, std::make_unique<LocalPattern>(instantiate(table, key)))
                     .first;
        const LocalPattern& pat = *it->second;
        const int64_t scale_units = int64_t(1) << (dim * (L - leaf.level));
        for (const auto& r : pat.regions) {
            const NodeKey n = grid.global_node(leaf, node_position(dim, r.node));
            const int64_t ci = mesh.cell_index(n);
            assert(ci >= 0);
            auto& cell = mesh.cells_[size_t(ci)];
            cell.volume_units += r.volume_units * scale_units;
            cell.contributing_leaves.push_back(leaf);
        }
    }
    for (auto& c : mesh.cells_) c.volume = double(c.volume_units) * unit;
    return mesh;
}

std::vector<DualFace> DualMesh::cell_faces(size_t cell_idx) const {
    const int dim = grid_->dim();
    const int L = grid_->max_level();
    const DualCell& cell = cells_[cell_idx];
    const NodeKey N = cell.node;

    // gather exact face pieces per (neighbor node, plane)
    std::map<std::pair<NodeKey, PlaneKey>, std::vector<std::vector<Vec3i>>> groups;
    std::map<PlaneKey, std::vector<std::vector<Vec3i>>> patch_groups;

    const auto& leaf_index = grid_->leaves();
    for (const auto& leaf : cell.contributing_leaves) {
        const size_t li =
            size_t(std::lower_bound(leaf_index.begin(), leaf_index.end(), leaf) -
                   leaf_index.begin());
        const LocalPattern& pat = *patterns_.at(leaf_keys_[li]);
        const int32_t s = int32_t(1) << (L - leaf.level);

        // leaf-local id of N
        Vec3i local{0, 0, 0};
        bool on_cell = true;
        for (int i = 0; i < 3; ++i) {
            const int32_t rel = N[i] - leaf.coords[i] * s;
            if (rel == 0) local[i] = 0;
            else if (2 * rel == s) local[i] = kRefScale / 2;
            else if (rel == s) local[i] = kRefScale;
            else on_cell = false;
        }
        if (!on_cell) throw std::logic_error("cell_faces: node not on contributing leaf");
        const int local_id = node_from_position(dim, local);
        assert(local_id >= 0);

        auto to_global = [&](Vec3i v48) {
            return Vec3i{(leaf.coords[0] * kRefScale + v48[0]) * s,
                         (leaf.coords[1] * kRefScale + v48[1]) * s,
                         (leaf.coords[2] * kRefScale + v48[2]) * s};
        };

        for (const auto& f : pat.faces) {
            if (f.a != local_id && f.b != local_id) continue;
            const bool from_a = f.a == local_id;
            const int other = from_a ? f.b : f.a;
            const NodeKey M = grid_->global_node(leaf, node_position(dim, other));
            Vec3i n = f.poly.normal;
            std::vector<Vec3i> verts;
            verts.reserve(f.poly.verts.size());
            if (from_a)
                for (const auto& v : f.poly.verts) verts.push_back(to_global(v));
            else {
                for (auto it = f.poly.verts.rbegin(); it != f.poly.verts.rend(); ++it)
                    verts.push_back(to_global(*it));
                n = Vec3i{-n[0], -n[1], -n[2]};
            }
            const PlaneKey pk{n, dot(n, verts[0])};
            groups[{M, pk}].push_back(std::move(verts));
        }

        // domain-boundary pieces owned by N
        for (int f = 0; f < 2 * dim; ++f) {
            const int axis = f / 2, side = f % 2;
            const int32_t edge = side == 0 ? 0 : (int32_t(1) << leaf.level) - 1;
            if (leaf.coords[axis] != edge) continue;
            const auto& trace = pat.traces[size_t(f)];
            if (dim == 3) {
                const int u = axis == 0 ? 1 : 0;
                const int v = axis == 2 ? 1 : 2;
                const auto& atoms2 = subdivide_reference_cell(2);
                for (size_t slot = 0; slot < trace.size(); ++slot) {
                    if (trace[slot] != local_id) continue;
                    std::vector<Vec3i> verts;
                    for (const auto& a2 : atoms2[slot].verts) {
                        Vec3i p{0, 0, 0};
                        p[axis] = side * kRefScale;
                        p[u] = a2[0];
                        p[v] = a2[1];
                        verts.push_back(to_global(p));
                    }
                    // outward winding: 2D loops are CCW in the (u,v) frame,
                    // whose orientation about +axis flips for axis == 1
                    const int frame_sign = axis == 1 ? -1 : 1;
                    const int want_sign = side == 1 ? 1 : -1;
                    if (frame_sign != want_sign) std::reverse(verts.begin(), verts.end());
                    Vec3i n{0, 0, 0};
                    n[axis] = want_sign;
                    patch_groups[{n, dot(n, verts[0])}].push_back(std::move(verts));
                }
            } else {
                const int u = 1 - axis;
                for (size_t slot = 0; slot < trace.size(); ++slot) {
                    if (trace[slot] != local_id) continue;
                    Vec3i p0{0, 0, 0}, p1{0, 0, 0};
                    p0[axis] = p1[axis] = side * kRefScale;
                    p0[u] = int32_t(slot) * (kRefScale / 4);
                    p1[u] = int32_t(slot + 1) * (kRefScale / 4);
                    Vec3i n{0, 0, 0};
                    n[axis] = side == 1 ? 1 : -1;
                    patch_groups[{n, dot(n, to_global(p0))}].push_back(
                        {to_global(p0), to_global(p1)});
                }
            }
        }
    }

    std::vector<DualFace> out;
    auto emit = [&](const PlaneKey& pk, const std::vector<std::vector<Vec3i>>& polys,
                    const NodeKey& neighbor, bool boundary) {
        std::vector<std::vector<Vec3i>> merged;
        if (dim == 3) {
            merged = merge_coplanar_polygons(polys, pk.n, /*split_t_junctions=*/true);
        } else {
            std::vector<std::pair<Vec3i, Vec3i>> segs;
            for (const auto& s : polys) segs.emplace_back(s[0], s[1]);
            merged = merge_segments(std::move(segs), pk.n);
        }
        for (auto& poly : merged) {
            DualFace df;
            df.owner = cells_[cell_idx].node;
            df.neighbor = neighbor;
            df.on_domain_boundary = boundary;
            df.normal_dir = pk.n;
            df.unit_normal = unit_of(pk.n);
            df.area = physical_area(poly, pk.n, dim, L);
            df.verts = std::move(poly);
            out.push_back(std::move(df));
        }
    };
    for (const auto& [key, polys] : groups) emit(key.second, polys, key.first, false);
    for (const auto& [pk, polys] : patch_groups) emit(pk, polys, cells_[cell_idx].node, true);
    return out;
}

GaussReport gauss_check(const DualMesh& mesh) {
    const int dim = mesh.dim();
    const int L = mesh.grid().max_level();
    GaussReport rep;
    for (size_t ci = 0; ci < mesh.cells().size(); ++ci) {
        const DualCell& cell = mesh.cells()[ci];
        double surface = 0.0;
        Vec3d closed{0, 0, 0};
        double total_area = 0.0;
        for (const auto& f : mesh.cell_faces(ci)) {
            for (const auto& [x, w] : f.quadrature(L))
                surface += w * dot(x, f.unit_normal) / double(dim);
            closed = closed + f.area * f.unit_normal;
            total_area += f.area;
            if (f.on_domain_boundary)
                for (const auto& [x, w] : f.quadrature(L))
                    rep.total_boundary_flux += w * dot(x, f.unit_normal) / double(dim);
        }
        const double rel = std::abs(surface - cell.volume) / cell.volume;
        if (rel > rep.max_rel_residual) {
            rep.max_rel_residual = rel;
            rep.worst_node = cell.node;
        }
        rep.max_closedness = std::max(rep.max_closedness, norm(closed) / total_area);
    }
    return rep;
}

double sampling_oracle_check(const PrimalGrid& grid, const DualMesh& mesh, int resolution) {
    if (grid.leaves().size() > 500)
        throw std::invalid_argument("sampling_oracle_check: grid too large (> 500 leaves)");
    const int dim = grid.dim();
    const int L = grid.max_level();
    const int64_t R = 2 * int64_t(resolution);  // node/sample coordinate scale: 2^L * R

    std::vector<int64_t> counts(grid.nodes().size(), 0);
    const auto& nodes = grid.nodes();

    for (const auto& leaf : grid.leaves()) {
        const int32_t s = int32_t(1) << (L - leaf.level);
        // candidate nodes: within half a leaf edge of the closed leaf box
        std::vector<std::pair<NodeKey, size_t>> cand;
        for (size_t ni = 0; ni < nodes.size(); ++ni) {
            bool ok = true;
            for (int a = 0; a < dim; ++a) {
                const int64_t lo = int64_t(leaf.coords[a]) * s * R - s * R / 2;
                const int64_t hi = (int64_t(leaf.coords[a]) + 1) * s * R + s * R / 2;
                const int64_t x = int64_t(nodes[ni][a]) * R;
                ok = ok && x >= lo && x <= hi;
            }
            if (ok) cand.emplace_back(nodes[ni], ni);
        }
        const int64_t n_axis = int64_t(resolution) * s;  // samples per axis in this leaf
        const int64_t nz = dim == 3 ? n_axis : 1;
        for (int64_t i = 0; i < n_axis; ++i)
            for (int64_t j = 0; j < n_axis; ++j)
                for (int64_t k = 0; k < nz; ++k) {
                    const int64_t sx = int64_t(leaf.coords[0]) * s * R + (2 * i + 1);
                    const int64_t sy = int64_t(leaf.coords[1]) * s * R + (2 * j + 1);
                    const int64_t sz =
                        dim == 3 ? int64_t(leaf.coords[2]) * s * R + (2 * k + 1) : 0;
                    int64_t best_dinf = -1, best_d2 = 0;
                    size_t best = 0;
                    for (const auto& [nk, ni] : cand) {
                        const int64_t dx = std::abs(sx - nk[0] * R);
                        const int64_t dy = std::abs(sy - nk[1] * R);
                        const int64_t dz = dim == 3 ? std::abs(sz - nk[2] * R) : 0;
                        const int64_t dinf = std::max({dx, dy, dz});
                        const int64_t d2 = dx * dx + dy * dy + dz * dz;
                        if (best_dinf < 0 || dinf < best_dinf ||
                            (dinf == best_dinf &&
                             (d2 < best_d2 ||
                              (d2 == best_d2 && nodes[ni] < nodes[best])))) {
                            best_dinf = dinf;
                            best_d2 = d2;
                            best = ni;
                        }
                    }
                    ++counts[best];
                }
    }

    const double total = std::pow(double(int64_t(resolution) << L), dim);
    double max_err = 0.0;
    for (size_t ni = 0; ni < counts.size(); ++ni) {
        const double frac = double(counts[ni]) / total;
        max_err = std::max(max_err, std::abs(frac - mesh.cells()[ni].volume));
    }
    return max_err;
}

MeshStats mesh_stats(const PrimalGrid& grid, const PatternTable& table,
                     const DualMesh& mesh) {
    MeshStats st;
    st.leaves = int64_t(grid.leaves().size());
    st.primal_faces = count_faces(grid);
    st.primal_nodes = int64_t(grid.nodes().size());
    st.dual_cells = int64_t(mesh.cells().size());

    std::unordered_set<Vec3i, Vec3iHash> corners;
    for (size_t ci = 0; ci < mesh.cells().size(); ++ci)
        for (const auto& f : mesh.cell_faces(ci)) {
            if (f.on_domain_boundary) continue;
            for (const auto& v : f.verts) corners.insert(v);
        }
    st.dual_nodes = int64_t(corners.size());

    std::unordered_set<int32_t> canon;
    int64_t trivial = 0;
    for (const RefinementKey k : mesh.leaf_keys()) {
        canon.insert(table.index.at(k).canon_id);
        if (k == 0) ++trivial;
    }
    st.distinct_patterns = int64_t(canon.size());
    st.trivial_fraction = double(trivial) / double(grid.leaves().size());
    return st;
}

}  // namespace voromesh
