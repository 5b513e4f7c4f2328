#include "voromesh/staggered_solver.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <stdexcept>

namespace voromesh {

Vec3d VelocityModel::rotate(Vec3d x, double angle) const {
    const Vec3d v = x - center;
    const double c = std::cos(angle), s = std::sin(angle);
    const Vec3d kxv = cross(axis, v);
    const double kv = dot(axis, v);
    return center + c * v + s * kxv + (kv * (1.0 - c)) * axis;
}

double VelocityModel::cone_profile(Vec3d x) const {
    const Vec3d rel = x - center;
    if (rel[0] < 0.0 || rel[1] < 0.0 || rel[2] < 0.0) return 0.0;
    const double r2 = dot(rel, rel) / (radius * radius);
    const double q = 4.0 * std::abs(1.0 - r2);
    if (q < 0.5) return 1.0 - 2.0 * q * q;
    if (q <= 1.0) return 2.0 * (q - 1.0) * (q - 1.0);
    return 0.0;
}

namespace {

Vec3d polygon_centroid(const std::vector<Vec3i>& verts, Vec3d n_unit) {
    const double inv = 1.0 / double(kRefScale);
    if (verts.size() == 2) {
        return {(verts[0][0] + verts[1][0]) * 0.5 * inv,
                (verts[0][1] + verts[1][1]) * 0.5 * inv,
                (verts[0][2] + verts[1][2]) * 0.5 * inv};
    }
    Vec3d v0{verts[0][0] * inv, verts[0][1] * inv, verts[0][2] * inv};
    double area = 0.0;
    Vec3d c{0, 0, 0};
    for (size_t i = 1; i + 1 < verts.size(); ++i) {
        const Vec3d a{verts[i][0] * inv, verts[i][1] * inv, verts[i][2] * inv};
        const Vec3d b{verts[i + 1][0] * inv, verts[i + 1][1] * inv, verts[i + 1][2] * inv};
        const double t = 0.5 * dot(cross(a - v0, b - v0), n_unit);
        area += t;
        c = c + (t / 3.0) * (v0 + a + b);
    }
    return (1.0 / area) * c;
}

}  // namespace

const StaggeredScheme::KeyGeom& StaggeredScheme::key_geom(RefinementKey key) {
    auto it = key_geoms_.find(key);
    if (it != key_geoms_.end()) return it->second;

    const LocalPattern& pat = mesh_->pattern(key);
    KeyGeom g;
    std::array<int, 26> node_to_region;
    node_to_region.fill(-1);
    for (size_t ri = 0; ri < pat.regions.size(); ++ri) {
        const auto& r = pat.regions[ri];
        g.region_volfrac.push_back(double(r.volume_units) /
                                   double(volume_unit_den(dim_)));
        g.region_node.push_back(r.node);
        node_to_region[size_t(r.node)] = int(ri);
    }
    for (const auto& f : pat.faces) {
        KeyGeom::Piece p;
        p.ra = node_to_region[size_t(f.a)];
        p.rb = node_to_region[size_t(f.b)];
        const double len = std::sqrt(double(dot(f.poly.normal, f.poly.normal)));
        p.n = Vec3d{f.poly.normal[0] / len, f.poly.normal[1] / len, f.poly.normal[2] / len};
        p.c = polygon_centroid(f.poly.verts, p.n);
        p.area = f.poly.area.value() * (f.poly.sqrt2 ? std::sqrt(2.0) : 1.0);
        g.pieces.push_back(p);
    }
    // trace regions merged per owner: one flux point per (face, region),
    // located at the owned area's centroid (the quarter points of the
    // trivial pattern); exact for affine integrands over the whole region
    std::map<std::pair<int, int>, std::pair<Vec3d, double>> merged;
    if (dim_ == 3) {
        const auto& atoms2 = subdivide_reference_cell(2);
        for (int f = 0; f < 6; ++f) {
            const int axis = f / 2, side = f % 2;
            const int u = axis == 0 ? 1 : 0;
            const int v = axis == 2 ? 1 : 2;
            for (size_t slot = 0; slot < pat.traces[size_t(f)].size(); ++slot) {
                const int region = node_to_region[size_t(pat.traces[size_t(f)][slot])];
                Vec3d c{0, 0, 0};
                c[axis] = double(side);
                c[u] = atoms2[slot].centroid[0] / double(kRefScale);
                c[v] = atoms2[slot].centroid[1] / double(kRefScale);
                const double a = double(atoms2[slot].volume_units) / double(kVolumeUnit2D);
                auto& acc = merged[{f, region}];
                acc.first = acc.first + a * c;
                acc.second += a;
            }
        }
    } else {
        for (int f = 0; f < 4; ++f) {
            const int axis = f / 2, side = f % 2;
            const int u = 1 - axis;
            for (size_t slot = 0; slot < pat.traces[size_t(f)].size(); ++slot) {
                const int region = node_to_region[size_t(pat.traces[size_t(f)][slot])];
                Vec3d c{0, 0, 0};
                c[axis] = double(side);
                c[u] = (double(slot) + 0.5) / 4.0;
                auto& acc = merged[{f, region}];
                acc.first = acc.first + 0.25 * c;
                acc.second += 0.25;
            }
        }
    }
    for (const auto& [key2, acc] : merged) {
        KeyGeom::TracePiece tp;
        tp.face = key2.first;
        tp.region = key2.second;
        tp.c = (1.0 / acc.second) * acc.first;
        tp.area = acc.second;
        g.trace.push_back(tp);
    }
    return key_geoms_.emplace(key, std::move(g)).first->second;
}

double StaggeredScheme::flux_point_distance_p2d(const LeafGeom& lg, Vec3d local) const {
    double d = 1.0;
    for (int a = 0; a < dim_; ++a) d = std::min(d, std::min(local[a], 1.0 - local[a]));
    return d * lg.h;
}

StaggeredScheme::StaggeredScheme(const DualMesh& mesh) : mesh_(&mesh), dim_(mesh.dim()) {
    const PrimalGrid& grid = mesh.grid();
    const auto& leaves = grid.leaves();
    leaves_.resize(leaves.size());
    d_min_ = 1.0;

    for (size_t li = 0; li < leaves.size(); ++li) {
        const CellIndex& cell = leaves[li];
        LeafGeom& lg = leaves_[li];
        lg.h = std::pow(0.5, double(cell.level));
        lg.origin = Vec3d{cell.coords[0] * lg.h, cell.coords[1] * lg.h,
                          cell.coords[2] * lg.h};
        lg.cellvol = std::pow(lg.h, double(dim_));
        const RefinementKey key = mesh.leaf_keys()[li];
        lg.geom = &key_geom(key);

        const LocalPattern& pat = mesh.pattern(key);
        lg.region_cell.reserve(pat.regions.size());
        for (const auto& r : pat.regions) {
            const NodeKey n = grid.global_node(cell, node_position(dim_, r.node));
            const int64_t ci = mesh.cell_index(n);
            assert(ci >= 0);
            lg.region_cell.push_back(int32_t(ci));
        }

        lg.face_neighbor.fill(-2);
        lg.owns_face.fill(false);
        for (int f = 0; f < 2 * dim_; ++f) {
            const int axis = f / 2, side = f % 2;
            Vec3i d{0, 0, 0};
            d[axis] = side == 1 ? 1 : -1;
            const CellIndex nb{cell.level, cell.coords + d};
            if (!grid.in_domain(nb)) {
                lg.face_neighbor[size_t(f)] = -1;
                lg.owns_face[size_t(f)] = true;
                continue;
            }
            const auto cov = grid.leaf_covering(nb);
            if (!cov) continue;  // neighbor finer: integrated from that side
            const auto& ls = grid.leaves();
            const int64_t nli =
                std::lower_bound(ls.begin(), ls.end(), *cov) - ls.begin();
            lg.face_neighbor[size_t(f)] = nli;
            lg.owns_face[size_t(f)] = cov->level < cell.level || side == 1;
        }
    }

    // flux quadrature points and CFL distances
    const auto& grid_leaves = grid.leaves();
    for (size_t li = 0; li < leaves_.size(); ++li) {
        const LeafGeom& lg = leaves_[li];
        auto phys = [&](Vec3d local) {
            return Vec3d{lg.origin[0] + lg.h * local[0], lg.origin[1] + lg.h * local[1],
                         lg.origin[2] + lg.h * local[2]};
        };
        for (const auto& p : lg.geom->pieces) {
            flux_points_.push_back(phys(p.c));
            d_min_ = std::min(d_min_, flux_point_distance_p2d(lg, p.c));
        }
        // trace points: distance to the owning dual cell boundary via the
        // local Voronoi gap (half the margin to the second-nearest node)
        std::vector<std::pair<int, NodeKey>> nodes =
            grid.boundary_nodes(grid_leaves[li]);
        for (const auto& tp : lg.geom->trace) {
            const int f = tp.face;
            if (!lg.owns_face[size_t(f)]) continue;
            const Vec3d x = phys(tp.c);
            flux_points_.push_back(x);

            auto both = nodes;
            if (lg.face_neighbor[size_t(f)] >= 0) {
                const auto nb_nodes = grid.boundary_nodes(
                    grid_leaves[size_t(lg.face_neighbor[size_t(f)])]);
                both.insert(both.end(), nb_nodes.begin(), nb_nodes.end());
            }
            const NodeKey owner = grid.global_node(
                grid_leaves[li],
                node_position(dim_, lg.geom->region_node[size_t(tp.region)]));
            const double node_scale = 1.0 / double(int64_t(1) << grid.max_level());
            double d_owner = 0.0, d_other = 2.0;
            for (const auto& [id, nk] : both) {
                double dinf = 0.0;
                for (int a = 0; a < dim_; ++a)
                    dinf = std::max(dinf, std::abs(x[a] - nk[a] * node_scale));
                if (nk == owner)
                    d_owner = dinf;
                else
                    d_other = std::min(d_other, dinf);
            }
            const double gap = 0.5 * (d_other - d_owner);
            if (gap > 0.0) d_min_ = std::min(d_min_, gap);

            if (lg.face_neighbor[size_t(f)] == -1) {
                // boundary patch also serves the primal->dual step with
                // leaf data: lateral distance to the leaf boundary
                double lat = 1.0;
                for (int a = 0; a < dim_; ++a) {
                    if (a == f / 2) continue;
                    lat = std::min(lat, std::min(tp.c[a], 1.0 - tp.c[a]));
                }
                d_min_ = std::min(d_min_, lat * lg.h);
            }
        }
    }
}

Field StaggeredScheme::init_primal(const std::function<double(Vec3d)>& fn) const {
    Field f;
    f.tag = Field::Tag::Primal;
    f.values.resize(leaves_.size());
    const int nz = dim_ == 3 ? 3 : 1;
    for (size_t li = 0; li < leaves_.size(); ++li) {
        const LeafGeom& lg = leaves_[li];
        double acc = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j)
                for (int k = 0; k < nz; ++k)
                    acc += fn({lg.origin[0] + lg.h * (i + 0.5) / 3.0,
                               lg.origin[1] + lg.h * (j + 0.5) / 3.0,
                               lg.origin[2] + lg.h * (k + 0.5) / 3.0});
        f.values[li] = acc / double(9 * nz);
    }
    return f;
}

Field StaggeredScheme::init_cone(const VelocityModel& model) const {
    return init_primal([&](Vec3d x) { return model.cone_profile(x); });
}

double StaggeredScheme::max_timestep(const VelocityField& velocity, double cfl,
                                     double cap) const {
    double amax = 0.0;
    for (const auto& x : flux_points_) amax = std::max(amax, norm(velocity(x)));
    if (amax <= 0.0) return cap;
    return std::min(cap, cfl * 2.0 * d_min_ / amax);
}

Field StaggeredScheme::half_step_primal_to_dual(const Field& f,
                                                const VelocityField& velocity, double dt,
                                                SchemeConfig::Boundary bc,
                                                double checked_bound) const {
    if (f.tag != Field::Tag::Primal || f.values.size() != leaves_.size())
        throw std::invalid_argument("half_step_primal_to_dual: field is not primal");
    const double bound =
        checked_bound >= 0.0 ? checked_bound : max_timestep(velocity, 1.0, 1e300);
    if (dt > bound * (1.0 + 1e-9))
        throw std::runtime_error("half_step_primal_to_dual: CFL violated");

    const auto& cells = mesh_->cells();
    std::vector<double> acc(cells.size(), 0.0), flux(cells.size(), 0.0);
    for (size_t li = 0; li < leaves_.size(); ++li) {
        const LeafGeom& lg = leaves_[li];
        const double v = f.values[li];
        const double facevol = std::pow(lg.h, double(dim_ - 1));
        for (size_t ri = 0; ri < lg.region_cell.size(); ++ri)
            acc[size_t(lg.region_cell[ri])] += v * lg.geom->region_volfrac[ri] * lg.cellvol;
        for (const auto& p : lg.geom->pieces) {
            const Vec3d x{lg.origin[0] + lg.h * p.c[0], lg.origin[1] + lg.h * p.c[1],
                          lg.origin[2] + lg.h * p.c[2]};
            const double rate = dot(velocity(x), p.n) * p.area * facevol;
            flux[size_t(lg.region_cell[size_t(p.ra)])] += rate * v;
            flux[size_t(lg.region_cell[size_t(p.rb)])] -= rate * v;
        }
        for (const auto& tp : lg.geom->trace) {
            if (lg.face_neighbor[size_t(tp.face)] != -1) continue;  // interior face
            const int axis = tp.face / 2;
            Vec3d n{0, 0, 0};
            n[axis] = tp.face % 2 == 1 ? 1.0 : -1.0;
            const Vec3d x{lg.origin[0] + lg.h * tp.c[0], lg.origin[1] + lg.h * tp.c[1],
                          lg.origin[2] + lg.h * tp.c[2]};
            const double rate = dot(velocity(x), n) * tp.area * facevol;
            const double value = rate > 0.0
                                     ? v
                                     : (bc == SchemeConfig::Boundary::Transmissive ? v : 0.0);
            flux[size_t(lg.region_cell[size_t(tp.region)])] += rate * value;
        }
    }
    Field out;
    out.tag = Field::Tag::Dual;
    out.values.resize(cells.size());
    for (size_t ci = 0; ci < cells.size(); ++ci)
        out.values[ci] = (acc[ci] - dt * flux[ci]) / cells[ci].volume;
    return out;
}

Field StaggeredScheme::half_step_dual_to_primal(const Field& f,
                                                const VelocityField& velocity, double dt,
                                                SchemeConfig::Boundary bc,
                                                double checked_bound) const {
    if (f.tag != Field::Tag::Dual || f.values.size() != mesh_->cells().size())
        throw std::invalid_argument("half_step_dual_to_primal: field is not dual");
    const double bound =
        checked_bound >= 0.0 ? checked_bound : max_timestep(velocity, 1.0, 1e300);
    if (dt > bound * (1.0 + 1e-9))
        throw std::runtime_error("half_step_dual_to_primal: CFL violated");

    std::vector<double> acc(leaves_.size(), 0.0), flux(leaves_.size(), 0.0);
    for (size_t li = 0; li < leaves_.size(); ++li) {
        const LeafGeom& lg = leaves_[li];
        const double facevol = std::pow(lg.h, double(dim_ - 1));
        for (size_t ri = 0; ri < lg.region_cell.size(); ++ri)
            acc[li] += f.values[size_t(lg.region_cell[ri])] * lg.geom->region_volfrac[ri] *
                       lg.cellvol;
        for (const auto& tp : lg.geom->trace) {
            if (!lg.owns_face[size_t(tp.face)]) continue;
            const int axis = tp.face / 2;
            Vec3d n{0, 0, 0};
            n[axis] = tp.face % 2 == 1 ? 1.0 : -1.0;
            const Vec3d x{lg.origin[0] + lg.h * tp.c[0], lg.origin[1] + lg.h * tp.c[1],
                          lg.origin[2] + lg.h * tp.c[2]};
            const double rate = dot(velocity(x), n) * tp.area * facevol;
            const double vd = f.values[size_t(lg.region_cell[size_t(tp.region)])];
            const int64_t nb = lg.face_neighbor[size_t(tp.face)];
            double piece_flux;
            if (nb == -1)
                piece_flux =
                    rate > 0.0
                        ? rate * vd
                        : (bc == SchemeConfig::Boundary::Transmissive ? rate * vd : 0.0);
            else
                piece_flux = rate * vd;
            flux[li] += piece_flux;
            if (nb >= 0) flux[size_t(nb)] -= piece_flux;
        }
    }
    Field out;
    out.tag = Field::Tag::Primal;
    out.values.resize(leaves_.size());
    for (size_t li = 0; li < leaves_.size(); ++li)
        out.values[li] = (acc[li] - dt * flux[li]) / leaves_[li].cellvol;
    return out;
}

double StaggeredScheme::mass(const Field& f) const {
    double m = 0.0;
    if (f.tag == Field::Tag::Primal) {
        for (size_t li = 0; li < leaves_.size(); ++li)
            m += f.values[li] * leaves_[li].cellvol;
    } else {
        for (size_t ci = 0; ci < mesh_->cells().size(); ++ci)
            m += f.values[ci] * mesh_->cells()[ci].volume;
    }
    return m;
}

double StaggeredScheme::l1_error(const Field& primal, const VelocityModel& model,
                                 double t) const {
    const Field exact = init_primal([&](Vec3d x) { return model.exact(x, t); });
    double e = 0.0;
    for (size_t li = 0; li < leaves_.size(); ++li)
        e += std::abs(primal.values[li] - exact.values[li]) * leaves_[li].cellvol;
    return e;
}

double StaggeredScheme::linf_error(const Field& primal, const VelocityModel& model,
                                   double t) const {
    const Field exact = init_primal([&](Vec3d x) { return model.exact(x, t); });
    double e = 0.0;
    for (size_t li = 0; li < leaves_.size(); ++li)
        e = std::max(e, std::abs(primal.values[li] - exact.values[li]));
    return e;
}

RunReport StaggeredScheme::run_advection(const VelocityModel& model,
                                         const SchemeConfig& cfg) const {
    if (cfg.cfl <= 0.0 || cfg.cfl > 1.0)
        throw std::invalid_argument("run_advection: cfl must be in (0,1]");
    const VelocityField velocity = [&model](Vec3d x) { return model(x); };
    const double bound = max_timestep(velocity, cfg.cfl, cfg.t_end);
    const double hard = max_timestep(velocity, 1.0, 1e300);

    RunReport rep;
    Field field = init_cone(model);
    double t = 0.0;
    int step = 0;
    auto record = [&]() {
        double vmin = field.values[0], vmax = field.values[0];
        for (double v : field.values) {
            vmin = std::min(vmin, v);
            vmax = std::max(vmax, v);
        }
        rep.records.push_back({step, t, mass(field), vmin, vmax,
                               l1_error(field, model, t), linf_error(field, model, t)});
    };
    record();
    while (t < cfg.t_end - 1e-14) {
        const double dt = std::min(bound, (cfg.t_end - t) / 2.0);
        const Field dual = half_step_primal_to_dual(field, velocity, dt, cfg.boundary, hard);
        field = half_step_dual_to_primal(dual, velocity, dt, cfg.boundary, hard);
        ++step;
        t += 2.0 * dt;
        if (step % cfg.report_every == 0 || t >= cfg.t_end - 1e-14) record();
    }
    rep.final_field = std::move(field);
    return rep;
}

}  // namespace voromesh
