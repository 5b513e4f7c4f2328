#include "voromesh/primal_grid.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace voromesh {

namespace {

/// Face and edge neighbor offsets (unit steps in cell coordinates).
std::vector<Vec3i> neighbor_offsets(int dim) {
    std::vector<Vec3i> offs;
    if (dim == 3) {
        for (int a = 0; a < 3; ++a)
            for (int s : {-1, 1}) {
                Vec3i d{0, 0, 0};
                d[a] = s;
                offs.push_back(d);  // 6 faces
            }
        for (int a = 0; a < 3; ++a)
            for (int s1 : {-1, 1})
                for (int s2 : {-1, 1}) {
                    Vec3i d{0, 0, 0};
                    d[(a + 1) % 3] = s1;
                    d[(a + 2) % 3] = s2;
                    offs.push_back(d);  // 12 edges
                }
    } else {
        // 2D grading constrains edge-adjacent cells only; corner-only
        // contact may jump two levels (the Lemma-1 carve-out case)
        for (int a = 0; a < 2; ++a)
            for (int s : {-1, 1}) {
                Vec3i d{0, 0, 0};
                d[a] = s;
                offs.push_back(d);
            }
    }
    return offs;
}

struct Builder {
    int dim;
    int level_cap;
    std::unordered_set<CellIndex, CellIndexHash> leaves;
    std::vector<Vec3i> offs;

    bool in_domain(const CellIndex& c) const {
        const int32_t n = int32_t(1) << c.level;
        for (int i = 0; i < dim; ++i)
            if (c.coords[i] < 0 || c.coords[i] >= n) return false;
        return true;
    }

    std::optional<CellIndex> covering(CellIndex c) const {
        while (true) {
            if (leaves.count(c)) return c;
            if (c.level == 0) return std::nullopt;
            c = CellIndex{c.level - 1, {c.coords[0] >> 1, c.coords[1] >> 1, c.coords[2] >> 1}};
        }
    }

    void split(const CellIndex& cell) {
        if (cell.level + 1 > level_cap)
            throw std::runtime_error("refine: level cap exceeded (runaway closure?)");
        // grading first: every face/edge neighbor must reach cell.level
        for (const auto& d : offs) {
            const CellIndex nb{cell.level, cell.coords + d};
            if (!in_domain(nb)) continue;
            while (true) {
                const auto cov = covering(nb);
                if (!cov || cov->level >= cell.level) break;
                split(*cov);
            }
        }
        const auto it = leaves.find(cell);
        assert(it != leaves.end());
        leaves.erase(it);
        const int nz = dim == 3 ? 1 : 0;
        for (int dx = 0; dx <= 1; ++dx)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dz = 0; dz <= nz; ++dz)
                    leaves.insert(CellIndex{
                        cell.level + 1,
                        {2 * cell.coords[0] + dx, 2 * cell.coords[1] + dy,
                         2 * cell.coords[2] + dz}});
    }
};

}  // namespace

void PrimalGrid::finalize() {
    std::sort(leaves_.begin(), leaves_.end());
    leaf_set_.clear();
    leaf_set_.insert(leaves_.begin(), leaves_.end());
    max_level_ = 0;
    for (const auto& c : leaves_) max_level_ = std::max(max_level_, int(c.level));

    nodes_.clear();
    nodes_.reserve(leaves_.size() * (dim_ == 3 ? 8 : 4));
    const int nz = dim_ == 3 ? 1 : 0;
    for (const auto& c : leaves_) {
        const int32_t s = int32_t(1) << (max_level_ - c.level);
        for (int dx = 0; dx <= 1; ++dx)
            for (int dy = 0; dy <= 1; ++dy)
                for (int dz = 0; dz <= nz; ++dz)
                    nodes_.push_back({(c.coords[0] + dx) * s, (c.coords[1] + dy) * s,
                                      (c.coords[2] + dz) * s});
    }
    std::sort(nodes_.begin(), nodes_.end());
    nodes_.erase(std::unique(nodes_.begin(), nodes_.end()), nodes_.end());
}

PrimalGrid PrimalGrid::unit_cube(int dim, int level_cap) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("PrimalGrid: dim must be 2 or 3");
    PrimalGrid g;
    g.dim_ = dim;
    g.level_cap_ = level_cap;
    g.leaves_ = {CellIndex{0, {0, 0, 0}}};
    g.finalize();
    return g;
}

PrimalGrid PrimalGrid::uniform(int dim, int level, int level_cap) {
    if (dim != 2 && dim != 3) throw std::invalid_argument("PrimalGrid: dim must be 2 or 3");
    if (level > level_cap) throw std::invalid_argument("uniform: level above cap");
    PrimalGrid g;
    g.dim_ = dim;
    g.level_cap_ = level_cap;
    const int32_t n = int32_t(1) << level;
    const int32_t nz = dim == 3 ? n : 1;
    for (int32_t i = 0; i < n; ++i)
        for (int32_t j = 0; j < n; ++j)
            for (int32_t k = 0; k < nz; ++k)
                g.leaves_.push_back(CellIndex{level, {i, j, k}});
    g.finalize();
    return g;
}

std::optional<CellIndex> PrimalGrid::leaf_covering(CellIndex c) const {
    while (true) {
        if (is_leaf(c)) return c;
        if (c.level == 0) return std::nullopt;
        c = CellIndex{c.level - 1, {c.coords[0] >> 1, c.coords[1] >> 1, c.coords[2] >> 1}};
    }
}

bool PrimalGrid::in_domain(const CellIndex& c) const {
    const int32_t n = int32_t(1) << c.level;
    for (int i = 0; i < dim_; ++i)
        if (c.coords[i] < 0 || c.coords[i] >= n) return false;
    return true;
}

bool PrimalGrid::region_split(const CellIndex& c) const {
    return in_domain(c) && !leaf_covering(c).has_value();
}

bool PrimalGrid::is_node(const NodeKey& n) const {
    return std::binary_search(nodes_.begin(), nodes_.end(), n);
}

NodeKey PrimalGrid::global_node(const CellIndex& cell, Vec3i local) const {
    const int32_t s = int32_t(1) << (max_level_ - cell.level);
    NodeKey g;
    for (int i = 0; i < 3; ++i) {
        assert(local[i] % (kRefScale / 2) == 0);
        const int32_t halves = local[i] / (kRefScale / 2);  // 0, 1 or 2
        assert(halves % 2 == 0 || s % 2 == 0);
        g[i] = cell.coords[i] * s + (halves * s) / 2;
    }
    return g;
}

RefinementKey PrimalGrid::refinement_key(const CellIndex& cell) const {
    if (!is_leaf(cell)) throw std::invalid_argument("refinement_key: cell is not a leaf");
    if (cell.level == max_level_) return 0;
    RefinementKey key = 0;
    for (int b = 0; b < key_bit_count(dim_); ++b) {
        const NodeKey g = global_node(cell, node_position(dim_, node_of_key_bit(dim_, b)));
        if (is_node(g)) key |= RefinementKey(1) << b;
    }
    assert(key_valid(dim_, key));
    return key;
}

std::vector<std::pair<int, NodeKey>> PrimalGrid::boundary_nodes(const CellIndex& cell) const {
    const RefinementKey key = refinement_key(cell);
    std::vector<std::pair<int, NodeKey>> out;
    const int corners = dim_ == 3 ? 8 : 4;
    for (int c = 0; c < corners; ++c)
        out.emplace_back(c, global_node(cell, node_position(dim_, c)));
    for (int b = 0; b < key_bit_count(dim_); ++b)
        if (key & (RefinementKey(1) << b)) {
            const int id = node_of_key_bit(dim_, b);
            out.emplace_back(id, global_node(cell, node_position(dim_, id)));
        }
    std::sort(out.begin(), out.end());
    return out;
}

double PrimalGrid::leaf_volume(const CellIndex& cell) const {
    return std::pow(dim_ == 3 ? 8.0 : 4.0, -double(cell.level));
}

PrimalGrid refine(const PrimalGrid& grid, std::vector<CellIndex> marked) {
    for (const auto& c : marked)
        if (!grid.is_leaf(c)) throw std::invalid_argument("refine: marked cell is not a leaf");
    std::sort(marked.begin(), marked.end());
    marked.erase(std::unique(marked.begin(), marked.end()), marked.end());

    Builder b;
    b.dim = grid.dim();
    b.level_cap = grid.level_cap();
    b.leaves.insert(grid.leaves().begin(), grid.leaves().end());
    b.offs = neighbor_offsets(grid.dim());
    for (const auto& c : marked)
        if (b.leaves.count(c)) b.split(c);  // may already be gone via closure

    PrimalGrid out;
    out.dim_ = grid.dim();
    out.level_cap_ = grid.level_cap();
    out.leaves_.assign(b.leaves.begin(), b.leaves.end());
    out.finalize();
    return out;
}

PrimalGrid refine_by_indicator(const PrimalGrid& grid,
                               const std::function<bool(Vec3d)>& indicator,
                               int target_level) {
    PrimalGrid g = grid;
    while (true) {
        std::vector<CellIndex> marked;
        for (const auto& cell : g.leaves()) {
            if (cell.level >= target_level) continue;
            const double h = std::pow(0.5, double(cell.level));
            bool first = true, ref = false, change = false;
            const int nz = g.dim() == 3 ? 4 : 0;
            for (int i = 0; i <= 4 && !change; ++i)
                for (int j = 0; j <= 4 && !change; ++j)
                    for (int k = 0; k <= nz && !change; ++k) {
                        const Vec3d p{(cell.coords[0] + i / 4.0) * h,
                                      (cell.coords[1] + j / 4.0) * h,
                                      (cell.coords[2] + k / 4.0) * h};
                        const bool v = indicator(p);
                        if (first) {
                            ref = v;
                            first = false;
                        } else if (v != ref) {
                            change = true;
                        }
                    }
            if (change) marked.push_back(cell);
        }
        if (marked.empty()) return g;
        g = refine(g, std::move(marked));
    }
}

std::function<bool(Vec3d)> paraboloid_indicator() {
    // tilted elliptic paraboloid z' = 2x'^2 + y'^2 - 0.35 in coordinates
    // rotated 20 deg about x then 15 deg about y, centered at (0.5,0.5,0.35)
    const double ax = 20.0 * M_PI / 180.0, ay = 15.0 * M_PI / 180.0;
    const double cx = std::cos(ax), sx = std::sin(ax);
    const double cy = std::cos(ay), sy = std::sin(ay);
    return [=](Vec3d p) {
        const Vec3d q{p[0] - 0.5, p[1] - 0.5, p[2] - 0.35};
        const Vec3d rx{q[0], cx * q[1] - sx * q[2], sx * q[1] + cx * q[2]};
        const Vec3d r{cy * rx[0] + sy * rx[2], rx[1], -sy * rx[0] + cy * rx[2]};
        return 2.0 * r[0] * r[0] + r[1] * r[1] - 0.35 - r[2] > 0.0;
    };
}

std::function<bool(Vec3d)> sphere_indicator() {
    return [](Vec3d p) {
        const Vec3d q{p[0] - 0.5, p[1] - 0.5, p[2] - 0.5};
        return dot(q, q) > 0.3 * 0.3;
    };
}

int64_t count_faces(const PrimalGrid& grid) {
    int64_t faces = 0;
    const int dim = grid.dim();
    for (const auto& cell : grid.leaves())
        for (int a = 0; a < dim; ++a)
            for (int s : {-1, 1}) {
                Vec3i d{0, 0, 0};
                d[a] = s;
                const CellIndex nb{cell.level, cell.coords + d};
                if (!grid.in_domain(nb)) {
                    ++faces;  // domain boundary
                    continue;
                }
                const auto cov = grid.leaf_covering(nb);
                if (!cov) continue;  // neighbor finer: counted from that side
                if (cov->level == cell.level) {
                    if (s > 0) ++faces;  // shared same-level face, count once
                } else {
                    ++faces;  // neighbor coarser: this is the elementary piece
                }
            }
    return faces;
}

void save_grid(const PrimalGrid& grid, std::ostream& os) {
    nlohmann::json j;
    j["dim"] = grid.dim();
    j["max_level"] = grid.max_level();
    auto& jl = j["leaves"] = nlohmann::json::array();
    for (const auto& c : grid.leaves()) {
        if (grid.dim() == 3)
            jl.push_back({c.level, c.coords[0], c.coords[1], c.coords[2]});
        else
            jl.push_back({c.level, c.coords[0], c.coords[1]});
    }
    os << j.dump(1, '\t') << '\n';
}

PrimalGrid load_grid(std::istream& is) {
    nlohmann::json j;
    is >> j;
    const int dim = j.at("dim").get<int>();
    std::vector<CellIndex> leaves;
    for (const auto& je : j.at("leaves")) {
        CellIndex c;
        c.level = je.at(0).get<int32_t>();
        c.coords[0] = je.at(1).get<int32_t>();
        c.coords[1] = je.at(2).get<int32_t>();
        c.coords[2] = dim == 3 ? je.at(3).get<int32_t>() : 0;
        leaves.push_back(c);
    }
    // reconstruct by refining everything not in the target set; closure
    // additions would surface as a leaf-set mismatch below
    PrimalGrid out = PrimalGrid::unit_cube(dim);
    bool progress = true;
    std::unordered_set<CellIndex, CellIndexHash> want(leaves.begin(), leaves.end());
    while (progress) {
        progress = false;
        std::vector<CellIndex> marked;
        for (const auto& c : out.leaves())
            if (!want.count(c)) marked.push_back(c);
        if (!marked.empty()) {
            out = refine(out, std::move(marked));
            progress = true;
        }
    }
    if (out.leaves().size() != leaves.size())
        throw std::runtime_error("load_grid: leaf set is not a graded partition");
    for (const auto& c : out.leaves())
        if (!want.count(c)) throw std::runtime_error("load_grid: leaf set mismatch");
    if (out.max_level() != j.at("max_level").get<int>())
        throw std::runtime_error("load_grid: max_level mismatch");
    return out;
}

}  // namespace voromesh
