#include "voromesh/pattern_engine.hpp"

#include <algorithm>
#include <cassert>
#include <istream>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

namespace voromesh {

namespace {

constexpr int32_t kHalf = kRefScale / 2;

struct NodeSchema {
    std::vector<Vec3i> pos;                 // id -> position
    std::map<Vec3i, int> by_pos;            // position -> id
    std::vector<int> bit_to_node;           // key bit -> node id
    std::vector<std::array<int, 4>> face_edge_bits;  // 3D only: face -> 4 edge bits
};

NodeSchema build_schema(int dim) {
    NodeSchema s;
    if (dim == 3) {
        s.pos.resize(26);
        for (int z = 0; z <= 1; ++z)
            for (int y = 0; y <= 1; ++y)
                for (int x = 0; x <= 1; ++x)
                    s.pos[size_t(x + 2 * y + 4 * z)] = {x * kRefScale, y * kRefScale,
                                                        z * kRefScale};
        for (int z = 0; z <= 1; ++z)
            for (int y = 0; y <= 1; ++y)
                s.pos[size_t(8 + y + 2 * z)] = {kHalf, y * kRefScale, z * kRefScale};
        for (int z = 0; z <= 1; ++z)
            for (int x = 0; x <= 1; ++x)
                s.pos[size_t(12 + x + 2 * z)] = {x * kRefScale, kHalf, z * kRefScale};
        for (int y = 0; y <= 1; ++y)
            for (int x = 0; x <= 1; ++x)
                s.pos[size_t(16 + x + 2 * y)] = {x * kRefScale, y * kRefScale, kHalf};
        for (int f = 0; f < 6; ++f) {
            Vec3i p{kHalf, kHalf, kHalf};
            p[f / 2] = (f % 2) * kRefScale;
            s.pos[size_t(20 + f)] = p;
        }
        s.bit_to_node.resize(18);
        for (int e = 0; e < 12; ++e) s.bit_to_node[size_t(e)] = 8 + e;
        for (int f = 0; f < 6; ++f) s.bit_to_node[size_t(12 + f)] = 20 + f;

        s.face_edge_bits.resize(6);
        for (int f = 0; f < 6; ++f) {
            const int axis = f / 2;
            const int32_t c = (f % 2) * kRefScale;
            int n = 0;
            for (int e = 0; e < 12; ++e)
                if (s.pos[size_t(8 + e)][axis] == c) s.face_edge_bits[size_t(f)][size_t(n++)] = e;
            assert(n == 4);
        }
    } else {
        s.pos.resize(8);
        for (int y = 0; y <= 1; ++y)
            for (int x = 0; x <= 1; ++x)
                s.pos[size_t(x + 2 * y)] = {x * kRefScale, y * kRefScale, 0};
        for (int e = 0; e < 4; ++e) {
            Vec3i p{kHalf, kHalf, 0};
            p[e / 2] = (e % 2) * kRefScale;
            s.pos[size_t(4 + e)] = p;
        }
        s.bit_to_node.resize(4);
        for (int e = 0; e < 4; ++e) s.bit_to_node[size_t(e)] = 4 + e;
    }
    for (size_t i = 0; i < s.pos.size(); ++i) s.by_pos[s.pos[i]] = int(i);
    return s;
}

const NodeSchema& schema(int dim) {
    static const NodeSchema s3 = build_schema(3);
    static const NodeSchema s2 = build_schema(2);
    if (dim == 3) return s3;
    if (dim == 2) return s2;
    throw std::invalid_argument("dim must be 2 or 3");
}

/// Precomputed facet adjacency of the reference subdivision.
struct Complex {
    struct InteriorPair {
        int atom_a, facet_a;  // facet as stored in atom_a (outward from a)
        int atom_b, facet_b;
        Vec3i normal_ab;      // primitive, a -> b
        int64_t offset_ab;    // dot(normal_ab, any vertex)
    };
    struct BoundaryFacet {
        int atom, facet;
        int face;   // reference face id
        int slot;   // 2D atom id (3D) resp. sub-segment index (2D)
    };
    std::vector<InteriorPair> interior;
    std::vector<BoundaryFacet> boundary;
    int slots_per_face;
};

Vec3i primitive_2d_normal(Vec3i p, Vec3i q) {
    const Vec3i d = q - p;
    Vec3i n{d[1], -d[0], 0};
    const int32_t g = int32_t(std::gcd(std::abs(n[0]), std::abs(n[1])));
    return {n[0] / g, n[1] / g, 0};
}

Complex build_complex(int dim) {
    const auto& atoms = subdivide_reference_cell(dim);
    Complex cx;
    cx.slots_per_face = dim == 3 ? 20 : 4;

    std::map<std::vector<Vec3i>, std::vector<std::pair<int, int>>> by_key;
    for (size_t ia = 0; ia < atoms.size(); ++ia)
        for (size_t kf = 0; kf < atoms[ia].facets.size(); ++kf) {
            std::vector<Vec3i> key = atoms[ia].facets[kf].verts;
            std::sort(key.begin(), key.end());
            by_key[key].emplace_back(int(ia), int(kf));
        }

    // 2D atom lookup for 3D boundary traces
    std::map<std::pair<int64_t, int64_t>, int> atom2d_by_centroid;
    if (dim == 3) {
        const auto& a2 = subdivide_reference_cell(2);
        for (size_t i = 0; i < a2.size(); ++i)
            atom2d_by_centroid[{a2[i].centroid[0], a2[i].centroid[1]}] = int(i);
    }

    for (const auto& [key, users] : by_key) {
        assert(users.size() == 1 || users.size() == 2);  // watertight complex
        if (users.size() == 2) {
            const auto [ia, fa] = users[0];
            const auto [ib, fb] = users[1];
            Complex::InteriorPair p;
            p.atom_a = ia;
            p.facet_a = fa;
            p.atom_b = ib;
            p.facet_b = fb;
            const auto& verts = atoms[size_t(ia)].facets[size_t(fa)].verts;
            p.normal_ab = dim == 3 ? primitive_normal(verts)
                                   : primitive_2d_normal(verts[0], verts[1]);
            p.offset_ab = dot(p.normal_ab, verts[0]);
            cx.interior.push_back(p);
        } else {
            const auto [ia, fa] = users[0];
            const auto& verts = atoms[size_t(ia)].facets[size_t(fa)].verts;
            // which reference face?
            int face = -1;
            for (int f = 0; f < 2 * dim && face < 0; ++f) {
                const int axis = f / 2;
                const int32_t c = (f % 2) * kRefScale;
                bool on = true;
                for (const auto& v : verts) on = on && v[axis] == c;
                if (on) face = f;
            }
            assert(face >= 0);
            Complex::BoundaryFacet b;
            b.atom = ia;
            b.facet = fa;
            b.face = face;
            if (dim == 3) {
                const int axis = face / 2;
                const int u = axis == 0 ? 1 : 0;
                const int v = axis == 2 ? 1 : 2;
                int64_t su = 0, sv = 0;
                for (const auto& p : verts) {
                    su += p[u];
                    sv += p[v];
                }
                const int64_t n = int64_t(verts.size());
                assert(su % n == 0 && sv % n == 0);
                b.slot = atom2d_by_centroid.at({su / n, sv / n});
            } else {
                const int axis = face / 2;
                const int u = 1 - axis;
                b.slot = std::min(verts[0][u], verts[1][u]) / (kRefScale / 4);
            }
            cx.boundary.push_back(b);
        }
    }
    return cx;
}

const Complex& complex_for(int dim) {
    static const Complex c3 = build_complex(3);
    static const Complex c2 = build_complex(2);
    return dim == 3 ? c3 : c2;
}

/// Regions, internal faces and boundary traces from an atom assignment.
LocalPattern derive_pattern(int dim, RefinementKey key, std::vector<int8_t> owner) {
    const auto& atoms = subdivide_reference_cell(dim);
    const auto& cx = complex_for(dim);

    LocalPattern p;
    p.dim = dim;
    p.key = key;
    p.owner = std::move(owner);

    std::map<int, PatternRegion> regions;
    for (size_t i = 0; i < atoms.size(); ++i) {
        auto& r = regions[p.owner[i]];
        r.node = p.owner[i];
        r.volume_units += atoms[i].volume_units;
        r.atoms.push_back(int(i));
    }
    for (auto& [nid, r] : regions) p.regions.push_back(std::move(r));

    // internal faces, merged per (region pair, plane)
    struct GroupKey {
        int lo, hi;
        Vec3i n;
        int64_t off;
        bool operator<(const GroupKey& o) const {
            if (lo != o.lo) return lo < o.lo;
            if (hi != o.hi) return hi < o.hi;
            if (n != o.n) return n < o.n;
            return off < o.off;
        }
    };
    std::map<GroupKey, std::vector<std::vector<Vec3i>>> groups;
    for (const auto& ip : cx.interior) {
        const int oa = p.owner[size_t(ip.atom_a)];
        const int ob = p.owner[size_t(ip.atom_b)];
        if (oa == ob) continue;
        const bool a_side = oa < ob;
        const int lo = a_side ? oa : ob, hi = a_side ? ob : oa;
        const auto& facet = a_side ? atoms[size_t(ip.atom_a)].facets[size_t(ip.facet_a)]
                                   : atoms[size_t(ip.atom_b)].facets[size_t(ip.facet_b)];
        const Vec3i n = a_side ? ip.normal_ab
                               : Vec3i{-ip.normal_ab[0], -ip.normal_ab[1], -ip.normal_ab[2]};
        groups[{lo, hi, n, dot(n, facet.verts[0])}].push_back(facet.verts);
    }
    for (const auto& [gk, polys] : groups) {
        if (dim == 3) {
            for (auto& merged : merge_coplanar_polygons(polys, gk.n)) {
                PatternFace f;
                f.a = gk.lo;
                f.b = gk.hi;
                f.poly.normal = gk.n;
                const ExactArea ar = polygon_area(merged, gk.n);
                f.poly.area = ar.frac;
                f.poly.sqrt2 = ar.sqrt2;
                f.poly.verts = std::move(merged);
                p.faces.push_back(std::move(f));
            }
        } else {
            // chain collinear segments along dir = rot90ccw(n)
            const Vec3i dir{-gk.n[1], gk.n[0], 0};
            std::vector<std::pair<Vec3i, Vec3i>> segs;
            for (const auto& s : polys) segs.emplace_back(s[0], s[1]);
            std::sort(segs.begin(), segs.end(), [&](const auto& s, const auto& t) {
                return dot(s.first, dir) < dot(t.first, dir);
            });
            size_t k = 0;
            while (k < segs.size()) {
                const Vec3i lo = segs[k].first;
                Vec3i hi = segs[k].second;
                size_t j = k + 1;
                while (j < segs.size() && segs[j].first == hi) hi = segs[j++].second;
                PatternFace f;
                f.a = gk.lo;
                f.b = gk.hi;
                f.poly.normal = gk.n;
                const ExactArea ar = segment_length(lo, hi);
                f.poly.area = ar.frac;
                f.poly.sqrt2 = ar.sqrt2;
                f.poly.verts = {lo, hi};
                p.faces.push_back(std::move(f));
                k = j;
            }
        }
    }

    p.traces.assign(size_t(2 * dim), std::vector<int8_t>(size_t(cx.slots_per_face), -1));
    for (const auto& b : cx.boundary) {
        auto& slot = p.traces[size_t(b.face)][size_t(b.slot)];
        assert(slot == -1);
        slot = p.owner[size_t(b.atom)];
    }
    return p;
}

}  // namespace

int node_count(int dim) { return dim == 3 ? 26 : 8; }
int key_bit_count(int dim) { return dim == 3 ? 18 : 4; }

Vec3i node_position(int dim, int id) { return schema(dim).pos.at(size_t(id)); }

int node_from_position(int dim, Vec3i p) {
    const auto& m = schema(dim).by_pos;
    auto it = m.find(p);
    return it == m.end() ? -1 : it->second;
}

int node_of_key_bit(int dim, int bit) { return schema(dim).bit_to_node.at(size_t(bit)); }

int key_bit_of_node(int dim, int id) {
    if (dim == 3) return id < 8 ? -1 : (id < 20 ? id - 8 : 12 + (id - 20));
    return id < 4 ? -1 : id - 4;
}

bool key_valid(int dim, RefinementKey key) {
    const int nbits = key_bit_count(dim);
    if (key >= (RefinementKey(1) << nbits)) return false;
    if (dim == 2) return true;
    const auto& s = schema(dim);
    for (int f = 0; f < 6; ++f) {
        if (!(key & (RefinementKey(1) << (12 + f)))) continue;
        for (int e : s.face_edge_bits[size_t(f)])
            if (!(key & (RefinementKey(1) << e))) return false;
    }
    return true;
}

std::vector<RefinementKey> enumerate_valid_keys(int dim) {
    std::vector<RefinementKey> keys;
    const RefinementKey end = RefinementKey(1) << key_bit_count(dim);
    for (RefinementKey k = 0; k < end; ++k)
        if (key_valid(dim, k)) keys.push_back(k);
    return keys;
}

std::vector<std::pair<int, Vec3i>> key_nodes(int dim, RefinementKey key) {
    const auto& s = schema(dim);
    std::vector<std::pair<int, Vec3i>> nodes;
    const int corners = dim == 3 ? 8 : 4;
    for (int c = 0; c < corners; ++c) nodes.emplace_back(c, s.pos[size_t(c)]);
    for (int b = 0; b < key_bit_count(dim); ++b)
        if (key & (RefinementKey(1) << b)) {
            const int id = s.bit_to_node[size_t(b)];
            nodes.emplace_back(id, s.pos[size_t(id)]);
        }
    std::sort(nodes.begin(), nodes.end());
    return nodes;
}

int SymmetryOp::det() const {
    int d = 1;
    // permutation parity
    int inv = 0;
    for (int i = 0; i < 3; ++i)
        for (int j = i + 1; j < 3; ++j)
            if (perm[i] > perm[j]) ++inv;
    if (inv % 2) d = -d;
    for (int i = 0; i < 3; ++i)
        if (neg[i]) d = -d;
    return d;
}

const std::vector<SymmetryOp>& symmetry_group(int dim) {
    static const auto build = [](int d) {
        std::vector<SymmetryOp> g;
        std::array<int8_t, 3> perm{0, 1, 2};
        std::vector<std::array<int8_t, 3>> perms;
        do {
            if (d == 2 && perm[2] != 2) continue;
            perms.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
        std::sort(perms.begin(), perms.end());
        const int nsign = d == 3 ? 8 : 4;
        for (const auto& pm : perms)
            for (int s = 0; s < nsign; ++s) {
                SymmetryOp op;
                op.perm = pm;
                for (int i = 0; i < d; ++i) op.neg[size_t(i)] = int8_t((s >> i) & 1);
                g.push_back(op);
            }
        return g;
    };
    static const std::vector<SymmetryOp> g3 = build(3);
    static const std::vector<SymmetryOp> g2 = build(2);
    return dim == 3 ? g3 : g2;
}

int symmetry_index(int dim, const SymmetryOp& op) {
    const auto& g = symmetry_group(dim);
    for (size_t i = 0; i < g.size(); ++i)
        if (g[i] == op) return int(i);
    return -1;
}

SymmetryOp compose(const SymmetryOp& a, const SymmetryOp& b) {
    SymmetryOp c;
    for (int i = 0; i < 3; ++i) {
        c.perm[i] = b.perm[a.perm[i]];
        c.neg[i] = int8_t(a.neg[i] ^ b.neg[a.perm[i]]);
    }
    return c;
}

SymmetryOp inverse(const SymmetryOp& op) {
    SymmetryOp c;
    for (int i = 0; i < 3; ++i) c.perm[op.perm[i]] = int8_t(i);
    for (int i = 0; i < 3; ++i) c.neg[i] = op.neg[c.perm[i]];
    return c;
}

int transform_node(int dim, const SymmetryOp& op, int id) {
    const int r = node_from_position(dim, op.apply(node_position(dim, id)));
    assert(r >= 0);
    return r;
}

RefinementKey transform_key(int dim, const SymmetryOp& op, RefinementKey key) {
    RefinementKey out = 0;
    for (int b = 0; b < key_bit_count(dim); ++b)
        if (key & (RefinementKey(1) << b)) {
            const int id = transform_node(dim, op, node_of_key_bit(dim, b));
            const int nb = key_bit_of_node(dim, id);
            assert(nb >= 0);
            out |= RefinementKey(1) << nb;
        }
    return out;
}

int face_config(RefinementKey key, int face) {
    const auto& s = schema(3);
    int cfg = 0;
    for (int i = 0; i < 4; ++i)
        if (key & (RefinementKey(1) << s.face_edge_bits[size_t(face)][size_t(i)]))
            cfg |= 1 << i;
    if (key & (RefinementKey(1) << (12 + face))) cfg |= 1 << 4;
    return cfg;
}

LocalPattern build_pattern(int dim, RefinementKey key) {
    if (!key_valid(dim, key))
        throw std::invalid_argument("build_pattern: invalid refinement key");
    const auto& atoms = subdivide_reference_cell(dim);
    const auto nodes = key_nodes(dim, key);
    std::vector<int8_t> owner(atoms.size());
    for (size_t i = 0; i < atoms.size(); ++i)
        owner[i] = int8_t(assign_centroid(atoms[i].centroid, nodes));
    return derive_pattern(dim, key, std::move(owner));
}

std::pair<RefinementKey, SymmetryOp> canonicalize(int dim, RefinementKey key) {
    if (!key_valid(dim, key))
        throw std::invalid_argument("canonicalize: invalid refinement key");
    const auto& g = symmetry_group(dim);
    RefinementKey best = key;
    for (const auto& op : g) best = std::min(best, transform_key(dim, op, key));
    for (const auto& op : g)
        if (transform_key(dim, op, best) == key) return {best, op};
    throw std::logic_error("canonicalize: orbit inconsistency");
}

LocalPattern apply_symmetry(const LocalPattern& p, const SymmetryOp& op) {
    const int dim = p.dim;
    const auto& atoms = subdivide_reference_cell(dim);

    // atom permutation under op (the subdivision is invariant as a set)
    static const auto atom_by_centroid = [](int d) {
        std::map<Vec3i, int> m;
        const auto& as = subdivide_reference_cell(d);
        for (size_t i = 0; i < as.size(); ++i) m[as[i].centroid] = int(i);
        return m;
    };
    static const std::map<Vec3i, int> m3 = atom_by_centroid(3);
    static const std::map<Vec3i, int> m2 = atom_by_centroid(2);
    const auto& cmap = dim == 3 ? m3 : m2;

    std::vector<int8_t> owner(atoms.size(), -1);
    for (size_t i = 0; i < atoms.size(); ++i) {
        const int j = cmap.at(op.apply(atoms[i].centroid));
        owner[size_t(j)] = int8_t(transform_node(dim, op, p.owner[i]));
    }
    return derive_pattern(dim, transform_key(dim, op, p.key), std::move(owner));
}

PatternTable build_table(int dim) {
    PatternTable t;
    t.dim = dim;
    const auto keys = enumerate_valid_keys(dim);
    std::map<RefinementKey, int> canon_ids;
    std::vector<std::pair<RefinementKey, SymmetryOp>> mapping(keys.size());
    for (size_t i = 0; i < keys.size(); ++i) {
        mapping[i] = canonicalize(dim, keys[i]);
        canon_ids.emplace(mapping[i].first, 0);
    }
    int id = 0;
    for (auto& [ck, cid] : canon_ids) cid = id++;
    t.canonical.resize(canon_ids.size());
    for (const auto& [ck, cid] : canon_ids) t.canonical[size_t(cid)] = build_pattern(dim, ck);
    for (size_t i = 0; i < keys.size(); ++i) {
        const auto& [ck, op] = mapping[i];
        t.index[keys[i]] = {canon_ids.at(ck), symmetry_index(dim, op)};
    }
    // spot-check: table lookup must reproduce direct construction
    for (size_t i = 0; i < keys.size(); i += 97) {
        const LocalPattern direct = build_pattern(dim, keys[i]);
        const LocalPattern via = instantiate(t, keys[i]);
        if (via.owner != direct.owner)
            throw std::logic_error("build_table: symmetry reconstruction mismatch");
    }
    return t;
}

LocalPattern instantiate(const PatternTable& table, RefinementKey key) {
    auto it = table.index.find(key);
    if (it == table.index.end())
        throw std::out_of_range("pattern table: key not present (grading violation?)");
    const auto& op = symmetry_group(table.dim)[size_t(it->second.op_index)];
    LocalPattern p = apply_symmetry(table.canonical[size_t(it->second.canon_id)], op);
    assert(p.key == key);
    return p;
}

void save_pattern_table(const PatternTable& table, std::ostream& os) {
    nlohmann::json j;
    j["dim"] = table.dim;
    auto& jc = j["canonical"] = nlohmann::json::array();
    for (size_t id = 0; id < table.canonical.size(); ++id) {
        const auto& p = table.canonical[id];
        nlohmann::json jp;
        jp["id"] = id;
        jp["key"] = p.key;
        auto& jr = jp["regions"] = nlohmann::json::array();
        for (const auto& r : p.regions) {
            const Fraction vol(r.volume_units, volume_unit_den(table.dim));
            jr.push_back({{"node", r.node},
                          {"volume_num", vol.num},
                          {"volume_den", vol.den},
                          {"atoms", r.atoms}});
        }
        auto& jf = jp["faces"] = nlohmann::json::array();
        for (const auto& f : p.faces) {
            nlohmann::json fe;
            fe["a"] = f.a;
            fe["b"] = f.b;
            fe["normal"] = {f.poly.normal[0], f.poly.normal[1], f.poly.normal[2]};
            fe["sqrt2"] = f.poly.sqrt2;
            fe["area_num"] = f.poly.area.num;
            fe["area_den"] = f.poly.area.den;
            auto& vv = fe["verts"] = nlohmann::json::array();
            for (const auto& v : f.poly.verts) vv.push_back({v[0], v[1], v[2]});
            jf.push_back(std::move(fe));
        }
        jc.push_back(std::move(jp));
    }
    auto& ji = j["index"] = nlohmann::json::array();
    std::vector<RefinementKey> keys;
    keys.reserve(table.index.size());
    for (const auto& [k, e] : table.index) keys.push_back(k);
    std::sort(keys.begin(), keys.end());
    for (RefinementKey k : keys) {
        const auto& e = table.index.at(k);
        ji.push_back({{"key", k}, {"canon_id", e.canon_id}, {"sym_op", e.op_index}});
    }
    os << j.dump(1, '\t') << '\n';
}

PatternTable load_pattern_table(std::istream& is) {
    nlohmann::json j;
    is >> j;
    PatternTable t;
    t.dim = j.at("dim").get<int>();
    if (t.dim != 2 && t.dim != 3) throw std::runtime_error("pattern table: bad dim");
    const auto& atoms = subdivide_reference_cell(t.dim);
    for (const auto& jp : j.at("canonical")) {
        const RefinementKey key = jp.at("key").get<RefinementKey>();
        std::vector<int8_t> owner(atoms.size(), -1);
        for (const auto& jr : jp.at("regions")) {
            const int node = jr.at("node").get<int>();
            for (int a : jr.at("atoms").get<std::vector<int>>()) owner[size_t(a)] = int8_t(node);
        }
        for (int8_t o : owner)
            if (o < 0) throw std::runtime_error("pattern table: incomplete atom assignment");
        LocalPattern p = derive_pattern(t.dim, key, std::move(owner));
        // integrity: stored volumes must match the re-derived partition
        size_t ri = 0;
        for (const auto& jr : jp.at("regions")) {
            const Fraction vol(jr.at("volume_num").get<int64_t>(),
                               jr.at("volume_den").get<int64_t>());
            if (ri >= p.regions.size() ||
                !(Fraction(p.regions[ri].volume_units, volume_unit_den(t.dim)) == vol) ||
                p.regions[ri].node != jr.at("node").get<int>())
                throw std::runtime_error("pattern table: region mismatch");
            ++ri;
        }
        if (jp.at("faces").size() != p.faces.size())
            throw std::runtime_error("pattern table: face count mismatch");
        t.canonical.push_back(std::move(p));
    }
    for (size_t id = 1; id < t.canonical.size(); ++id)
        if (!(t.canonical[id - 1].key < t.canonical[id].key))
            throw std::runtime_error("pattern table: canonical keys not ascending");
    for (const auto& je : j.at("index")) {
        const RefinementKey key = je.at("key").get<RefinementKey>();
        const TableEntry e{je.at("canon_id").get<int32_t>(), je.at("sym_op").get<int32_t>()};
        if (e.canon_id < 0 || size_t(e.canon_id) >= t.canonical.size())
            throw std::runtime_error("pattern table: bad canonical id");
        if (e.op_index < 0 || size_t(e.op_index) >= symmetry_group(t.dim).size())
            throw std::runtime_error("pattern table: bad symmetry op index");
        const auto& op = symmetry_group(t.dim)[size_t(e.op_index)];
        if (transform_key(t.dim, op, t.canonical[size_t(e.canon_id)].key) != key)
            throw std::runtime_error("pattern table: op does not map canonical to key");
        t.index[key] = e;
    }
    return t;
}

std::vector<int32_t> oracle_assign_lattice(int dim,
                                           const std::vector<std::pair<int, Vec3i>>& nodes,
                                           int resolution) {
    // work at scale 48 * 2 * resolution so sample-cell centers are integers
    std::vector<std::pair<int, Vec3i>> scaled;
    scaled.reserve(nodes.size());
    for (const auto& [id, p] : nodes)
        scaled.emplace_back(id, Vec3i{p[0] * 2 * resolution, p[1] * 2 * resolution,
                                      p[2] * 2 * resolution});
    const int nz = dim == 3 ? resolution : 1;
    std::vector<int32_t> winners;
    winners.reserve(size_t(resolution) * size_t(resolution) * size_t(nz));
    for (int k = 0; k < nz; ++k)
        for (int j = 0; j < resolution; ++j)
            for (int i = 0; i < resolution; ++i) {
                const Vec3i c{(2 * i + 1) * kRefScale, (2 * j + 1) * kRefScale,
                              dim == 3 ? (2 * k + 1) * kRefScale : 0};
                winners.push_back(assign_centroid(c, scaled));
            }
    return winners;
}

std::map<int, double> local_voronoi_oracle(int dim, RefinementKey key, int resolution) {
    const auto winners = oracle_assign_lattice(dim, key_nodes(dim, key), resolution);
    std::map<int, int64_t> counts;
    for (int32_t w : winners) ++counts[w];
    std::map<int, double> fractions;
    for (const auto& [id, c] : counts)
        fractions[id] = double(c) / double(winners.size());
    return fractions;
}

}  // namespace voromesh
