#include "voromesh/local_geometry.hpp"

#include <algorithm>
#include <cassert>
#include <cstdlib>
#include <map>
#include <stdexcept>

namespace voromesh {

namespace {

constexpr int32_t kHalf = kRefScale / 2;  // 24
constexpr int32_t kSub = kRefScale / 4;   // 12, edge of one subdivision cube

Vec3i poly_centroid_times(const std::vector<Vec3i>& vs, int64_t& count) {
    Vec3i s{0, 0, 0};
    for (const auto& v : vs) s = s + v;
    count = int64_t(vs.size());
    return s;
}

/// Exact centroid of an atom's vertex set (valid for cubes/squares, the
/// Kuhn tetrahedra and the prisms/triangles of this subdivision, whose
/// vertex means are the centroids).
Vec3i exact_centroid(const std::vector<Vec3i>& vs) {
    int64_t n = 0;
    Vec3i s = poly_centroid_times(vs, n);
    Vec3i c;
    for (int i = 0; i < 3; ++i) {
        assert(s[i] % n == 0);
        c[i] = int32_t(s[i] / n);
    }
    return c;
}

/// Flip facet winding if its normal does not point away from `inside`.
void orient_outward(AtomFacet& f, Vec3i inside) {
    const Vec3i n = cross(f.verts[1] - f.verts[0], f.verts[2] - f.verts[0]);
    if (dot(n, f.verts[0] - inside) < 0) std::reverse(f.verts.begin(), f.verts.end());
}

void add_cube_facets(Atom& a, Vec3i m) {
    // m = min corner, edge kSub
    const int32_t s = kSub;
    auto quad = [&](Vec3i p0, Vec3i p1, Vec3i p2, Vec3i p3) {
        AtomFacet f{{p0, p1, p2, p3}};
        orient_outward(f, a.centroid);
        a.facets.push_back(std::move(f));
    };
    const Vec3i o = m;
    quad(o, {o[0], o[1] + s, o[2]}, {o[0], o[1] + s, o[2] + s}, {o[0], o[1], o[2] + s});
    quad({o[0] + s, o[1], o[2]}, {o[0] + s, o[1] + s, o[2]}, {o[0] + s, o[1] + s, o[2] + s},
         {o[0] + s, o[1], o[2] + s});
    quad(o, {o[0] + s, o[1], o[2]}, {o[0] + s, o[1], o[2] + s}, {o[0], o[1], o[2] + s});
    quad({o[0], o[1] + s, o[2]}, {o[0] + s, o[1] + s, o[2]}, {o[0] + s, o[1] + s, o[2] + s},
         {o[0], o[1] + s, o[2] + s});
    quad(o, {o[0] + s, o[1], o[2]}, {o[0] + s, o[1] + s, o[2]}, {o[0], o[1] + s, o[2]});
    quad({o[0], o[1], o[2] + s}, {o[0] + s, o[1], o[2] + s}, {o[0] + s, o[1] + s, o[2] + s},
         {o[0], o[1] + s, o[2] + s});
}

/// Prism over triangle (t0,t1,t2) extruded along axis `a` over [a0, a0+kSub].
/// Triangle vertices carry the two cross axes; the `a` component is ignored.
Atom make_prism(int axis, int32_t a0, std::array<Vec3i, 3> tri) {
    Atom atom;
    atom.kind = AtomKind::Prism;
    atom.volume_units = 3;
    auto lift = [&](Vec3i p, int32_t ac) {
        p[axis] = ac;
        return p;
    };
    for (int k = 0; k < 3; ++k) atom.verts.push_back(lift(tri[k], a0));
    for (int k = 0; k < 3; ++k) atom.verts.push_back(lift(tri[k], a0 + kSub));
    atom.centroid = exact_centroid(atom.verts);

    auto tri_facet = [&](Vec3i p0, Vec3i p1, Vec3i p2) {
        AtomFacet f{{p0, p1, p2}};
        orient_outward(f, atom.centroid);
        atom.facets.push_back(std::move(f));
    };
    auto quad_facet = [&](Vec3i p0, Vec3i p1, Vec3i p2, Vec3i p3) {
        AtomFacet f{{p0, p1, p2, p3}};
        orient_outward(f, atom.centroid);
        atom.facets.push_back(std::move(f));
    };
    tri_facet(atom.verts[0], atom.verts[1], atom.verts[2]);
    tri_facet(atom.verts[3], atom.verts[4], atom.verts[5]);
    for (int k = 0; k < 3; ++k) {
        const int k1 = (k + 1) % 3;
        quad_facet(atom.verts[k], atom.verts[k1], atom.verts[3 + k1], atom.verts[3 + k]);
    }
    return atom;
}

Atom make_tet(std::array<Vec3i, 4> vs) {
    Atom atom;
    atom.kind = AtomKind::Tet;
    atom.volume_units = 1;
    atom.verts.assign(vs.begin(), vs.end());
    atom.centroid = exact_centroid(atom.verts);
    static constexpr int idx[4][3] = {{1, 2, 3}, {0, 2, 3}, {0, 1, 3}, {0, 1, 2}};
    for (auto& t : idx) {
        AtomFacet f{{vs[t[0]], vs[t[1]], vs[t[2]]}};
        orient_outward(f, atom.centroid);
        atom.facets.push_back(std::move(f));
    }
    return atom;
}

/// Split the square [b0,b0+12]x[c0,c0+12] (axes b,c) along the diagonal
/// through the reference points where tb*(b-24) == tc*(c-24). Returns the
/// two triangles, each CCW in the (b,c) frame.
void diagonal_split(int axis_b, int axis_c, int32_t b0, int32_t c0, int tb, int tc,
                    std::array<Vec3i, 3>& tri_pos, std::array<Vec3i, 3>& tri_neg) {
    std::array<Vec3i, 4> corners;
    int ci = 0;
    for (int db = 0; db <= 1; ++db)
        for (int dc = 0; dc <= 1; ++dc) {
            Vec3i p{0, 0, 0};
            p[axis_b] = b0 + db * kSub;
            p[axis_c] = c0 + dc * kSub;
            corners[ci++] = p;
        }
    auto side = [&](Vec3i p) {
        return int64_t(tb) * (p[axis_b] - kHalf) - int64_t(tc) * (p[axis_c] - kHalf);
    };
    Vec3i d[2], epos{}, eneg{};
    int nd = 0;
    for (auto& p : corners) {
        const int64_t s = side(p);
        if (s == 0)
            d[nd++] = p;
        else if (s > 0)
            epos = p;
        else
            eneg = p;
    }
    assert(nd == 2);
    auto ccw = [&](std::array<Vec3i, 3>& t) {
        const int64_t cr =
            int64_t(t[1][axis_b] - t[0][axis_b]) * (t[2][axis_c] - t[0][axis_c]) -
            int64_t(t[1][axis_c] - t[0][axis_c]) * (t[2][axis_b] - t[0][axis_b]);
        if (cr < 0) std::swap(t[1], t[2]);
    };
    tri_pos = {d[0], d[1], epos};
    tri_neg = {d[0], d[1], eneg};
    ccw(tri_pos);
    ccw(tri_neg);
}

std::vector<Atom> build_3d() {
    std::vector<Atom> atoms;
    atoms.reserve(128);
    for (int ix = 0; ix < 4; ++ix)
        for (int iy = 0; iy < 4; ++iy)
            for (int iz = 0; iz < 4; ++iz) {
                const int idx[3] = {ix, iy, iz};
                const Vec3i m{ix * kSub, iy * kSub, iz * kSub};
                const bool inner[3] = {ix == 1 || ix == 2, iy == 1 || iy == 2,
                                       iz == 1 || iz == 2};
                const int n_inner = inner[0] + inner[1] + inner[2];
                if (n_inner == 3) {
                    // central cube: three diagonal cuts through the cell
                    // center produce six Kuhn tetrahedra
                    int s[3];
                    for (int i = 0; i < 3; ++i) s[i] = (idx[i] == 2) ? 1 : -1;
                    auto from_u = [&](Vec3i u) {
                        Vec3i p;
                        for (int i = 0; i < 3; ++i) p[i] = kHalf + s[i] * u[i];
                        return p;
                    };
                    static constexpr int perms[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                                        {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
                    for (auto& pm : perms) {
                        Vec3i u1{0, 0, 0}, u2{0, 0, 0};
                        u1[pm[0]] = kSub;
                        u2[pm[0]] = kSub;
                        u2[pm[1]] = kSub;
                        atoms.push_back(make_tet({from_u({0, 0, 0}), from_u(u1),
                                                  from_u(u2), from_u({kSub, kSub, kSub})}));
                    }
                } else if (n_inner == 2) {
                    // face-midpoint cube: one diagonal cut through the face
                    // midpoint, two prisms
                    int axis_a = inner[0] ? (inner[1] ? 2 : 1) : 0;
                    const int axis_b = (axis_a + 1) % 3, axis_c = (axis_a + 2) % 3;
                    const int tb = (idx[axis_b] == 2) ? 1 : -1;
                    const int tc = (idx[axis_c] == 2) ? 1 : -1;
                    std::array<Vec3i, 3> tp, tn;
                    diagonal_split(axis_b, axis_c, m[axis_b], m[axis_c], tb, tc, tp, tn);
                    atoms.push_back(make_prism(axis_a, m[axis_a], tp));
                    atoms.push_back(make_prism(axis_a, m[axis_a], tn));
                } else {
                    Atom a;
                    a.kind = AtomKind::Cube;
                    a.volume_units = 6;
                    for (int dx = 0; dx <= 1; ++dx)
                        for (int dy = 0; dy <= 1; ++dy)
                            for (int dz = 0; dz <= 1; ++dz)
                                a.verts.push_back(
                                    {m[0] + dx * kSub, m[1] + dy * kSub, m[2] + dz * kSub});
                    a.centroid = exact_centroid(a.verts);
                    add_cube_facets(a, m);
                    atoms.push_back(std::move(a));
                }
            }
    assert(atoms.size() == 128);
    return atoms;
}

/// 2D facets are the boundary edges of a CCW loop; outward normal is the
/// edge direction rotated clockwise.
void add_loop_facets(Atom& a, const std::vector<Vec3i>& loop) {
    for (size_t k = 0; k < loop.size(); ++k)
        a.facets.push_back(AtomFacet{{loop[k], loop[(k + 1) % loop.size()]}});
}

std::vector<Atom> build_2d() {
    std::vector<Atom> atoms;
    atoms.reserve(20);
    for (int ix = 0; ix < 4; ++ix)
        for (int iy = 0; iy < 4; ++iy) {
            const Vec3i m{ix * kSub, iy * kSub, 0};
            const bool central = (ix == 1 || ix == 2) && (iy == 1 || iy == 2);
            if (central) {
                const int tb = (ix == 2) ? 1 : -1;
                const int tc = (iy == 2) ? 1 : -1;
                std::array<Vec3i, 3> tp, tn;
                diagonal_split(0, 1, m[0], m[1], tb, tc, tp, tn);
                for (auto& tri : {tp, tn}) {
                    Atom a;
                    a.kind = AtomKind::Triangle;
                    a.volume_units = 1;
                    a.verts.assign(tri.begin(), tri.end());
                    a.centroid = exact_centroid(a.verts);
                    add_loop_facets(a, a.verts);
                    atoms.push_back(std::move(a));
                }
            } else {
                Atom a;
                a.kind = AtomKind::Square;
                a.volume_units = 2;
                a.verts = {m,
                           {m[0] + kSub, m[1], 0},
                           {m[0] + kSub, m[1] + kSub, 0},
                           {m[0], m[1] + kSub, 0}};
                a.centroid = exact_centroid(a.verts);
                add_loop_facets(a, a.verts);
                atoms.push_back(std::move(a));
            }
        }
    assert(atoms.size() == 20);
    return atoms;
}

}  // namespace

const std::vector<Atom>& subdivide_reference_cell(int dim) {
    if (dim == 3) {
        static const std::vector<Atom> atoms3 = build_3d();
        return atoms3;
    }
    if (dim == 2) {
        static const std::vector<Atom> atoms2 = build_2d();
        return atoms2;
    }
    throw std::invalid_argument("subdivide_reference_cell: dim must be 2 or 3");
}

ScaledDist linf_dist2_scaled(Vec3i a, Vec3i b) {
    int32_t dinf = 0;
    int64_t d2 = 0;
    for (int i = 0; i < 3; ++i) {
        const int32_t d = std::abs(a[i] - b[i]);
        dinf = std::max(dinf, d);
        d2 += int64_t(d) * d;
    }
    return {dinf, d2};
}

int assign_centroid(Vec3i centroid, const std::vector<std::pair<int, Vec3i>>& nodes) {
    assert(!nodes.empty());
    int best = -1;
    int32_t best_dinf = 0;
    int64_t best_d2 = 0;
    for (const auto& [id, pos] : nodes) {
        const ScaledDist d = linf_dist2_scaled(centroid, pos);
        if (best < 0 || d.dinf < best_dinf ||
            (d.dinf == best_dinf && (d.d2 < best_d2 || (d.d2 == best_d2 && id < best)))) {
            best = id;
            best_dinf = d.dinf;
            best_d2 = d.d2;
        }
    }
    return best;
}

int assign_atom(const Atom& atom, const std::vector<std::pair<int, Vec3i>>& nodes) {
    return assign_centroid(atom.centroid, nodes);
}

Vec3i primitive_normal(const std::vector<Vec3i>& poly) {
    assert(poly.size() >= 3);
    Vec3i n{0, 0, 0};
    for (size_t k = 1; k + 1 < poly.size(); ++k) {
        n = cross(poly[k] - poly[0], poly[k + 1] - poly[0]);
        if (n != Vec3i{0, 0, 0}) break;
    }
    int32_t g = 0;
    for (int i = 0; i < 3; ++i) g = int32_t(std::gcd(int64_t(g), int64_t(std::abs(n[i]))));
    assert(g > 0);
    for (int i = 0; i < 3; ++i) n[i] /= g;
    [[maybe_unused]] const int nz = (n[0] != 0) + (n[1] != 0) + (n[2] != 0);
    assert(nz == 1 || nz == 2);
    for (int i = 0; i < 3; ++i) assert(n[i] >= -1 && n[i] <= 1);
    return n;
}

ExactArea polygon_area(const std::vector<Vec3i>& poly, Vec3i n) {
    std::array<int64_t, 3> s{0, 0, 0};
    for (size_t k = 0; k < poly.size(); ++k) {
        const auto c = cross64(poly[k], poly[(k + 1) % poly.size()]);
        for (int i = 0; i < 3; ++i) s[i] += c[i];
    }
    // s = m * n with m = twice the scalar area in scale-48^2 units
    int64_t m = 0;
    for (int i = 0; i < 3; ++i)
        if (n[i] != 0) m = s[i] / n[i];
    for (int i = 0; i < 3; ++i) assert(s[i] == m * n[i]);
    assert(m > 0);
    const bool diag = (n[0] != 0) + (n[1] != 0) + (n[2] != 0) == 2;
    return {Fraction(m, 2 * int64_t(kRefScale) * kRefScale), diag};
}

ExactArea segment_length(Vec3i a, Vec3i b) {
    const Vec3i d = b - a;
    const int32_t ax = std::abs(d[0]), ay = std::abs(d[1]);
    assert(d[2] == 0);
    if (ax == 0) return {Fraction(ay, kRefScale), false};
    if (ay == 0) return {Fraction(ax, kRefScale), false};
    assert(ax == ay);
    return {Fraction(ax, kRefScale), true};
}

namespace detail {

void plane_basis(Vec3i n, Vec3i& u, Vec3i& w) {
    int zero_axis = -1, nonzero_axis = -1;
    for (int i = 0; i < 3; ++i) {
        if (n[i] == 0) zero_axis = i;
        else nonzero_axis = i;
    }
    const int nz = (n[0] != 0) + (n[1] != 0) + (n[2] != 0);
    if (nz == 1) {
        u = Vec3i{0, 0, 0};
        u[(nonzero_axis + 1) % 3] = 1;
    } else {
        u = Vec3i{0, 0, 0};
        u[zero_axis] = 1;
    }
    w = cross(n, u);
    assert(dot(n, u) == 0);
    assert(dot(cross(u, w), n) > 0);  // positive multiple of n
}

}  // namespace detail

namespace {

struct Edge2 {
    std::array<int64_t, 2> a;
    std::array<int64_t, 2> b;
};

int64_t cross2(std::array<int64_t, 2> a, std::array<int64_t, 2> b) {
    return a[0] * b[1] - a[1] * b[0];
}

/// Sector of direction d relative to ref: 0 along ref, 1 in (0,pi) CCW,
/// 2 opposite, 3 in (pi,2pi).
int sector_from(std::array<int64_t, 2> ref, std::array<int64_t, 2> d) {
    const int64_t c = cross2(ref, d);
    if (c == 0) return (ref[0] * d[0] + ref[1] * d[1]) > 0 ? 0 : 2;
    return c > 0 ? 1 : 3;
}

/// True if x has a strictly larger CCW angle from ref than y.
bool larger_ccw_from(std::array<int64_t, 2> ref, std::array<int64_t, 2> x,
                     std::array<int64_t, 2> y) {
    const int sx = sector_from(ref, x), sy = sector_from(ref, y);
    if (sx != sy) return sx > sy;
    return cross2(y, x) > 0;
}

}  // namespace

std::vector<std::vector<Vec3i>> merge_coplanar_polygons(
    const std::vector<std::vector<Vec3i>>& polys, Vec3i normal, bool split_t_junctions) {
    Vec3i u, w;
    detail::plane_basis(normal, u, w);
    auto to2 = [&](Vec3i p) -> std::array<int64_t, 2> { return {dot(p, u), dot(p, w)}; };

    std::map<std::array<int64_t, 2>, Vec3i> points;  // 2D coord -> 3D point
    std::vector<Edge2> edges;
    for (const auto& poly : polys)
        for (size_t k = 0; k < poly.size(); ++k) {
            const Vec3i p = poly[k], q = poly[(k + 1) % poly.size()];
            points.emplace(to2(p), p);
            points.emplace(to2(q), q);
            edges.push_back({to2(p), to2(q)});
        }

    if (split_t_junctions) {
        std::vector<Edge2> split;
        split.reserve(edges.size());
        for (const auto& e : edges) {
            const std::array<int64_t, 2> d{e.b[0] - e.a[0], e.b[1] - e.a[1]};
            std::vector<std::pair<int64_t, std::array<int64_t, 2>>> on_edge;
            for (const auto& [p2, p3] : points) {
                (void)p3;
                const std::array<int64_t, 2> r{p2[0] - e.a[0], p2[1] - e.a[1]};
                if (cross2(d, r) != 0) continue;
                const int64_t t = r[0] * d[0] + r[1] * d[1];
                const int64_t len2 = d[0] * d[0] + d[1] * d[1];
                if (t <= 0 || t >= len2) continue;
                on_edge.emplace_back(t, p2);
            }
            std::sort(on_edge.begin(), on_edge.end());
            std::array<int64_t, 2> prev = e.a;
            for (const auto& [t, p2] : on_edge) {
                (void)t;
                split.push_back({prev, p2});
                prev = p2;
            }
            split.push_back({prev, e.b});
        }
        edges.swap(split);
    }

    // cancel opposite directed edges
    std::map<std::pair<std::array<int64_t, 2>, std::array<int64_t, 2>>, int> count;
    for (const auto& e : edges) {
        auto rev = std::make_pair(e.b, e.a);
        auto it = count.find(rev);
        if (it != count.end() && it->second > 0)
            --it->second;
        else
            ++count[std::make_pair(e.a, e.b)];
    }

    // remaining boundary edges, grouped by source vertex
    std::map<std::array<int64_t, 2>, std::vector<std::array<int64_t, 2>>> out;
    size_t n_edges = 0;
    for (const auto& [key, c] : count)
        for (int k = 0; k < c; ++k) {
            out[key.first].push_back(key.second);
            ++n_edges;
        }

    std::vector<std::vector<Vec3i>> result;
    while (n_edges > 0) {
        // start anywhere; walk loops, at pinch vertices taking the most-CCW
        // turn from the incoming direction so each simple loop closes on itself
        auto it = out.begin();
        while (it->second.empty()) ++it;
        const std::array<int64_t, 2> start = it->first;
        std::vector<std::array<int64_t, 2>> loop;
        std::array<int64_t, 2> cur = start;
        std::array<int64_t, 2> indir{0, 0};
        do {
            loop.push_back(cur);
            auto& cands = out[cur];
            assert(!cands.empty());
            size_t pick = 0;
            if (cands.size() > 1 && (indir[0] != 0 || indir[1] != 0)) {
                // pinch vertex: take the largest CCW turn from the reversed
                // incoming direction so each simple loop closes on itself
                const std::array<int64_t, 2> ref{-indir[0], -indir[1]};
                auto dir_to = [&](const std::array<int64_t, 2>& tgt) {
                    return std::array<int64_t, 2>{tgt[0] - cur[0], tgt[1] - cur[1]};
                };
                for (size_t k = 1; k < cands.size(); ++k)
                    if (larger_ccw_from(ref, dir_to(cands[k]), dir_to(cands[pick])))
                        pick = k;
            }
            const std::array<int64_t, 2> nxt = cands[pick];
            cands.erase(cands.begin() + std::ptrdiff_t(pick));
            --n_edges;
            indir = {nxt[0] - cur[0], nxt[1] - cur[1]};
            cur = nxt;
        } while (cur != start);

        // drop collinear vertices
        std::vector<std::array<int64_t, 2>> clean;
        const size_t n = loop.size();
        for (size_t k = 0; k < n; ++k) {
            const auto& prev = loop[(k + n - 1) % n];
            const auto& v = loop[k];
            const auto& next = loop[(k + 1) % n];
            const std::array<int64_t, 2> d0{v[0] - prev[0], v[1] - prev[1]};
            const std::array<int64_t, 2> d1{next[0] - v[0], next[1] - v[1]};
            if (cross2(d0, d1) != 0) clean.push_back(v);
        }
        assert(clean.size() >= 3);

        std::vector<Vec3i> poly3;
        poly3.reserve(clean.size());
        for (const auto& p2 : clean) poly3.push_back(points.at(p2));
        result.push_back(std::move(poly3));
    }
    return result;
}

std::vector<FacePolygon> interface_faces(const std::vector<Atom>& atoms,
                                         const std::vector<int>& ids_a,
                                         const std::vector<int>& ids_b, int dim) {
    // facet key: sorted vertex set
    auto facet_key = [](const AtomFacet& f) {
        std::vector<Vec3i> k = f.verts;
        std::sort(k.begin(), k.end());
        return k;
    };
    std::map<std::vector<Vec3i>, std::pair<int, int>> b_facets;  // key -> (atom, facet)
    for (int ib : ids_b) {
        const Atom& atom = atoms[size_t(ib)];
        for (size_t kf = 0; kf < atom.facets.size(); ++kf)
            b_facets[facet_key(atom.facets[kf])] = {ib, int(kf)};
    }

    // shared facets oriented from the A side, grouped by plane
    struct PlaneKey {
        Vec3i n;
        int64_t off;
        bool operator<(const PlaneKey& o) const {
            if (n != o.n) return n < o.n;
            return off < o.off;
        }
    };
    std::map<PlaneKey, std::vector<std::vector<Vec3i>>> groups;
    std::map<PlaneKey, std::vector<std::pair<Vec3i, Vec3i>>> seg_groups;  // 2D

    for (int ia : ids_a) {
        const Atom& atom = atoms[size_t(ia)];
        for (const auto& f : atom.facets) {
            auto hit = b_facets.find(facet_key(f));
            if (hit == b_facets.end()) continue;
            if (dim == 3) {
                const Vec3i n = primitive_normal(f.verts);
                groups[{n, dot(n, f.verts[0])}].push_back(f.verts);
            } else {
                const Vec3i d = f.verts[1] - f.verts[0];
                Vec3i n{d[1], -d[0], 0};
                const int32_t g = int32_t(std::gcd(std::abs(n[0]), std::abs(n[1])));
                n = {n[0] / g, n[1] / g, 0};
                seg_groups[{n, dot(n, f.verts[0])}].emplace_back(f.verts[0], f.verts[1]);
            }
        }
    }

    std::vector<FacePolygon> faces;
    for (auto& [pk, polys] : groups) {
        for (auto& merged : merge_coplanar_polygons(polys, pk.n)) {
            FacePolygon fp;
            fp.normal = pk.n;
            const ExactArea a = polygon_area(merged, pk.n);
            fp.area = a.frac;
            fp.sqrt2 = a.sqrt2;
            fp.verts = std::move(merged);
            faces.push_back(std::move(fp));
        }
    }
    // 2D: chain collinear segments sharing endpoints. All segments on a line
    // with outward normal n run along dir = (-n_y, n_x), so the line
    // parameter dot(p, dir) orders them.
    for (auto& [pk, segs] : seg_groups) {
        const Vec3i dir{-pk.n[1], pk.n[0], 0};
        auto param = [&](Vec3i p) { return dot(p, dir); };
        std::sort(segs.begin(), segs.end(), [&](const auto& s, const auto& t) {
            return param(s.first) < param(t.first);
        });
        size_t k = 0;
        while (k < segs.size()) {
            assert(param(segs[k].second) > param(segs[k].first));
            const Vec3i lo = segs[k].first;
            Vec3i hi = segs[k].second;
            size_t j = k + 1;
            while (j < segs.size() && segs[j].first == hi) {
                hi = segs[j].second;
                ++j;
            }
            FacePolygon fp;
            fp.normal = pk.n;
            const ExactArea a = segment_length(lo, hi);
            fp.area = a.frac;
            fp.sqrt2 = a.sqrt2;
            fp.verts = {lo, hi};
            faces.push_back(std::move(fp));
            k = j;
        }
    }
    return faces;
}

}  // namespace voromesh
