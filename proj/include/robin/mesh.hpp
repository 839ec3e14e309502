#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "robin/core.hpp"
#include "robin/errors.hpp"
#include "robin/geometry.hpp"
#include "robin/model_spectra.hpp"

namespace robin {

enum class ArtificialBC { Dirichlet, Neumann };

inline const char* to_string(ArtificialBC bc) {
    return bc == ArtificialBC::Dirichlet ? "artificial-dirichlet" : "artificial-neumann";
}

// Parameters of the truncated exterior domain and its mesh. The domain is
// the collar of width `offset` around the polygon; `bc` records which
// condition the artificial outer boundary is meant to carry (assembly may
// override it). h_boundary_layer bounds cell diameters within 2*h of the
// Robin wall, h_interior everywhere else. Around each polygon vertex the
// mesh is refined `grading_levels` times, each level halving cell size on a
// disk whose radius shrinks by `grading_ratio`.
struct TruncationSpec {
    double offset = 1.0;
    ArtificialBC bc = ArtificialBC::Dirichlet;
    double h_boundary_layer = 0.05;
    double h_interior = 0.25;
    double grading_ratio = 0.5;
    int grading_levels = 3;
};

// Boundary edge with its tag: side >= 0 means the edge lies on that polygon
// side (Robin wall); side == -1 marks the artificial outer boundary.
struct BoundaryEdge {
    int a = 0;
    int b = 0;
    int side = -1;
};

struct TriangleMesh {
    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> triangles;
    std::vector<BoundaryEdge> boundary_edges;
    std::vector<int> corner_nodes;  // node id per polygon vertex (empty for synthetic meshes)
    double scale = 1.0;             // reference length for tolerances

    double triangle_area(std::size_t k) const {
        const auto& t = triangles[k];
        const Vec2 a = nodes[static_cast<std::size_t>(t[0])];
        const Vec2 b = nodes[static_cast<std::size_t>(t[1])];
        const Vec2 c = nodes[static_cast<std::size_t>(t[2])];
        return 0.5 * cross(b - a, c - a);
    }

    double triangle_min_angle(std::size_t k) const {
        const auto& t = triangles[k];
        const Vec2 p[3] = {nodes[static_cast<std::size_t>(t[0])],
                           nodes[static_cast<std::size_t>(t[1])],
                           nodes[static_cast<std::size_t>(t[2])]};
        double best = kPi;
        for (int i = 0; i < 3; ++i) {
            const Vec2 u = p[(i + 1) % 3] - p[i];
            const Vec2 v = p[(i + 2) % 3] - p[i];
            best = std::min(best, std::atan2(std::abs(cross(u, v)), dot(u, v)));
        }
        return best;
    }

    double triangle_diameter(std::size_t k) const {
        const auto& t = triangles[k];
        const Vec2 a = nodes[static_cast<std::size_t>(t[0])];
        const Vec2 b = nodes[static_cast<std::size_t>(t[1])];
        const Vec2 c = nodes[static_cast<std::size_t>(t[2])];
        return std::max({dist(a, b), dist(b, c), dist(c, a)});
    }

    double min_angle() const {
        double best = kPi;
        for (std::size_t k = 0; k < triangles.size(); ++k)
            best = std::min(best, triangle_min_angle(k));
        return best;
    }

    double max_diameter() const {
        double best = 0.0;
        for (std::size_t k = 0; k < triangles.size(); ++k)
            best = std::max(best, triangle_diameter(k));
        return best;
    }

    double robin_length(int side) const {
        double acc = 0.0;
        for (const BoundaryEdge& e : boundary_edges)
            if (e.side == side)
                acc += dist(nodes[static_cast<std::size_t>(e.a)],
                            nodes[static_cast<std::size_t>(e.b)]);
        return acc;
    }
};

inline double polygon_boundary_distance(const ConvexPolygon& p, Vec2 x) {
    double best = std::numeric_limits<double>::infinity();
    for (int n = 0; n < p.side_count(); ++n) {
        const Vec2 a = p.vertex(n);
        const Vec2 b = p.vertex_wrapped(n + 1);
        const Vec2 ab = b - a;
        const double w = std::clamp(dot(x - a, ab) / dot(ab, ab), 0.0, 1.0);
        best = std::min(best, dist(x, a + w * ab));
    }
    return best;
}

namespace meshdetail {

inline std::uint64_t edge_key(int a, int b) {
    const std::uint64_t lo = static_cast<std::uint64_t>(std::min(a, b));
    const std::uint64_t hi = static_cast<std::uint64_t>(std::max(a, b));
    return (hi << 32) | lo;
}

// Vertical layering shared by every side strip and (as radii) every vertex
// sector. A row with to_level == from_level is a plain band; to_level ==
// from_level + 1 marks a 1:2 column-coarsening transition.
struct Row {
    double s0 = 0.0, s1 = 0.0;
    int from_level = 0, to_level = 0;
};

inline std::vector<Row> build_rows(const TruncationSpec& spec) {
    const double d0 = spec.h_boundary_layer / std::numbers::sqrt2;
    int kmax = 0;
    while (kmax < 20 && std::ldexp(d0, kmax + 1) <= spec.h_interior / 1.56) ++kmax;

    std::vector<Row> rows;
    double s = 0.0;
    int level = 0;
    const double wall_top = std::min(2.0 * spec.h_boundary_layer, spec.offset);
    const int nw = std::max(1, static_cast<int>(std::ceil(wall_top / d0)));
    for (int i = 0; i < nw; ++i)
        rows.push_back({wall_top * i / nw, wall_top * (i + 1) / nw, 0, 0});
    s = wall_top;

    while (s < spec.offset) {
        const double d = std::ldexp(d0, level);
        double rem = spec.offset - s;
        if (level < kmax && rem > 1.5 * d + 6.0 * d) {
            rows.push_back({s, s + 1.5 * d, level, level + 1});
            s += 1.5 * d;
            ++level;
            const double dn = std::ldexp(d0, level);
            rows.push_back({s, s + dn, level, level});
            s += dn;
            continue;
        }
        while ((rem = spec.offset - s) > 2.2 * d) {
            rows.push_back({s, s + d, level, level});
            s += d;
        }
        rem = spec.offset - s;
        if (rem <= 0.0) break;
        if (rem <= 1.2 * d) {
            rows.push_back({s, spec.offset, level, level});
        } else {
            rows.push_back({s, s + rem / 2.0, level, level});
            rows.push_back({s + rem / 2.0, spec.offset, level, level});
        }
        break;
    }
    rows.back().s1 = spec.offset;
    return rows;
}

class Builder {
public:
    explicit Builder(double merge_tol) : tol_(merge_tol), inv_(1.0 / (4.0 * merge_tol)) {}

    int node(Vec2 p) {
        const long long cx = static_cast<long long>(std::floor(p.x * inv_));
        const long long cy = static_cast<long long>(std::floor(p.y * inv_));
        for (long long dx = -1; dx <= 1; ++dx)
            for (long long dy = -1; dy <= 1; ++dy) {
                const auto it = cells_.find(cell_key(cx + dx, cy + dy));
                if (it != cells_.end())
                    for (const int id : it->second)
                        if (dist(nodes[static_cast<std::size_t>(id)], p) <= tol_) return id;
            }
        const int id = static_cast<int>(nodes.size());
        nodes.push_back(p);
        cells_[cell_key(cx, cy)].push_back(id);
        return id;
    }

    // Inserts with positive orientation; degenerate triangles are a bug.
    void tri(int a, int b, int c) {
        const double ar = cross(nodes[static_cast<std::size_t>(b)] - nodes[static_cast<std::size_t>(a)],
                                nodes[static_cast<std::size_t>(c)] - nodes[static_cast<std::size_t>(a)]);
        if (ar == 0.0) throw Error("degenerate triangle generated");
        if (ar < 0.0) std::swap(b, c);
        tris.push_back({a, b, c});
    }

    void boundary(int a, int b, int side) { bedges.push_back({a, b, side}); }

    std::vector<Vec2> nodes;
    std::vector<std::array<int, 3>> tris;
    std::vector<BoundaryEdge> bedges;

private:
    static std::uint64_t cell_key(long long x, long long y) {
        return (static_cast<std::uint64_t>(x) << 32) ^ (static_cast<std::uint64_t>(y) & 0xffffffffull);
    }

    double tol_;
    double inv_;
    std::unordered_map<std::uint64_t, std::vector<int>> cells_;
};

// Newest-vertex bisection with conforming closure. Triangles are stored
// with their refinement edge as (v0, v1); bisecting propagates to the
// neighbour across that edge first when needed.
class Bisector {
public:
    Bisector(Builder& b) : b_(b) {
        for (std::size_t k = 0; k < b_.tris.size(); ++k) {
            orient_base(b_.tris[k]);
            for (int e = 0; e < 3; ++e) add_edge(static_cast<int>(k), e);
        }
        for (std::size_t i = 0; i < b_.bedges.size(); ++i)
            bmap_[edge_key(b_.bedges[i].a, b_.bedges[i].b)] = static_cast<int>(i);
    }

    // One conforming bisection of triangle t (plus whatever the closure
    // demands). Invalidated indices are handled by the caller via epochs.
    void bisect(int t, int depth = 0) {
        if (depth > 512) throw Error("bisection closure failed to terminate");
        for (;;) {
            const int a = b_.tris[static_cast<std::size_t>(t)][0];
            const int b = b_.tris[static_cast<std::size_t>(t)][1];
            const int n = neighbour(t, a, b);
            if (n < 0) break;
            const auto& nt = b_.tris[static_cast<std::size_t>(n)];
            const bool compatible = (std::min(nt[0], nt[1]) == std::min(a, b)) &&
                                    (std::max(nt[0], nt[1]) == std::max(a, b));
            if (compatible) break;
            bisect(n, depth + 1);
        }
        const int a = b_.tris[static_cast<std::size_t>(t)][0];
        const int b = b_.tris[static_cast<std::size_t>(t)][1];
        const int n = neighbour(t, a, b);
        const int mid = b_.node(0.5 * (b_.nodes[static_cast<std::size_t>(a)] +
                                       b_.nodes[static_cast<std::size_t>(b)]));
        split(t, mid);
        if (n >= 0) {
            split(n, mid);
        } else {
            const auto it = bmap_.find(edge_key(a, b));
            if (it != bmap_.end()) {
                const BoundaryEdge old = b_.bedges[static_cast<std::size_t>(it->second)];
                b_.bedges[static_cast<std::size_t>(it->second)] = {old.a, mid, old.side};
                bmap_[edge_key(old.a, mid)] = it->second;
                bmap_.erase(edge_key(a, b));
                b_.bedges.push_back({mid, old.b, old.side});
                bmap_[edge_key(mid, old.b)] = static_cast<int>(b_.bedges.size()) - 1;
            }
        }
    }

    int epoch_of(int t) const { return epoch_[static_cast<std::size_t>(t)] ; }
    void start_epoch(int e) { current_epoch_ = e; epoch_.resize(b_.tris.size(), 0); }

private:
    void orient_base(std::array<int, 3>& t) {
        // refinement edge = longest edge, ties by node ids
        double best = -1.0;
        int bi = 0;
        for (int e = 0; e < 3; ++e) {
            const int u = t[static_cast<std::size_t>(e)], v = t[static_cast<std::size_t>((e + 1) % 3)];
            const double len = dist(b_.nodes[static_cast<std::size_t>(u)],
                                    b_.nodes[static_cast<std::size_t>(v)]);
            if (len > best * (1.0 + 1e-12) ||
                (len > best * (1.0 - 1e-12) && better_tie(u, v, t, bi))) {
                best = len;
                bi = e;
            }
        }
        std::rotate(t.begin(), t.begin() + bi, t.end());
    }

    bool better_tie(int u, int v, const std::array<int, 3>& t, int bi) const {
        const int pu = t[static_cast<std::size_t>(bi)], pv = t[static_cast<std::size_t>((bi + 1) % 3)];
        const auto cur = std::minmax(pu, pv);
        const auto cand = std::minmax(u, v);
        return cand < cur;
    }

    void add_edge(int t, int e) {
        const auto& tr = b_.tris[static_cast<std::size_t>(t)];
        edges_[edge_key(tr[static_cast<std::size_t>(e)], tr[static_cast<std::size_t>((e + 1) % 3)])]
            .push_back(t);
    }

    void remove_edges(int t) {
        const auto& tr = b_.tris[static_cast<std::size_t>(t)];
        for (int e = 0; e < 3; ++e) {
            auto& v = edges_[edge_key(tr[static_cast<std::size_t>(e)],
                                      tr[static_cast<std::size_t>((e + 1) % 3)])];
            v.erase(std::remove(v.begin(), v.end(), t), v.end());
        }
    }

    int neighbour(int t, int a, int b) const {
        const auto it = edges_.find(edge_key(a, b));
        if (it == edges_.end()) return -1;
        for (const int o : it->second)
            if (o != t) return o;
        return -1;
    }

    // Replace t = (a, b, c) by its two children sharing the new vertex.
    void split(int t, int mid) {
        const std::array<int, 3> tr = b_.tris[static_cast<std::size_t>(t)];
        remove_edges(t);
        const std::array<int, 3> c1 = {tr[2], tr[0], mid};
        const std::array<int, 3> c2 = {tr[1], tr[2], mid};
        b_.tris[static_cast<std::size_t>(t)] = c1;
        b_.tris.push_back(c2);
        const int t2 = static_cast<int>(b_.tris.size()) - 1;
        epoch_.resize(b_.tris.size(), 0);
        epoch_[static_cast<std::size_t>(t)] = current_epoch_;
        epoch_[static_cast<std::size_t>(t2)] = current_epoch_;
        for (int e = 0; e < 3; ++e) {
            add_edge(t, e);
            add_edge(t2, e);
        }
    }

    Builder& b_;
    std::unordered_map<std::uint64_t, std::vector<int>> edges_;
    std::unordered_map<std::uint64_t, int> bmap_;
    std::vector<int> epoch_;
    int current_epoch_ = 0;
};

// Deterministic ordering: nodes lexicographic by coordinates, triangles and
// boundary edges by their (remapped) node triples/pairs.
inline void canonicalize(TriangleMesh& m) {
    const std::size_t n = m.nodes.size();
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const Vec2 pa = m.nodes[static_cast<std::size_t>(a)];
        const Vec2 pb = m.nodes[static_cast<std::size_t>(b)];
        if (pa.x != pb.x) return pa.x < pb.x;
        if (pa.y != pb.y) return pa.y < pb.y;
        return a < b;
    });
    std::vector<int> rank(n);
    for (std::size_t i = 0; i < n; ++i) rank[static_cast<std::size_t>(order[i])] = static_cast<int>(i);

    std::vector<Vec2> nodes(n);
    for (std::size_t i = 0; i < n; ++i) nodes[i] = m.nodes[static_cast<std::size_t>(order[i])];
    m.nodes = std::move(nodes);

    for (auto& t : m.triangles) {
        for (int& v : t) v = rank[static_cast<std::size_t>(v)];
        // rotate so the smallest id leads; cyclic, so orientation survives
        const auto it = std::min_element(t.begin(), t.end());
        std::rotate(t.begin(), it, t.end());
    }
    std::sort(m.triangles.begin(), m.triangles.end());

    for (auto& e : m.boundary_edges) {
        e.a = rank[static_cast<std::size_t>(e.a)];
        e.b = rank[static_cast<std::size_t>(e.b)];
        if (e.a > e.b) std::swap(e.a, e.b);
    }
    std::sort(m.boundary_edges.begin(), m.boundary_edges.end(),
              [](const BoundaryEdge& x, const BoundaryEdge& y) {
                  return std::tie(x.a, x.b, x.side) < std::tie(y.a, y.b, y.side);
              });

    for (int& c : m.corner_nodes) c = rank[static_cast<std::size_t>(c)];
}

}  // namespace meshdetail

// Structural soundness: positive orientation, edge-manifold connectivity,
// declared boundary matching the topological one, closed tagged loops.
inline void validate_mesh(const TriangleMesh& m) {
    if (m.nodes.empty() || m.triangles.empty()) throw InvalidMesh("mesh has no cells");
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        for (const int v : m.triangles[k])
            if (v < 0 || v >= static_cast<int>(m.nodes.size()))
                throw InvalidMesh("triangle references a missing node");
        if (!(m.triangle_area(k) > 0.0)) throw InvalidMesh("non-positive triangle orientation");
    }
    std::unordered_map<std::uint64_t, int> count;
    for (const auto& t : m.triangles)
        for (int e = 0; e < 3; ++e) {
            const int a = t[static_cast<std::size_t>(e)], b = t[static_cast<std::size_t>((e + 1) % 3)];
            if (++count[meshdetail::edge_key(a, b)] > 2)
                throw InvalidMesh("edge shared by more than two triangles");
        }
    std::unordered_map<std::uint64_t, int> declared;
    for (const auto& e : m.boundary_edges) ++declared[meshdetail::edge_key(e.a, e.b)];
    std::size_t boundary_topo = 0;
    for (const auto& [key, c] : count) {
        if (c == 1) {
            ++boundary_topo;
            if (declared.find(key) == declared.end())
                throw InvalidMesh("untagged boundary edge");
        }
    }
    if (boundary_topo != m.boundary_edges.size())
        throw InvalidMesh("boundary tags do not match mesh topology");
    std::unordered_map<int, int> degree;
    for (const auto& e : m.boundary_edges) {
        ++degree[e.a];
        ++degree[e.b];
    }
    for (const auto& [node, d] : degree)
        if (d != 2) throw InvalidMesh("boundary loops are not closed at node " + std::to_string(node));
}

// Geometric contract against the generating polygon: Robin edges sit on
// their side, per-side lengths add up, corner nodes coincide with vertices.
inline void validate_against_polygon(const TriangleMesh& m, const ConvexPolygon& p) {
    const Decomposition dec = decompose(p);
    const double tol = 1e-10 * std::max(1.0, p.scale());
    for (const auto& e : m.boundary_edges) {
        if (e.side < 0) continue;
        if (e.side >= p.side_count()) throw InvalidMesh("Robin tag points past the last side");
        const SideFrame& f = dec.frames[static_cast<std::size_t>(e.side)];
        for (const int v : {e.a, e.b}) {
            const auto [t, s] = f.local(m.nodes[static_cast<std::size_t>(v)]);
            if (std::abs(s) > tol || t < -tol || t > f.length + tol)
                throw InvalidMesh("Robin edge leaves its wall segment on side " +
                                  std::to_string(e.side));
        }
    }
    for (int n = 0; n < p.side_count(); ++n) {
        const double got = m.robin_length(n);
        const double want = p.side_length(n);
        if (std::abs(got - want) > 1e-8 * want)
            throw InvalidMesh("Robin wall length mismatch on side " + std::to_string(n));
    }
    if (m.corner_nodes.size() != static_cast<std::size_t>(p.side_count()))
        throw InvalidMesh("corner node list does not match the polygon");
    for (int n = 0; n < p.side_count(); ++n) {
        const Vec2 at = m.nodes[static_cast<std::size_t>(m.corner_nodes[static_cast<std::size_t>(n)])];
        if (dist(at, p.vertex(n)) > 1e-12 * std::max(1.0, p.scale()))
            throw InvalidMesh("corner node drifted from vertex " + std::to_string(n));
    }
}

inline void validate_quality(const TriangleMesh& m) {
    const double limit = 15.0 * kPi / 180.0;
    for (std::size_t k = 0; k < m.triangles.size(); ++k)
        if (m.triangle_min_angle(k) < limit)
            throw MeshQualityFailure("triangle " + std::to_string(k) + " has min angle " +
                                     format_double(m.triangle_min_angle(k) * 180.0 / kPi) +
                                     " deg");
}

inline void validate_sizes(const TriangleMesh& m, const ConvexPolygon& p,
                           const TruncationSpec& spec) {
    for (std::size_t k = 0; k < m.triangles.size(); ++k) {
        const auto& t = m.triangles[k];
        double d = 0.0;
        for (const int v : t)
            d = std::max(d, polygon_boundary_distance(p, m.nodes[static_cast<std::size_t>(v)]));
        const double diam = m.triangle_diameter(k);
        const double cap = d <= 2.0 * spec.h_boundary_layer * (1.0 + 1e-9)
                               ? spec.h_boundary_layer
                               : spec.h_interior;
        if (diam > cap * 1.05)
            throw MeshQualityFailure("cell " + std::to_string(k) + " diameter " +
                                     format_double(diam) + " exceeds its bound " +
                                     format_double(cap));
    }
}

// Builds the structured exterior mesh: a banded tensor grid on each side
// strip (columns coarsening 2:1 between bands), matching polar rings on
// each vertex sector (angular counts doubling outward), then conforming
// bisection refinement around the polygon vertices.
inline TriangleMesh build_mesh(const ConvexPolygon& p, const TruncationSpec& spec) {
    if (!(spec.h_boundary_layer > 0.0) || !(spec.h_interior >= spec.h_boundary_layer))
        throw DegenerateSpec("need 0 < h_boundary_layer <= h_interior");
    if (spec.h_boundary_layer > p.min_side_length() / 4.0)
        throw DegenerateSpec("boundary-layer size " + format_double(spec.h_boundary_layer) +
                             " too large for min side " + format_double(p.min_side_length()));
    if (!(spec.offset > 4.0 * spec.h_boundary_layer))
        throw DegenerateSpec("offset must exceed 4x the boundary-layer size");
    if (!(spec.grading_ratio > 0.0 && spec.grading_ratio < 1.0))
        throw DegenerateSpec("grading ratio must lie in (0, 1)");
    if (spec.grading_levels < 0) throw DegenerateSpec("grading depth must be >= 0");

    const Decomposition dec = decompose(p);
    const int m = p.side_count();
    const double d0 = spec.h_boundary_layer / std::numbers::sqrt2;
    const std::vector<meshdetail::Row> rows = meshdetail::build_rows(spec);
    int kmax = 0;
    for (const auto& r : rows) kmax = std::max(kmax, r.to_level);

    const double merge_tol =
        std::max(1e-6 * d0 * std::pow(spec.grading_ratio, spec.grading_levels),
                 1e-13 * std::max(1.0, p.scale()));
    meshdetail::Builder bld(merge_tol);

    // --- side strips ---
    for (int n = 0; n < m; ++n) {
        const SideFrame& f = dec.frames[static_cast<std::size_t>(n)];
        const double len = f.length;
        const int fine = 1 << kmax;
        const int cols0 =
            fine * std::max(1, static_cast<int>(std::ceil(len / (d0 * fine))));
        // node position at fine index i (of cols0) and height s; one shared
        // expression so rows at different levels agree bitwise
        const auto at = [&](int i, double s) { return f.map(len * i / cols0, s); };

        for (std::size_t rj = 0; rj < rows.size(); ++rj) {
            const meshdetail::Row& r = rows[rj];
            const int cb = cols0 >> r.from_level;  // bottom columns
            const int step_b = cols0 / cb;
            if (r.from_level == r.to_level) {
                for (int i = 0; i < cb; ++i) {
                    const int i0 = i * step_b, i1 = (i + 1) * step_b;
                    const int n00 = bld.node(at(i0, r.s0));
                    const int n10 = bld.node(at(i1, r.s0));
                    const int n01 = bld.node(at(i0, r.s1));
                    const int n11 = bld.node(at(i1, r.s1));
                    if ((i + static_cast<int>(rj)) % 2 == 0) {
                        bld.tri(n00, n10, n11);
                        bld.tri(n00, n11, n01);
                    } else {
                        bld.tri(n00, n10, n01);
                        bld.tri(n10, n11, n01);
                    }
                    if (r.s0 == 0.0) bld.boundary(n00, n10, n);
                    if (r.s1 == spec.offset) bld.boundary(n01, n11, -1);
                }
            } else {
                const int ct = cols0 >> r.to_level;  // top columns = cb / 2
                for (int i = 0; i < ct; ++i) {
                    const int b0 = bld.node(at(2 * i * step_b, r.s0));
                    const int b1 = bld.node(at((2 * i + 1) * step_b, r.s0));
                    const int b2 = bld.node(at((2 * i + 2) * step_b, r.s0));
                    const int t0 = bld.node(at(2 * i * step_b, r.s1));
                    const int t1 = bld.node(at((2 * i + 2) * step_b, r.s1));
                    bld.tri(b0, b1, t0);
                    bld.tri(b1, t1, t0);
                    bld.tri(b1, b2, t1);
                    if (r.s1 == spec.offset) bld.boundary(t0, t1, -1);
                }
            }
        }
    }

    // --- vertex sectors ---
    std::vector<int> corner_ids(static_cast<std::size_t>(m), -1);
    for (int n = 0; n < m; ++n) {
        const Sector& sec = dec.sectors[static_cast<std::size_t>(n)];
        const double theta = sec.opening;
        // direction of the i-th of cnt angular nodes; endpoints are exact so
        // ray nodes merge bitwise with the adjacent strips
        const auto dir = [&](int i, int cnt) -> Vec2 {
            if (i == 0) return sec.ray_start;
            if (i == cnt) return sec.ray_end;
            return rotate(sec.ray_start, theta * i / cnt);
        };
        const int apex = bld.node(sec.apex);
        corner_ids[static_cast<std::size_t>(n)] = apex;

        int cnt = std::max(1, static_cast<int>(std::ceil(theta * rows[0].s1 / d0)));
        for (std::size_t rj = 0; rj < rows.size(); ++rj) {
            const meshdetail::Row& r = rows[rj];
            const double dlv = std::ldexp(d0, r.to_level);
            int cout = cnt;
            if (rj > 0 && theta * r.s1 / cnt > dlv) cout = 2 * cnt;
            if (rj == 0) {
                for (int i = 0; i < cnt; ++i) {
                    const int a0 = bld.node(sec.apex + r.s1 * dir(i, cnt));
                    const int a1 = bld.node(sec.apex + r.s1 * dir(i + 1, cnt));
                    bld.tri(apex, a0, a1);
                    if (r.s1 == spec.offset) bld.boundary(a0, a1, -1);
                }
                continue;
            }
            if (cout == cnt) {
                for (int i = 0; i < cnt; ++i) {
                    const int i0 = bld.node(sec.apex + r.s0 * dir(i, cnt));
                    const int i1 = bld.node(sec.apex + r.s0 * dir(i + 1, cnt));
                    const int o0 = bld.node(sec.apex + r.s1 * dir(i, cnt));
                    const int o1 = bld.node(sec.apex + r.s1 * dir(i + 1, cnt));
                    if (i % 2 == 0) {
                        bld.tri(i0, i1, o1);
                        bld.tri(i0, o1, o0);
                    } else {
                        bld.tri(i0, i1, o0);
                        bld.tri(i1, o1, o0);
                    }
                    if (r.s1 == spec.offset) bld.boundary(o0, o1, -1);
                }
            } else {
                for (int i = 0; i < cnt; ++i) {
                    const int i0 = bld.node(sec.apex + r.s0 * dir(i, cnt));
                    const int i1 = bld.node(sec.apex + r.s0 * dir(i + 1, cnt));
                    const int o0 = bld.node(sec.apex + r.s1 * dir(2 * i, cout));
                    const int om = bld.node(sec.apex + r.s1 * dir(2 * i + 1, cout));
                    const int o1 = bld.node(sec.apex + r.s1 * dir(2 * i + 2, cout));
                    bld.tri(i0, om, o0);
                    bld.tri(i0, i1, om);
                    bld.tri(i1, o1, om);
                    if (r.s1 == spec.offset) {
                        bld.boundary(o0, om, -1);
                        bld.boundary(om, o1, -1);
                    }
                }
                cnt = cout;
            }
        }
    }

    // --- corner grading ---
    if (spec.grading_levels > 0) {
        meshdetail::Bisector bis(bld);
        const double rho0 = std::min(2.0 * spec.h_boundary_layer, p.min_side_length() / 4.0);
        int epoch = 0;
        for (int lvl = 1; lvl <= spec.grading_levels; ++lvl) {
            const double rho = rho0 * std::pow(spec.grading_ratio, lvl - 1);
            for (int pass = 0; pass < 2; ++pass) {
                ++epoch;
                bis.start_epoch(epoch);
                std::vector<int> marked;
                for (std::size_t k = 0; k < bld.tris.size(); ++k) {
                    double d = std::numeric_limits<double>::infinity();
                    for (const int v : bld.tris[k])
                        for (int c = 0; c < m; ++c)
                            d = std::min(d, dist(bld.nodes[static_cast<std::size_t>(v)],
                                                 p.vertex(c)));
                    if (d < rho) marked.push_back(static_cast<int>(k));
                }
                for (const int t : marked)
                    if (bis.epoch_of(t) != epoch) bis.bisect(t);
            }
        }
    }

    TriangleMesh mesh;
    mesh.nodes = std::move(bld.nodes);
    mesh.triangles = std::move(bld.tris);
    mesh.boundary_edges = std::move(bld.bedges);
    mesh.corner_nodes = std::move(corner_ids);
    mesh.scale = std::max(1.0, p.scale());
    meshdetail::canonicalize(mesh);
    validate_mesh(mesh);
    validate_against_polygon(mesh, p);
    validate_quality(mesh);
    validate_sizes(mesh, p, spec);
    return mesh;
}

// Uniform red refinement: every triangle splits into four via edge
// midpoints. Child cells have half the parent diameter, boundary tags are
// inherited, and the coarse P1 space is contained in the fine one.
inline TriangleMesh refine(const TriangleMesh& coarse) {
    TriangleMesh fine;
    fine.nodes = coarse.nodes;
    fine.scale = coarse.scale;
    fine.corner_nodes = coarse.corner_nodes;
    std::map<std::pair<int, int>, int> mid;
    const auto midpoint = [&](int a, int b) {
        const auto key = std::minmax(a, b);
        const auto it = mid.find(key);
        if (it != mid.end()) return it->second;
        const int id = static_cast<int>(fine.nodes.size());
        fine.nodes.push_back(0.5 * (coarse.nodes[static_cast<std::size_t>(a)] +
                                    coarse.nodes[static_cast<std::size_t>(b)]));
        mid.emplace(key, id);
        return id;
    };
    for (const auto& t : coarse.triangles) {
        const int m01 = midpoint(t[0], t[1]);
        const int m12 = midpoint(t[1], t[2]);
        const int m20 = midpoint(t[2], t[0]);
        fine.triangles.push_back({t[0], m01, m20});
        fine.triangles.push_back({m01, t[1], m12});
        fine.triangles.push_back({m20, m12, t[2]});
        fine.triangles.push_back({m01, m12, m20});
    }
    for (const auto& e : coarse.boundary_edges) {
        const int m_ab = midpoint(e.a, e.b);
        fine.boundary_edges.push_back({e.a, m_ab, e.side});
        fine.boundary_edges.push_back({m_ab, e.b, e.side});
    }
    meshdetail::canonicalize(fine);
    validate_mesh(fine);
    return fine;
}

// Mesh parameters adapted to the decay of the target eigenfunctions:
// resolve e^{-alpha s} with >= 10 cells per e-fold, truncate where the
// m_max-th mode has decayed by e^-16, refuse when the model bracket cannot
// separate that mode from the essential spectrum.
inline TruncationSpec default_spec(const ConvexPolygon& p, double alpha, int m_max) {
    if (!(alpha > 0.0))
        throw NonPositiveAlpha("alpha must be positive, got " + format_double(alpha));
    if (m_max < 1) throw std::invalid_argument("default_spec needs m_max >= 1");
    const double mu = model_eigenvalue(p, SpectrumKind::Dirichlet, m_max);
    if (mu >= alpha * alpha)
        throw BracketInvalid("model eigenvalue " + format_double(mu) +
                             " reaches alpha^2 = " + format_double(alpha * alpha) +
                             "; raise alpha");
    const double alpha_eff = std::sqrt(alpha * alpha - mu);
    TruncationSpec spec;
    spec.offset = std::max(1.5 * p.max_side_length(), 16.0 / alpha_eff);
    spec.h_boundary_layer = std::min(0.1 / alpha, p.min_side_length() / 20.0);
    spec.h_interior = std::min(5.0 * spec.h_boundary_layer, p.min_side_length() / 4.0);
    spec.grading_ratio = 0.5;
    spec.grading_levels = 3;
    return spec;
}

// Uniform right-triangle mesh of the unit square; the whole boundary is
// tagged artificial. Bounded sanity problem for the eigensolver.
inline TriangleMesh unit_square_mesh(int n) {
    if (n < 1) throw std::invalid_argument("unit_square_mesh needs n >= 1");
    TriangleMesh m;
    m.scale = 1.0;
    const auto id = [&](int i, int j) { return j * (n + 1) + i; };
    for (int j = 0; j <= n; ++j)
        for (int i = 0; i <= n; ++i)
            m.nodes.push_back({static_cast<double>(i) / n, static_cast<double>(j) / n});
    for (int j = 0; j < n; ++j)
        for (int i = 0; i < n; ++i) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    for (int i = 0; i < n; ++i) {
        m.boundary_edges.push_back({id(i, 0), id(i + 1, 0), -1});
        m.boundary_edges.push_back({id(i, n), id(i + 1, n), -1});
        m.boundary_edges.push_back({id(0, i), id(0, i + 1), -1});
        m.boundary_edges.push_back({id(n, i), id(n, i + 1), -1});
    }
    meshdetail::canonicalize(m);
    validate_mesh(m);
    return m;
}

}  // namespace robin
