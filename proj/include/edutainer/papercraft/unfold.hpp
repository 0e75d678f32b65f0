#pragma once

#include "edutainer/mesh/validate.hpp"
#include "edutainer/papercraft/paper_mesh.hpp"
#include "edutainer/papercraft/planar.hpp"

#include <numeric>
#include <queue>
#include <random>
#include <sstream>

namespace edutainer {

struct PlacedTriangle {
    int triangle = -1;
    Triangle2 corners;  // same corner order as the mesh triangle
};

struct Island {
    std::vector<PlacedTriangle> triangles;
};

enum class EdgeKind { Fold, Cut };
enum class FoldDirection { None, Mountain, Valley };

struct LayoutEdge {
    int v0 = -1, v1 = -1;
    std::array<int, 2> faces{-1, -1};  // faces[0] < faces[1]
    std::array<int, 2> sides{-1, -1};  // edge index k (corner k -> k+1) within each face
    EdgeKind kind = EdgeKind::Cut;
    FoldDirection direction = FoldDirection::None;  // seen from the printed (outer) side
    int label = 0;                                  // 1-based pairing label on cut edges
};

struct Tab {
    int edge = -1;
    int triangle = -1;  // the face whose boundary carries the flap
    int side = -1;
    std::array<Vec2, 4> outline;  // base a, base b, then the two shoulder points, in island coordinates
};

struct PlanarLayout {
    std::vector<Island> islands;
    std::vector<LayoutEdge> edges;  // indexed like EdgeTopology of the source mesh
    std::vector<Tab> tabs;
    double scale = 1.0;  // millimetres per model unit
    std::size_t source_triangles = 0;
    std::vector<std::pair<int, int>> location;  // triangle -> (island, slot)
    std::uint32_t seed = 0;                     // seed of the winning attempt

    const PlacedTriangle& placed(int triangle) const {
        const auto [island, slot] = location.at(triangle);
        return islands[island].triangles[slot];
    }
    double area() const {
        double a = 0.0;
        for (const Island& is : islands)
            for (const PlacedTriangle& p : is.triangles) a += std::abs(signed_area(p.corners));
        return a;
    }
    std::size_t cut_count() const {
        return std::count_if(edges.begin(), edges.end(), [](const LayoutEdge& e) { return e.kind == EdgeKind::Cut; });
    }
};

struct UnfoldOptions {
    int attempts = 32;
    std::uint32_t seed = 0;
    double overlap_tolerance = 1e-9;  // relative to the total layout area
};

// Rebuilds the glue flaps: one per cut edge, on the lower-numbered face, depth
// min(5 mm, 0.3 x edge length) at `mm_per_unit`.
inline void build_tabs(PlanarLayout& layout, double mm_per_unit) {
    layout.tabs.clear();
    for (std::size_t e = 0; e < layout.edges.size(); ++e) {
        const LayoutEdge& le = layout.edges[e];
        if (le.kind != EdgeKind::Cut) continue;
        const PlacedTriangle& p = layout.placed(le.faces[0]);
        const int k = le.sides[0];
        const Vec2 a = p.corners[k], b = p.corners[(k + 1) % 3], c = p.corners[(k + 2) % 3];
        const double len = (b - a).norm();
        if (!(len > 0.0)) continue;
        const Vec2 dir = (b - a) / len;
        Vec2 out(-dir.y(), dir.x());
        if (out.dot(c - a) > 0.0) out = -out;
        const double depth = std::min(5.0 / mm_per_unit, 0.3 * len);
        layout.tabs.push_back(Tab{static_cast<int>(e), le.faces[0], k,
                                  {a, b, Vec2(b - depth * dir + depth * out), Vec2(a + depth * dir + depth * out)}});
    }
}

namespace detail {

inline Triangle2 place_root(const TriangleMesh& mesh, int t) {
    const Vec3 a = mesh.corner(t, 0), b = mesh.corner(t, 1), c = mesh.corner(t, 2);
    const double ab = (b - a).norm();
    const Vec3 dir = ab > 0.0 ? Vec3((b - a) / ab) : Vec3::UnitX();
    const double along = (c - a).dot(dir);
    const double height = ((c - a) - along * dir).norm();
    return {Vec2(0, 0), Vec2(ab, 0), Vec2(along, height)};
}

// Hinge-rotates triangle `t` about its edge shared with the placed parent, so
// that it lies on the far side of the shared segment.
inline Triangle2 place_child(const TriangleMesh& mesh, int t, int parent, const Triangle2& parent_2d) {
    const Triangle& pt = mesh.triangles[parent];
    const Triangle& ct = mesh.triangles[t];
    int shared[2], n = 0, parent_third = -1;
    for (int k = 0; k < 3; ++k) {
        if (std::find(ct.begin(), ct.end(), pt[k]) != ct.end()) {
            if (n < 2) shared[n++] = k;
        } else {
            parent_third = k;
        }
    }
    if (n != 2 || parent_third < 0) throw InternalError("unfold: hinge triangles do not share an edge");
    const int va = pt[shared[0]], vb = pt[shared[1]];
    const Vec2 A = parent_2d[shared[0]], B = parent_2d[shared[1]], P = parent_2d[parent_third];

    int third = -1;
    for (int k = 0; k < 3; ++k)
        if (ct[k] != va && ct[k] != vb) third = k;
    const Vec3 a3 = mesh.vertices[va], b3 = mesh.vertices[vb], c3 = mesh.vertices[ct[third]];
    const double len3 = (b3 - a3).norm();
    const Vec3 dir3 = len3 > 0.0 ? Vec3((b3 - a3) / len3) : Vec3::UnitX();
    const double along = (c3 - a3).dot(dir3);
    const double height = ((c3 - a3) - along * dir3).norm();

    const double len2 = (B - A).norm();
    const Vec2 dir2 = len2 > 0.0 ? Vec2((B - A) / len2) : Vec2::UnitX();
    Vec2 perp(-dir2.y(), dir2.x());
    if (orient2d(A, B, P) > 0.0) perp = -perp;
    const Vec2 C = A + along * dir2 + height * perp;

    Triangle2 out;
    for (int k = 0; k < 3; ++k) out[k] = ct[k] == va ? A : ct[k] == vb ? B : C;
    return out;
}

struct UnfoldAttempt {
    std::vector<Island> islands;
    std::vector<std::pair<int, int>> location;
    std::vector<char> hinge;  // per edge: used as a fold inside an island
};

inline UnfoldAttempt unfold_attempt(const TriangleMesh& mesh, const EdgeTopology& topo, std::uint32_t seed,
                                    double overlap_eps) {
    const int nt = static_cast<int>(mesh.triangles.size());
    const int ne = static_cast<int>(topo.edge_count());

    std::mt19937 rng(seed);
    std::normal_distribution<double> gauss;
    Vec3 c(gauss(rng), gauss(rng), gauss(rng));
    if (!(c.norm() > 1e-12)) c = Vec3::UnitZ();
    c.normalize();
    std::uniform_real_distribution<double> jitter(0.0, 1e-3);

    // Dual spanning tree minimising steepness |edge . c|: cuts run along the
    // steep direction, folds across it.
    std::vector<double> weight(ne);
    for (int e = 0; e < ne; ++e) {
        const auto& ed = topo.edge(e);
        const Vec3 d = mesh.vertices[ed.v1] - mesh.vertices[ed.v0];
        const double len = d.norm();
        weight[e] = (len > 0.0 ? std::abs(d.dot(c)) / len : 0.0) + jitter(rng);
    }
    std::vector<int> order(ne);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return weight[a] < weight[b]; });

    std::vector<int> parent(nt);
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    };
    std::vector<std::vector<std::pair<int, int>>> tree(nt);  // (neighbor, edge)
    for (int e : order) {
        const auto& faces = topo.edge(e).faces;
        if (faces.size() != 2) continue;
        const int ra = find(faces[0]), rb = find(faces[1]);
        if (ra == rb) continue;
        parent[ra] = rb;
        tree[faces[0]].push_back({faces[1], e});
        tree[faces[1]].push_back({faces[0], e});
    }
    for (auto& adj : tree) std::sort(adj.begin(), adj.end());

    UnfoldAttempt out;
    out.location.assign(nt, {-1, -1});
    out.hinge.assign(ne, 0);
    std::vector<std::vector<Box2>> boxes;

    auto overlaps = [&](int island, const Triangle2& tri) {
        const Box2 bb = box_of(tri);
        const auto& list = out.islands[island].triangles;
        for (std::size_t i = 0; i < list.size(); ++i) {
            if (!boxes[island][i].overlaps(bb)) continue;
            if (intersection_area(list[i].corners, tri) > overlap_eps) return true;
        }
        return false;
    };
    auto add = [&](int island, int t, const Triangle2& tri) {
        out.location[t] = {island, static_cast<int>(out.islands[island].triangles.size())};
        out.islands[island].triangles.push_back(PlacedTriangle{t, tri});
        boxes[island].push_back(box_of(tri));
    };
    auto new_island = [&](int t) {
        out.islands.emplace_back();
        boxes.emplace_back();
        add(static_cast<int>(out.islands.size()) - 1, t, place_root(mesh, t));
    };

    // Root: lowest triangle along c, so the net grows "upwards".
    std::vector<char> seen(nt, 0);
    for (int start = 0; start < nt; ++start) {
        if (seen[start]) continue;
        int root = start;
        double best = std::numeric_limits<double>::infinity();
        std::vector<int> comp{start};
        seen[start] = 1;
        for (std::size_t i = 0; i < comp.size(); ++i)
            for (auto [nb, e] : tree[comp[i]])
                if (!seen[nb]) {
                    seen[nb] = 1;
                    comp.push_back(nb);
                }
        for (int t : comp) {
            const double h = (mesh.corner(t, 0) + mesh.corner(t, 1) + mesh.corner(t, 2)).dot(c);
            if (h < best) {
                best = h;
                root = t;
            }
        }
        new_island(root);
        std::queue<int> q;
        q.push(root);
        std::vector<char> placed_flag(nt, 0);
        placed_flag[root] = 1;
        while (!q.empty()) {
            const int p = q.front();
            q.pop();
            const auto [island, slot] = out.location[p];
            const Triangle2 p2 = out.islands[island].triangles[slot].corners;
            for (auto [child, e] : tree[p]) {
                if (placed_flag[child]) continue;
                placed_flag[child] = 1;
                const Triangle2 c2 = place_child(mesh, child, p, p2);
                if (overlaps(island, c2)) {
                    new_island(child);
                } else {
                    add(island, child, c2);
                    out.hinge[e] = 1;
                }
                q.push(child);
            }
        }
    }
    return out;
}

inline FoldDirection fold_direction(const TriangleMesh& mesh, int f0, int f1, int v0, int v1) {
    const Vec3 n0 = mesh.face_normal(f0);
    int far = -1;
    for (int v : mesh.triangles[f1])
        if (v != v0 && v != v1) far = v;
    const double d = n0.dot(mesh.vertices[far] - mesh.vertices[v0]);
    // The far vertex below the plane of f0 means a convex crease: a mountain seen from outside.
    return d <= 0.0 ? FoldDirection::Mountain : FoldDirection::Valley;
}

}  // namespace detail

struct LayoutCheck {
    double max_isometry_error = 0.0;  // relative edge-length error
    std::vector<std::pair<int, int>> overlapping;  // triangle id pairs inside one island
};

// Exhaustive check of a layout against its source mesh.
inline LayoutCheck check_layout(const PlanarLayout& layout, const TriangleMesh& mesh, double overlap_tolerance = 1e-9) {
    LayoutCheck r;
    for (const Island& is : layout.islands)
        for (const PlacedTriangle& p : is.triangles)
            for (int k = 0; k < 3; ++k) {
                const double l3 = (mesh.corner(p.triangle, k) - mesh.corner(p.triangle, (k + 1) % 3)).norm();
                const double l2 = (p.corners[k] - p.corners[(k + 1) % 3]).norm();
                if (l3 > 0.0) r.max_isometry_error = std::max(r.max_isometry_error, std::abs(l2 - l3) / l3);
            }
    const double eps = overlap_tolerance * layout.area();
    for (const Island& is : layout.islands)
        for (std::size_t i = 0; i < is.triangles.size(); ++i)
            for (std::size_t j = i + 1; j < is.triangles.size(); ++j)
                if (intersection_area(is.triangles[i].corners, is.triangles[j].corners) > eps)
                    r.overlapping.push_back({is.triangles[i].triangle, is.triangles[j].triangle});
    return r;
}

// Spanning-tree unfolding with steepest-edge weights and seeded retries; a
// child that would overlap its island starts a new island with its subtree.
// The attempt with the fewest islands wins (lowest seed on ties).
inline PlanarLayout unfold(const TriangleMesh& mesh, const UnfoldOptions& opt = {}) {
    if (mesh.empty() || !validate(mesh).closed) throw InvalidArgument("unfold: paper mesh must be closed");
    if (opt.attempts < 1) throw InvalidArgument("unfold: attempts must be >= 1");
    const EdgeTopology topo(mesh);
    const double eps = opt.overlap_tolerance * mesh.surface_area();

    detail::UnfoldAttempt best;
    std::uint32_t best_seed = opt.seed;
    for (int a = 0; a < opt.attempts; ++a) {
        const std::uint32_t seed = opt.seed + static_cast<std::uint32_t>(a);
        detail::UnfoldAttempt attempt = detail::unfold_attempt(mesh, topo, seed, eps);
        if (a == 0 || attempt.islands.size() < best.islands.size()) {
            best = std::move(attempt);
            best_seed = seed;
        }
        if (best.islands.size() == 1) break;
    }

    PlanarLayout layout;
    layout.islands = std::move(best.islands);
    layout.location = std::move(best.location);
    layout.source_triangles = mesh.triangles.size();
    layout.seed = best_seed;
    layout.edges.resize(topo.edge_count());
    int label = 0;
    for (std::size_t e = 0; e < topo.edge_count(); ++e) {
        const auto& ed = topo.edge(static_cast<int>(e));
        LayoutEdge& le = layout.edges[e];
        le.v0 = ed.v0;
        le.v1 = ed.v1;
        le.faces = {std::min(ed.faces[0], ed.faces[1]), std::max(ed.faces[0], ed.faces[1])};
        for (int s = 0; s < 2; ++s)
            for (int k = 0; k < 3; ++k)
                if (topo.face_edge(le.faces[s], k) == static_cast<int>(e)) le.sides[s] = k;
        le.direction = detail::fold_direction(mesh, le.faces[0], le.faces[1], le.v0, le.v1);
        le.kind = best.hinge[e] ? EdgeKind::Fold : EdgeKind::Cut;
        if (le.kind == EdgeKind::Cut) le.label = ++label;
    }
    build_tabs(layout, layout.scale);

    const LayoutCheck check = check_layout(layout, mesh, opt.overlap_tolerance);
    if (!check.overlapping.empty()) {
        std::ostringstream msg;
        msg << "unfold: overlapping triangles";
        for (auto [i, j] : check.overlapping) msg << " (" << i << "," << j << ")";
        throw UnfoldError(msg.str());
    }
    return layout;
}

inline PlanarLayout unfold(const PaperMesh& paper, const UnfoldOptions& opt = {}) { return unfold(paper.mesh, opt); }

}  // namespace edutainer
