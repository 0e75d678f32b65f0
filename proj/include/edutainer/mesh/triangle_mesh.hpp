#pragma once

#include "edutainer/error.hpp"
#include "edutainer/math.hpp"

#include <array>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <utility>
#include <vector>

namespace edutainer {

using Triangle = std::array<int, 3>;

// Indexed triangle geometry. Counter-clockwise winding faces outward.
struct TriangleMesh {
    std::vector<Vec3> vertices;
    std::vector<Triangle> triangles;
    // Either empty or one unit normal per vertex.
    std::vector<Vec3> vertex_normals;

    std::size_t vertex_count() const noexcept { return vertices.size(); }
    std::size_t triangle_count() const noexcept { return triangles.size(); }
    bool empty() const noexcept { return triangles.empty(); }

    const Vec3& corner(std::size_t tri, int k) const { return vertices[triangles[tri][k]]; }

    Vec3 face_normal(std::size_t tri) const {
        return triangle_normal(corner(tri, 0), corner(tri, 1), corner(tri, 2));
    }

    double face_area(std::size_t tri) const {
        return triangle_area(corner(tri, 0), corner(tri, 1), corner(tri, 2));
    }

    double surface_area() const {
        double sum = 0.0;
        for (std::size_t t = 0; t < triangles.size(); ++t) sum += face_area(t);
        return sum;
    }
};

struct Aabb {
    Vec3 min = Vec3::Constant(std::numeric_limits<double>::infinity());
    Vec3 max = Vec3::Constant(-std::numeric_limits<double>::infinity());

    void expand(const Vec3& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void expand(const Aabb& o) {
        min = min.cwiseMin(o.min);
        max = max.cwiseMax(o.max);
    }
    Vec3 extent() const { return max - min; }
    Vec3 center() const { return 0.5 * (min + max); }
    double diagonal() const { return extent().norm(); }
    bool valid() const { return (max.array() > min.array()).all(); }

    // Squared distance from p to the box (0 inside).
    double squared_distance(const Vec3& p) const {
        const Vec3 d = (min - p).cwiseMax(Vec3::Zero()).cwiseMax(p - max);
        return d.squaredNorm();
    }
};

inline Aabb bounds_of(const TriangleMesh& mesh) {
    Aabb box;
    for (const Triangle& t : mesh.triangles)
        for (int v : t) box.expand(mesh.vertices[v]);
    return box;
}

// Box enclosing every referenced vertex of every structure.
inline Aabb bounding_box(std::span<const TriangleMesh> structures) {
    if (structures.empty()) throw InvalidArgument("bounding_box: no structures");
    Aabb box;
    for (const TriangleMesh& m : structures) box.expand(bounds_of(m));
    return box;
}

// Area-weighted average of incident face normals, normalized.
inline std::vector<Vec3> compute_vertex_normals(const TriangleMesh& mesh) {
    std::vector<Vec3> normals(mesh.vertices.size(), Vec3::Zero());
    for (const Triangle& t : mesh.triangles) {
        const Vec3& a = mesh.vertices[t[0]];
        const Vec3& b = mesh.vertices[t[1]];
        const Vec3& c = mesh.vertices[t[2]];
        const Vec3 weighted = (b - a).cross(c - a);  // |.| = 2 * area
        for (int v : t) normals[v] += weighted;
    }
    for (Vec3& n : normals) {
        const double len = n.norm();
        if (len > 0.0) n /= len;
    }
    return normals;
}

// Undirected edge table. Edge ids are assigned in order of first appearance
// when walking triangles and their corners, so ids are stable for a given mesh.
class EdgeTopology {
public:
    struct Edge {
        int v0 = -1, v1 = -1;             // v0 < v1
        std::vector<int> faces;           // incident triangles
    };

    explicit EdgeTopology(const TriangleMesh& mesh) : face_edges_(mesh.triangles.size()) {
        std::map<std::pair<int, int>, int> lookup;
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            const Triangle& tri = mesh.triangles[t];
            for (int k = 0; k < 3; ++k) {
                int a = tri[k], b = tri[(k + 1) % 3];
                const auto key = std::minmax(a, b);
                auto [it, inserted] = lookup.try_emplace({key.first, key.second}, static_cast<int>(edges_.size()));
                if (inserted) edges_.push_back(Edge{key.first, key.second, {}});
                edges_[it->second].faces.push_back(static_cast<int>(t));
                face_edges_[t][k] = it->second;
            }
        }
    }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(int id) const { return edges_[id]; }
    std::size_t edge_count() const noexcept { return edges_.size(); }

    // Edge id of corner k -> k+1 of triangle t.
    int face_edge(std::size_t t, int k) const { return face_edges_[t][k]; }

    // The triangle across edge k of t, or -1 when the edge is not shared by exactly two faces.
    int neighbor(std::size_t t, int k) const {
        const Edge& e = edges_[face_edges_[t][k]];
        if (e.faces.size() != 2) return -1;
        return e.faces[0] == static_cast<int>(t) ? e.faces[1] : e.faces[0];
    }

private:
    std::vector<Edge> edges_;
    std::vector<std::array<int, 3>> face_edges_;
};

// Vertex -> neighbouring vertices (sorted, unique).
inline std::vector<std::vector<int>> vertex_neighbors(const TriangleMesh& mesh) {
    std::vector<std::vector<int>> adj(mesh.vertices.size());
    for (const Triangle& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) {
            adj[t[k]].push_back(t[(k + 1) % 3]);
            adj[t[k]].push_back(t[(k + 2) % 3]);
        }
    for (auto& list : adj) {
        std::sort(list.begin(), list.end());
        list.erase(std::unique(list.begin(), list.end()), list.end());
    }
    return adj;
}

}  // namespace edutainer
