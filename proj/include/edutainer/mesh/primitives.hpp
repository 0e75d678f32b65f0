#pragma once

#include "edutainer/mesh/triangle_mesh.hpp"

#include <map>
#include <numbers>

namespace edutainer {

// Closed 12-triangle box with outward counter-clockwise winding.
inline TriangleMesh box_mesh(const Aabb& box) {
    if (!box.valid()) throw InvalidArgument("box_mesh: bounding box has zero extent on some axis");
    TriangleMesh m;
    for (int i = 0; i < 8; ++i)
        m.vertices.emplace_back(i & 1 ? box.max.x() : box.min.x(), i & 2 ? box.max.y() : box.min.y(),
                                i & 4 ? box.max.z() : box.min.z());
    m.triangles = {
        {0, 2, 3}, {0, 3, 1},  // -z
        {4, 5, 7}, {4, 7, 6},  // +z
        {0, 1, 5}, {0, 5, 4},  // -y
        {2, 6, 7}, {2, 7, 3},  // +y
        {0, 4, 6}, {0, 6, 2},  // -x
        {1, 3, 7}, {1, 7, 5},  // +x
    };
    return m;
}

// Midpoint 1:4 split repeated `levels` times. Shared edges share their midpoint vertex.
inline TriangleMesh subdivide(const TriangleMesh& mesh, int levels) {
    if (levels < 0) throw InvalidArgument("subdivide: levels must be >= 0");
    TriangleMesh cur = mesh;
    cur.vertex_normals.clear();
    for (int l = 0; l < levels; ++l) {
        TriangleMesh next;
        next.vertices = cur.vertices;
        std::map<std::pair<int, int>, int> mids;
        auto midpoint = [&](int a, int b) {
            auto key = std::minmax(a, b);
            auto [it, inserted] = mids.try_emplace({key.first, key.second}, static_cast<int>(next.vertices.size()));
            if (inserted) next.vertices.push_back(0.5 * (cur.vertices[a] + cur.vertices[b]));
            return it->second;
        };
        next.triangles.reserve(cur.triangles.size() * 4);
        for (const Triangle& t : cur.triangles) {
            const int ab = midpoint(t[0], t[1]);
            const int bc = midpoint(t[1], t[2]);
            const int ca = midpoint(t[2], t[0]);
            next.triangles.push_back({t[0], ab, ca});
            next.triangles.push_back({ab, t[1], bc});
            next.triangles.push_back({ca, bc, t[2]});
            next.triangles.push_back({ab, bc, ca});
        }
        cur = std::move(next);
    }
    return cur;
}

inline TriangleMesh tetrahedron(double edge = 1.0) {
    TriangleMesh m;
    const double s = edge / (2.0 * std::numbers::sqrt2);
    m.vertices = {Vec3(s, s, s), Vec3(s, -s, -s), Vec3(-s, s, -s), Vec3(-s, -s, s)};
    m.triangles = {{0, 1, 2}, {0, 3, 1}, {0, 2, 3}, {1, 3, 2}};
    return m;
}

inline TriangleMesh icosahedron() {
    const double p = (1.0 + std::sqrt(5.0)) / 2.0;
    TriangleMesh m;
    m.vertices = {Vec3(-1, p, 0), Vec3(1, p, 0), Vec3(-1, -p, 0), Vec3(1, -p, 0),
                  Vec3(0, -1, p), Vec3(0, 1, p), Vec3(0, -1, -p), Vec3(0, 1, -p),
                  Vec3(p, 0, -1), Vec3(p, 0, 1), Vec3(-p, 0, -1), Vec3(-p, 0, 1)};
    for (Vec3& v : m.vertices) v.normalize();
    m.triangles = {{0, 11, 5}, {0, 5, 1},  {0, 1, 7},   {0, 7, 10}, {0, 10, 11}, {1, 5, 9}, {5, 11, 4},
                   {11, 10, 2}, {10, 7, 6}, {7, 1, 8},  {3, 9, 4},  {3, 4, 2},   {3, 2, 6}, {3, 6, 8},
                   {3, 8, 9},  {4, 9, 5},  {2, 4, 11}, {6, 2, 10}, {8, 6, 7},   {9, 8, 1}};
    return m;
}

// Subdivided icosahedron on a sphere: 20 * 4^levels triangles.
inline TriangleMesh icosphere(int levels, double radius = 1.0, const Vec3& center = Vec3::Zero()) {
    TriangleMesh m = subdivide(icosahedron(), levels);
    for (Vec3& v : m.vertices) v = center + radius * v.normalized();
    m.vertex_normals = compute_vertex_normals(m);
    return m;
}

// Affinely stretched icosphere.
inline TriangleMesh ellipsoid(int levels, const Vec3& radii, const Vec3& center = Vec3::Zero()) {
    TriangleMesh m = subdivide(icosahedron(), levels);
    for (Vec3& v : m.vertices) v = center + v.normalized().cwiseProduct(radii);
    m.vertex_normals = compute_vertex_normals(m);
    return m;
}

// Torus around the z axis.
inline TriangleMesh torus(double major, double minor, int rings, int sides, const Vec3& center = Vec3::Zero()) {
    TriangleMesh m;
    const double two_pi = 2.0 * std::numbers::pi;
    for (int i = 0; i < rings; ++i) {
        const double u = two_pi * i / rings;
        for (int j = 0; j < sides; ++j) {
            const double v = two_pi * j / sides;
            const double r = major + minor * std::cos(v);
            m.vertices.push_back(center + Vec3(r * std::cos(u), r * std::sin(u), minor * std::sin(v)));
        }
    }
    auto id = [&](int i, int j) { return ((i % rings) * sides) + (j % sides); };
    for (int i = 0; i < rings; ++i)
        for (int j = 0; j < sides; ++j) {
            m.triangles.push_back({id(i, j), id(i + 1, j), id(i + 1, j + 1)});
            m.triangles.push_back({id(i, j), id(i + 1, j + 1), id(i, j + 1)});
        }
    m.vertex_normals = compute_vertex_normals(m);
    return m;
}

// Closed capsule (cylinder with hemispherical caps) between points a and b.
inline TriangleMesh capsule(const Vec3& a, const Vec3& b, double radius, int segments = 16, int cap_rings = 6) {
    const Vec3 axis = (b - a).normalized();
    const Vec3 helper = std::abs(axis.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 u = axis.cross(helper).normalized();
    const Vec3 w = axis.cross(u);
    const double half_pi = std::numbers::pi / 2.0;

    TriangleMesh m;
    // Rings from the pole at a to the pole at b.
    std::vector<std::pair<Vec3, double>> rings;  // center, radius
    for (int r = 1; r <= cap_rings; ++r) {
        const double phi = half_pi * (1.0 - static_cast<double>(r) / cap_rings);
        rings.emplace_back(a - axis * radius * std::sin(phi), radius * std::cos(phi));
    }
    for (int r = 0; r < cap_rings; ++r) {
        const double phi = half_pi * static_cast<double>(r) / cap_rings;
        rings.emplace_back(b + axis * radius * std::sin(phi), radius * std::cos(phi));
    }
    m.vertices.push_back(a - axis * radius);
    for (const auto& [c, rad] : rings)
        for (int s = 0; s < segments; ++s) {
            const double t = 2.0 * std::numbers::pi * s / segments;
            m.vertices.push_back(c + rad * (std::cos(t) * u + std::sin(t) * w));
        }
    m.vertices.push_back(b + axis * radius);
    const int south = 0;
    const int north = static_cast<int>(m.vertices.size()) - 1;
    auto ring_v = [&](int r, int s) { return 1 + r * segments + (s % segments); };
    const int nr = static_cast<int>(rings.size());
    for (int s = 0; s < segments; ++s) m.triangles.push_back({south, ring_v(0, s + 1), ring_v(0, s)});
    for (int r = 0; r + 1 < nr; ++r)
        for (int s = 0; s < segments; ++s) {
            m.triangles.push_back({ring_v(r, s), ring_v(r, s + 1), ring_v(r + 1, s + 1)});
            m.triangles.push_back({ring_v(r, s), ring_v(r + 1, s + 1), ring_v(r + 1, s)});
        }
    for (int s = 0; s < segments; ++s) m.triangles.push_back({north, ring_v(nr - 1, s), ring_v(nr - 1, s + 1)});
    m.vertex_normals = compute_vertex_normals(m);
    return m;
}

}  // namespace edutainer
