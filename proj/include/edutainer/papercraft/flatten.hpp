#pragma once

#include "edutainer/papercraft/paper_mesh.hpp"

#include <set>

namespace edutainer {

struct FlattenSelection {
    std::vector<int> triangle_ids;
};

struct FlattenReport {
    Vec3 origin = Vec3::Zero();
    Vec3 normal = Vec3::Zero();
    std::vector<int> moved_vertices;
    bool connected = true;  // selected triangles form one edge-connected patch
};

inline void check_selection(const TriangleMesh& mesh, const FlattenSelection& sel) {
    if (sel.triangle_ids.empty()) throw InvalidArgument("flatten_selection: selection is empty");
    for (int t : sel.triangle_ids)
        if (t < 0 || static_cast<std::size_t>(t) >= mesh.triangles.size())
            throw InvalidArgument("flatten_selection: triangle id " + std::to_string(t) + " out of range");
}

inline bool selection_connected(const TriangleMesh& mesh, const FlattenSelection& sel) {
    const std::set<int> chosen(sel.triangle_ids.begin(), sel.triangle_ids.end());
    const EdgeTopology topo(mesh);
    std::set<int> reached{*chosen.begin()};
    std::vector<int> stack{*chosen.begin()};
    while (!stack.empty()) {
        const int t = stack.back();
        stack.pop_back();
        for (int k = 0; k < 3; ++k)
            for (int nb : topo.edge(topo.face_edge(t, k)).faces)
                if (chosen.count(nb) && reached.insert(nb).second) stack.push_back(nb);
    }
    return reached.size() == chosen.size();
}

// Projects the distinct vertices of the selected triangles onto the plane
// through their centroid whose normal is the sum of their area-weighted
// vertex normals. Everything else is untouched.
inline TriangleMesh flatten_selection(const TriangleMesh& mesh, const FlattenSelection& sel,
                                      FlattenReport* report = nullptr) {
    check_selection(mesh, sel);
    std::set<int> verts;
    for (int t : sel.triangle_ids)
        for (int v : mesh.triangles[t]) verts.insert(v);

    // Vertex normals are taken over the selected faces only, so an already
    // planar patch keeps its own plane.
    TriangleMesh patch;
    patch.vertices = mesh.vertices;
    for (int t : std::set<int>(sel.triangle_ids.begin(), sel.triangle_ids.end())) patch.triangles.push_back(mesh.triangles[t]);
    const std::vector<Vec3> normals = compute_vertex_normals(patch);
    Vec3 origin = Vec3::Zero(), sum = Vec3::Zero();
    for (int v : verts) {
        origin += mesh.vertices[v];
        sum += normals[v];
    }
    origin /= static_cast<double>(verts.size());
    if (!(sum.norm() > 1e-9))
        throw DegenerateSelection("flatten_selection: selected vertex normals cancel out");
    const Vec3 n = sum.normalized();

    TriangleMesh out = mesh;
    for (int v : verts) out.vertices[v] -= n * (out.vertices[v] - origin).dot(n);
    if (!out.vertex_normals.empty()) out.vertex_normals = compute_vertex_normals(out);
    if (report) {
        report->origin = origin;
        report->normal = n;
        report->moved_vertices.assign(verts.begin(), verts.end());
        report->connected = selection_connected(mesh, sel);
    }
    return out;
}

inline PaperMesh flatten_selection(const PaperMesh& paper, const FlattenSelection& sel,
                                   FlattenReport* report = nullptr) {
    PaperMesh out = paper;
    out.mesh = flatten_selection(paper.mesh, sel, report);
    return out;
}

}  // namespace edutainer
