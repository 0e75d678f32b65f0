#pragma once

#include "edutainer/mesh/primitives.hpp"
#include "edutainer/mesh/surface_index.hpp"
#include "edutainer/mesh/validate.hpp"

#include <optional>

namespace edutainer {

using UvTriangle = std::array<Vec2, 3>;

// The coarse enclosing mesh that becomes the papercraft.
struct PaperMesh {
    TriangleMesh mesh;
    int subdivision_level = 0;
    // One UV per triangle corner (so cut-edge vertices carry one UV per island); empty until assigned.
    std::vector<UvTriangle> uv;

    bool has_uv() const noexcept { return !uv.empty() && uv.size() == mesh.triangle_count(); }
};

// Topology-identical copy of a paper mesh projected onto one structure.
struct WrappedPaperMesh {
    TriangleMesh mesh;
    int structure_index = 0;
};

struct WrapOptions {
    int smoothing_iters = 0;
    // Distance to push projected vertices outward along the hit face normal.
    double offset = 0.0;
};

namespace detail {

inline void project_vertices(TriangleMesh& mesh, const SurfaceIndex& index, std::span<const TriangleMesh> structures,
                             double offset) {
    for (Vec3& v : mesh.vertices) {
        const SurfaceHit hit = index.closest(v);
        v = hit.point;
        if (offset != 0.0) v += offset * structures[hit.structure_index].face_normal(hit.triangle_index);
    }
}

// Alternates uniform Laplacian smoothing and re-projection.
inline void shrink_wrap(TriangleMesh& mesh, std::span<const TriangleMesh> structures, const WrapOptions& opt) {
    const SurfaceIndex index(structures);
    project_vertices(mesh, index, structures, opt.offset);
    if (opt.smoothing_iters <= 0) return;
    const auto adj = vertex_neighbors(mesh);
    for (int it = 0; it < opt.smoothing_iters; ++it) {
        std::vector<Vec3> next(mesh.vertices.size());
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            Vec3 sum = Vec3::Zero();
            for (int w : adj[v]) sum += mesh.vertices[w];
            next[v] = adj[v].empty() ? mesh.vertices[v] : Vec3(sum / static_cast<double>(adj[v].size()));
        }
        mesh.vertices = std::move(next);
        project_vertices(mesh, index, structures, opt.offset);
    }
}

}  // namespace detail

// Subdivided bounding box of all structures, shrink-wrapped onto the closest
// surface point among all of them.
inline PaperMesh generate_paper_mesh(std::span<const TriangleMesh> structures, int subdivision_level,
                                     const WrapOptions& opt = {}) {
    if (structures.empty()) throw InvalidArgument("generate_paper_mesh: no structures");
    if (subdivision_level < 0) throw InvalidArgument("generate_paper_mesh: subdivision level must be >= 0");
    PaperMesh paper;
    paper.subdivision_level = subdivision_level;
    paper.mesh = subdivide(box_mesh(bounding_box(structures)), subdivision_level);
    detail::shrink_wrap(paper.mesh, structures, opt);
    return paper;
}

// Same topology as `paper`, projected onto `structure` alone.
inline WrappedPaperMesh wrap_per_structure(const PaperMesh& paper, const TriangleMesh& structure, int structure_index = 0,
                                           const WrapOptions& opt = {}) {
    if (structure.empty()) throw InvalidArgument("wrap_per_structure: structure is empty");
    WrappedPaperMesh out;
    out.mesh = paper.mesh;
    out.mesh.vertex_normals.clear();
    out.structure_index = structure_index;
    detail::shrink_wrap(out.mesh, std::span<const TriangleMesh>(&structure, 1), opt);
    return out;
}

}  // namespace edutainer
