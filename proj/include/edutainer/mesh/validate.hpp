#pragma once

#include "edutainer/mesh/triangle_mesh.hpp"

#include <map>

namespace edutainer {

struct ValidationReport {
    bool closed = false;
    bool manifold = false;
    int degenerate_count = 0;
};

// closed: every edge has exactly two incident triangles with opposite winding.
// manifold: no edge has more than two incident triangles, and shared edges have opposite winding.
inline ValidationReport validate(const TriangleMesh& mesh) {
    std::map<std::pair<int, int>, int> directed;
    for (const Triangle& t : mesh.triangles)
        for (int k = 0; k < 3; ++k) ++directed[{t[k], t[(k + 1) % 3]}];

    ValidationReport report;
    report.closed = !mesh.triangles.empty();
    report.manifold = true;
    for (const auto& [edge, count] : directed) {
        const auto rev = directed.find({edge.second, edge.first});
        const int reverse = rev == directed.end() ? 0 : rev->second;
        if (count != 1 || reverse != 1) report.closed = false;
        if (count > 1 || reverse > 1) report.manifold = false;
    }

    const double diag = bounds_of(mesh).diagonal();
    const double min_area = 1e-12 * diag * diag;
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Triangle& tri = mesh.triangles[t];
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || !(mesh.face_area(t) > min_area))
            ++report.degenerate_count;
    }
    return report;
}

}  // namespace edutainer
