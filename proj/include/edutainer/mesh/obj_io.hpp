#pragma once

#include "edutainer/mesh/triangle_mesh.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <sstream>
#include <string>
#include <string_view>

namespace edutainer {

struct ObjLoadStats {
    std::size_t dropped_degenerate = 0;
    std::size_t fan_triangulated = 0;  // polygons with more than three corners
};

namespace detail {

inline std::string_view next_token(std::string_view& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos) {
        s = {};
        return {};
    }
    std::size_t e = s.find_first_of(" \t\r", b);
    std::string_view tok = s.substr(b, e == std::string_view::npos ? std::string_view::npos : e - b);
    s = e == std::string_view::npos ? std::string_view{} : s.substr(e);
    return tok;
}

inline bool parse_double(std::string_view tok, double& out) {
    if (tok.empty()) return false;
    if (tok.front() == '+') tok.remove_prefix(1);
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

inline bool parse_int(std::string_view tok, long& out) {
    if (tok.empty()) return false;
    auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && ptr == tok.data() + tok.size();
}

// Resolves a 1-based (or negative, relative) OBJ index against `count` items.
inline int resolve_index(long raw, std::size_t count, std::size_t line, const char* what) {
    long idx = raw > 0 ? raw - 1 : static_cast<long>(count) + raw;
    if (raw == 0 || idx < 0 || idx >= static_cast<long>(count))
        throw ParseError(line, std::string(what) + " index " + std::to_string(raw) + " out of range (have " +
                                   std::to_string(count) + ")");
    return static_cast<int>(idx);
}

}  // namespace detail

// Reads the v/vn/f subset of Wavefront OBJ. Polygons are fan-triangulated,
// degenerate triangles are dropped and counted in `stats`.
inline TriangleMesh load_obj(std::istream& in, ObjLoadStats* stats = nullptr) {
    TriangleMesh mesh;
    std::vector<Vec3> normals;
    std::vector<int> normal_of_vertex;
    bool any_normal_ref = false;
    ObjLoadStats local;

    std::string line;
    std::size_t line_no = 0;
    std::vector<std::pair<int, int>> corners;
    while (std::getline(in, line)) {
        ++line_no;
        std::string_view rest(line);
        const std::string_view key = detail::next_token(rest);
        if (key.empty() || key.front() == '#') continue;

        if (key == "v" || key == "vn") {
            Vec3 p;
            for (int k = 0; k < 3; ++k) {
                if (!detail::parse_double(detail::next_token(rest), p[k]))
                    throw ParseError(line_no, "malformed '" + std::string(key) + "' record");
            }
            if (!p.allFinite()) throw ParseError(line_no, "non-finite coordinate");
            if (key == "v") {
                mesh.vertices.push_back(p);
                normal_of_vertex.push_back(-1);
            } else {
                normals.push_back(p);
            }
        } else if (key == "f") {
            corners.clear();
            for (std::string_view tok = detail::next_token(rest); !tok.empty(); tok = detail::next_token(rest)) {
                const std::size_t s1 = tok.find('/');
                long vi = 0;
                if (!detail::parse_int(tok.substr(0, s1), vi)) throw ParseError(line_no, "malformed face corner");
                int v = detail::resolve_index(vi, mesh.vertices.size(), line_no, "vertex");
                int n = -1;
                if (s1 != std::string_view::npos) {
                    const std::size_t s2 = tok.find('/', s1 + 1);
                    if (s2 != std::string_view::npos && s2 + 1 < tok.size()) {
                        long ni = 0;
                        if (!detail::parse_int(tok.substr(s2 + 1), ni)) throw ParseError(line_no, "malformed normal index");
                        n = detail::resolve_index(ni, normals.size(), line_no, "normal");
                    }
                }
                corners.emplace_back(v, n);
            }
            if (corners.size() < 3) throw ParseError(line_no, "face with fewer than 3 corners");
            if (corners.size() > 3) ++local.fan_triangulated;
            for (auto [v, n] : corners) {
                if (n >= 0) {
                    normal_of_vertex[v] = n;
                    any_normal_ref = true;
                }
            }
            for (std::size_t k = 1; k + 1 < corners.size(); ++k)
                mesh.triangles.push_back({corners[0].first, corners[k].first, corners[k + 1].first});
        }
        // Other records (vt, g, o, s, usemtl, mtllib, ...) carry nothing we use.
    }

    if (mesh.triangles.empty()) throw EmptyMeshError("OBJ contains no triangles");

    const double diag = bounds_of(mesh).diagonal();
    const double min_area = 1e-12 * diag * diag;
    std::vector<Triangle> kept;
    kept.reserve(mesh.triangles.size());
    for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
        const Triangle& tri = mesh.triangles[t];
        if (tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] || mesh.face_area(t) <= min_area)
            ++local.dropped_degenerate;
        else
            kept.push_back(tri);
    }
    mesh.triangles = std::move(kept);
    if (mesh.triangles.empty()) throw EmptyMeshError("OBJ contains only degenerate triangles");

    if (any_normal_ref) {
        mesh.vertex_normals = compute_vertex_normals(mesh);
        for (std::size_t v = 0; v < mesh.vertices.size(); ++v) {
            if (normal_of_vertex[v] < 0) continue;
            const Vec3& n = normals[normal_of_vertex[v]];
            if (n.norm() > 0.0) mesh.vertex_normals[v] = n.normalized();
        }
    }
    if (stats) *stats = local;
    return mesh;
}

inline TriangleMesh load_obj_file(const std::string& path, ObjLoadStats* stats = nullptr) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open mesh file '" + path + "'");
    return load_obj(in, stats);
}

inline TriangleMesh load_obj_string(const std::string& text, ObjLoadStats* stats = nullptr) {
    std::istringstream in(text);
    return load_obj(in, stats);
}

// Writes positions (and normals, when present) with 6 significant digits.
inline void save_obj(std::ostream& out, const TriangleMesh& mesh) {
    char buf[128];
    for (const Vec3& p : mesh.vertices) {
        std::snprintf(buf, sizeof buf, "v %.6g %.6g %.6g\n", p.x(), p.y(), p.z());
        out << buf;
    }
    const bool with_normals = mesh.vertex_normals.size() == mesh.vertices.size() && !mesh.vertices.empty();
    if (with_normals) {
        for (const Vec3& n : mesh.vertex_normals) {
            std::snprintf(buf, sizeof buf, "vn %.6g %.6g %.6g\n", n.x(), n.y(), n.z());
            out << buf;
        }
    }
    for (const Triangle& t : mesh.triangles) {
        if (with_normals)
            std::snprintf(buf, sizeof buf, "f %d//%d %d//%d %d//%d\n", t[0] + 1, t[0] + 1, t[1] + 1, t[1] + 1,
                          t[2] + 1, t[2] + 1);
        else
            std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out << buf;
    }
}

inline std::string save_obj_string(const TriangleMesh& mesh) {
    std::ostringstream out;
    save_obj(out, mesh);
    return out.str();
}

inline void save_obj_file(const std::string& path, const TriangleMesh& mesh) {
    std::ofstream out(path);
    if (!out) throw InvalidArgument("cannot write mesh file '" + path + "'");
    save_obj(out, mesh);
}

}  // namespace edutainer
