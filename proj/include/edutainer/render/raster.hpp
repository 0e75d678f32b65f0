#pragma once

#include "edutainer/mesh/triangle_mesh.hpp"
#include "edutainer/render/camera.hpp"

#include <thread>

namespace edutainer {

using Barycentric = std::array<double, 3>;

struct RowRange {
    int begin = 0;
    int end = std::numeric_limits<int>::max();
};

namespace detail {

struct ClipVertex {
    Vec3 eye;
    Barycentric bary;
};

inline void clip_polygon(std::vector<ClipVertex>& poly, double plane_z, bool keep_greater) {
    std::vector<ClipVertex> out;
    const std::size_t n = poly.size();
    for (std::size_t i = 0; i < n; ++i) {
        const ClipVertex& a = poly[i];
        const ClipVertex& b = poly[(i + 1) % n];
        const bool a_in = keep_greater ? a.eye.z() >= plane_z : a.eye.z() <= plane_z;
        const bool b_in = keep_greater ? b.eye.z() >= plane_z : b.eye.z() <= plane_z;
        if (a_in) out.push_back(a);
        if (a_in != b_in) {
            const double t = (plane_z - a.eye.z()) / (b.eye.z() - a.eye.z());
            ClipVertex v;
            v.eye = a.eye + t * (b.eye - a.eye);
            v.eye.z() = plane_z;
            for (int k = 0; k < 3; ++k) v.bary[k] = a.bary[k] + t * (b.bary[k] - a.bary[k]);
            out.push_back(v);
        }
    }
    poly = std::move(out);
}

// Exactly one of an edge and its reverse owns pixels lying on it.
inline bool owns_edge(const Vec2& a, const Vec2& b) {
    const Vec2 d = b - a;
    return d.y() > 0.0 || (d.y() == 0.0 && d.x() < 0.0);
}

template <class Fn>
void raster_screen_triangle(const CameraFrame& frame, const std::array<ClipVertex, 3>& v, RowRange rows, Fn& emit) {
    const Camera& cam = frame.camera();
    std::array<Vec2, 3> s{frame.to_pixel(v[0].eye), frame.to_pixel(v[1].eye), frame.to_pixel(v[2].eye)};
    std::array<int, 3> order{0, 1, 2};
    double area = orient2d(s[0], s[1], s[2]);
    if (!(std::abs(area) > 0.0) || !std::isfinite(area)) return;
    if (area < 0.0) {
        std::swap(order[1], order[2]);
        area = -area;
    }
    const Vec2 p0 = s[order[0]], p1 = s[order[1]], p2 = s[order[2]];

    const double min_x = std::min({p0.x(), p1.x(), p2.x()}), max_x = std::max({p0.x(), p1.x(), p2.x()});
    const double min_y = std::min({p0.y(), p1.y(), p2.y()}), max_y = std::max({p0.y(), p1.y(), p2.y()});
    const int x0 = std::max(0, static_cast<int>(std::ceil(min_x - 0.5)));
    const int x1 = std::min(cam.width - 1, static_cast<int>(std::floor(max_x - 0.5)));
    const int y0 = std::max({0, rows.begin, static_cast<int>(std::ceil(min_y - 0.5))});
    const int y1 = std::min({cam.height - 1, rows.end - 1, static_cast<int>(std::floor(max_y - 0.5))});
    if (x0 > x1 || y0 > y1) return;

    const bool own12 = owns_edge(p1, p2), own20 = owns_edge(p2, p0), own01 = owns_edge(p0, p1);
    const bool persp = frame.perspective();
    const double iz[3] = {1.0 / v[order[0]].eye.z(), 1.0 / v[order[1]].eye.z(), 1.0 / v[order[2]].eye.z()};
    const double z[3] = {v[order[0]].eye.z(), v[order[1]].eye.z(), v[order[2]].eye.z()};

    for (int y = y0; y <= y1; ++y) {
        const double py = y + 0.5;
        for (int x = x0; x <= x1; ++x) {
            const Vec2 p(x + 0.5, py);
            const double w0 = orient2d(p1, p2, p);
            const double w1 = orient2d(p2, p0, p);
            const double w2 = orient2d(p0, p1, p);
            if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
            if ((w0 == 0.0 && !own12) || (w1 == 0.0 && !own20) || (w2 == 0.0 && !own01)) continue;
            double l[3] = {w0 / area, w1 / area, w2 / area};
            double depth;
            if (persp) {
                const double inv = l[0] * iz[0] + l[1] * iz[1] + l[2] * iz[2];
                depth = 1.0 / inv;
                for (int k = 0; k < 3; ++k) l[k] = l[k] * iz[k] * depth;
            } else {
                depth = l[0] * z[0] + l[1] * z[1] + l[2] * z[2];
            }
            Barycentric b{0.0, 0.0, 0.0};
            for (int k = 0; k < 3; ++k) {
                const Barycentric& vb = v[order[k]].bary;
                b[0] += l[k] * vb[0];
                b[1] += l[k] * vb[1];
                b[2] += l[k] * vb[2];
            }
            emit(x, y, depth, b);
        }
    }
}

}  // namespace detail

// Scan-converts one world-space triangle: pixel-centre sampling, top-left style
// ownership of shared edges, clipping against near/far. `emit(x, y, depth, bary)`
// receives the eye-space depth and perspective-correct barycentrics relative to
// the original corners.
template <class Fn>
void rasterize_triangle(const CameraFrame& frame, const Vec3& a, const Vec3& b, const Vec3& c, Fn&& emit,
                        RowRange rows = {}) {
    const Camera& cam = frame.camera();
    std::array<detail::ClipVertex, 3> tri{detail::ClipVertex{frame.to_eye(a), {1, 0, 0}},
                                          detail::ClipVertex{frame.to_eye(b), {0, 1, 0}},
                                          detail::ClipVertex{frame.to_eye(c), {0, 0, 1}}};
    const double zmin = std::min({tri[0].eye.z(), tri[1].eye.z(), tri[2].eye.z()});
    const double zmax = std::max({tri[0].eye.z(), tri[1].eye.z(), tri[2].eye.z()});
    if (zmax < cam.near || zmin > cam.far) return;
    if (zmin >= cam.near && zmax <= cam.far) {
        detail::raster_screen_triangle(frame, tri, rows, emit);
        return;
    }
    std::vector<detail::ClipVertex> poly(tri.begin(), tri.end());
    detail::clip_polygon(poly, cam.near, true);
    if (poly.size() >= 3) detail::clip_polygon(poly, cam.far, false);
    for (std::size_t k = 1; k + 1 < poly.size(); ++k)
        detail::raster_screen_triangle(frame, {poly[0], poly[k], poly[k + 1]}, rows, emit);
}

// True when the counter-clockwise side of (a, b, c) faces the viewer.
inline bool front_facing(const CameraFrame& frame, const Vec3& a, const Vec3& b, const Vec3& c) {
    const Vec3 n = (b - a).cross(c - a);
    const Vec3 towards_viewer = frame.perspective() ? Vec3(frame.camera().position - a) : Vec3(-frame.forward());
    return n.dot(towards_viewer) > 0.0;
}

// Splits [0, height) into `threads` bands and runs fn(RowRange) on each. Each
// band owns its rows exclusively.
template <class Fn>
void for_each_band(int height, int threads, Fn&& fn) {
    threads = std::max(1, std::min(threads, height));
    if (threads == 1) {
        fn(RowRange{0, height});
        return;
    }
    std::vector<std::thread> pool;
    for (int i = 0; i < threads; ++i) {
        const RowRange rows{height * i / threads, height * (i + 1) / threads};
        pool.emplace_back([&fn, rows] { fn(rows); });
    }
    for (std::thread& t : pool) t.join();
}

// Nearest surface per pixel for one mesh.
struct SurfaceSample {
    double depth = std::numeric_limits<double>::infinity();
    int triangle = -1;
    Barycentric bary{0, 0, 0};
};

struct SampleBuffer {
    int width = 0, height = 0;
    std::vector<SurfaceSample> samples;
    const SurfaceSample& at(int x, int y) const { return samples[static_cast<std::size_t>(y) * width + x]; }
};

// Z-buffered visibility of `mesh`. On equal depth the lower triangle index wins.
inline SampleBuffer rasterize_nearest(const TriangleMesh& mesh, const Camera& cam, int threads = 1,
                                      bool cull_back_faces = false) {
    const CameraFrame frame(cam);
    SampleBuffer buf{cam.width, cam.height, std::vector<SurfaceSample>(static_cast<std::size_t>(cam.width) * cam.height)};
    for_each_band(cam.height, threads, [&](RowRange rows) {
        for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
            if (cull_back_faces && !front_facing(frame, mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2)))
                continue;
            rasterize_triangle(
                frame, mesh.corner(t, 0), mesh.corner(t, 1), mesh.corner(t, 2),
                [&](int x, int y, double depth, const Barycentric& b) {
                    SurfaceSample& s = buf.samples[static_cast<std::size_t>(y) * cam.width + x];
                    if (depth < s.depth) s = SurfaceSample{depth, static_cast<int>(t), b};
                },
                rows);
        }
    });
    return buf;
}

}  // namespace edutainer
