#pragma once

#include "edutainer/papercraft/paper_mesh.hpp"
#include "edutainer/papercraft/planar.hpp"
#include "edutainer/render/renderer.hpp"

#include <numeric>
#include <thread>

namespace edutainer {

struct TextureAtlas {
    CompositeImage image;
    int resolution = 0;
    std::vector<UvTriangle> mapping;  // paper-mesh triangle -> UV triangle
    std::vector<int> owner;           // texel -> triangle id, -1 outside every UV triangle
};

struct ProjectionOptions {
    Lighting lighting;
    int threads = 1;
    double margin = 0.05;      // frustum margin around the triangle
    double supersample = 2.0;  // frame pixels per atlas texel
};

// Texel-space corners: x = u * R, y = (1 - v) * R.
inline Triangle2 uv_to_texel_space(const UvTriangle& uv, int resolution) {
    Triangle2 t;
    for (int k = 0; k < 3; ++k) t[k] = Vec2(uv[k].x() * resolution, (1.0 - uv[k].y()) * resolution);
    return t;
}

// Texels whose centres fall inside the triangle, with the same edge-ownership
// rule as the rasterizer so neighbouring UV triangles never share a texel.
template <class Fn>
void for_each_texel(const Triangle2& tri, int width, int height, Fn&& fn) {
    std::array<int, 3> order{0, 1, 2};
    double area = orient2d(tri[0], tri[1], tri[2]);
    if (!(std::abs(area) > 0.0) || !std::isfinite(area)) return;
    if (area < 0.0) {
        std::swap(order[1], order[2]);
        area = -area;
    }
    const Vec2 p0 = tri[order[0]], p1 = tri[order[1]], p2 = tri[order[2]];
    const int x0 = std::max(0, static_cast<int>(std::ceil(std::min({p0.x(), p1.x(), p2.x()}) - 0.5)));
    const int x1 = std::min(width - 1, static_cast<int>(std::floor(std::max({p0.x(), p1.x(), p2.x()}) - 0.5)));
    const int y0 = std::max(0, static_cast<int>(std::ceil(std::min({p0.y(), p1.y(), p2.y()}) - 0.5)));
    const int y1 = std::min(height - 1, static_cast<int>(std::floor(std::max({p0.y(), p1.y(), p2.y()}) - 0.5)));
    const bool own12 = detail::owns_edge(p1, p2), own20 = detail::owns_edge(p2, p0), own01 = detail::owns_edge(p0, p1);
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) {
            const Vec2 p(x + 0.5, y + 0.5);
            const double w0 = orient2d(p1, p2, p), w1 = orient2d(p2, p0, p), w2 = orient2d(p0, p1, p);
            if (w0 < 0.0 || w1 < 0.0 || w2 < 0.0) continue;
            if ((w0 == 0.0 && !own12) || (w1 == 0.0 && !own20) || (w2 == 0.0 && !own01)) continue;
            Barycentric b{0, 0, 0};
            b[order[0]] = w0 / area;
            b[order[1]] = w1 / area;
            b[order[2]] = w2 / area;
            fn(x, y, b);
        }
}

// Texel ownership of a UV mapping.
inline std::vector<int> uv_owner_map(const std::vector<UvTriangle>& mapping, int resolution) {
    std::vector<int> owner(static_cast<std::size_t>(resolution) * resolution, -1);
    for (std::size_t t = 0; t < mapping.size(); ++t)
        for_each_texel(uv_to_texel_space(mapping[t], resolution), resolution, resolution,
                       [&](int x, int y, const Barycentric&) {
                           owner[static_cast<std::size_t>(y) * resolution + x] = static_cast<int>(t);
                       });
    return owner;
}

// Orthographic camera looking at the triangle (a, b, c) against its normal,
// framing it with `margin`, placed outside `scene_bounds`.
inline std::optional<Camera> triangle_camera(const Vec3& a, const Vec3& b, const Vec3& c, const Aabb& scene_bounds,
                                             double texels_per_unit, const ProjectionOptions& opt) {
    const Vec3 raw = (b - a).cross(c - a);
    const double scale = std::max({(b - a).norm(), (c - b).norm(), (a - c).norm()});
    if (!(raw.norm() > 1e-12 * scale * scale) || !(scale > 0.0)) return std::nullopt;
    const Vec3 n = raw.normalized();
    const Vec3 centroid = (a + b + c) / 3.0;
    const Vec3 forward = -n;
    Vec3 up_hint = std::abs(n.x()) < 0.9 ? Vec3::UnitX() : Vec3::UnitY();
    const Vec3 right = forward.cross(up_hint).normalized();
    const Vec3 up = right.cross(forward);

    double ex = 0.0, ey = 0.0;
    for (const Vec3* p : {&a, &b, &c}) {
        ex = std::max(ex, std::abs((*p - centroid).dot(right)));
        ey = std::max(ey, std::abs((*p - centroid).dot(up)));
    }
    ex = std::max(ex * (1.0 + opt.margin), 1e-9 * scale);
    ey = std::max(ey * (1.0 + opt.margin), 1e-9 * scale);

    const bool bounded = std::isfinite(scene_bounds.min.x()) && std::isfinite(scene_bounds.max.x());
    const double diag = bounded ? scene_bounds.diagonal() : scale;
    const double reach = (bounded ? std::sqrt(scene_bounds.squared_distance(centroid)) : 0.0) + diag + scale;
    Camera cam;
    cam.projection = Projection::Orthographic;
    cam.look_at = centroid;
    cam.position = centroid + n * reach;
    cam.up = up;
    cam.width = std::clamp(static_cast<int>(std::ceil(2.0 * ex * texels_per_unit * opt.supersample)) + 1, 4, 4096);
    cam.height = std::clamp(static_cast<int>(std::ceil(2.0 * ey * texels_per_unit * opt.supersample)) + 1, 4, 4096);
    cam.ortho_height = 2.0 * std::max(ey, ex * cam.height / cam.width);
    cam.near = 1e-6 * reach;
    cam.far = 2.0 * reach + diag;
    return cam;
}

namespace detail {

// Projects `triangles` into their UV regions of `atlas`; other texels are left alone.
inline void project_triangles_into(TextureAtlas& atlas, const TriangleMesh& wm, const Structure& structure,
                                   const std::vector<int>& triangles, const ProjectionOptions& opt) {
    const int resolution = atlas.resolution;
    const Aabb bounds = structure.mesh.empty() ? Aabb{} : bounds_of(structure.mesh);

    auto project_one = [&](int t) {
        const Triangle2 tex = uv_to_texel_space(atlas.mapping[t], resolution);
        const Vec3 a = wm.corner(t, 0), b = wm.corner(t, 1), c = wm.corner(t, 2);
        std::optional<CameraFrame> frame;
        SampleBuffer samples;
        const double len3 = (b - a).norm();
        const double len2 = (tex[1] - tex[0]).norm();
        if (len3 > 0.0 && !structure.mesh.empty()) {
            if (auto cam = triangle_camera(a, b, c, bounds, len2 / len3, opt)) {
                frame.emplace(*cam);
                samples = rasterize_nearest(structure.mesh, *cam, 1, true);
            }
        }
        for_each_texel(tex, resolution, resolution, [&](int x, int y, const Barycentric& w) {
            const std::size_t i = static_cast<std::size_t>(y) * resolution + x;
            atlas.owner[i] = t;
            atlas.image.texels[i] = ColorRgb::white();
            if (!frame) return;
            const Vec2 px = frame->to_pixel(frame->to_eye(w[0] * a + w[1] * b + w[2] * c));
            const int ix = std::clamp(static_cast<int>(std::floor(px.x())), 0, samples.width - 1);
            const int iy = std::clamp(static_cast<int>(std::floor(px.y())), 0, samples.height - 1);
            const SurfaceSample& s = samples.at(ix, iy);
            if (s.triangle < 0) return;
            const ColorRgb ink = shade_fragment(structure, *frame, s.triangle, s.bary, opt.lighting);
            atlas.image.texels[i] = blend_with_opacity(ColorRgb::white(), ink, structure.opacity);
        });
    };

    const int n = static_cast<int>(triangles.size());
    const int threads = std::max(1, std::min(opt.threads, n));
    if (threads == 1) {
        for (int t : triangles) project_one(t);
    } else {
        std::vector<std::thread> pool;
        for (int k = 0; k < threads; ++k)
            pool.emplace_back([&, k] {
                for (int j = k; j < n; j += threads) project_one(triangles[j]);
            });
        for (std::thread& th : pool) th.join();
    }
}

}  // namespace detail

// Per paper triangle: render the structure through an orthographic camera
// along the wrapped triangle's normal and resample the frame into the
// triangle's UV region. Texels outside every UV triangle stay white.
inline TextureAtlas project_texture(const WrappedPaperMesh& wrapped, const Structure& structure,
                                    const PaperMesh& uv_paper, int resolution, const ProjectionOptions& opt = {}) {
    if (!uv_paper.has_uv()) throw InvalidArgument("project_texture: paper mesh has no UV coordinates");
    if (resolution < 64) throw InvalidArgument("project_texture: resolution must be >= 64");
    if (wrapped.mesh.triangles.size() != uv_paper.mesh.triangles.size())
        throw InvalidArgument("project_texture: wrapped mesh does not match the paper mesh");

    TextureAtlas atlas{CompositeImage(resolution, resolution), resolution, uv_paper.uv,
                       std::vector<int>(static_cast<std::size_t>(resolution) * resolution, -1)};
    std::vector<int> all(wrapped.mesh.triangles.size());
    std::iota(all.begin(), all.end(), 0);
    detail::project_triangles_into(atlas, wrapped.mesh, structure, all, opt);
    return atlas;
}

// Re-projects only `triangles` into an existing atlas (after a local edit).
inline void reproject_triangles(TextureAtlas& atlas, const WrappedPaperMesh& wrapped, const Structure& structure,
                                const std::vector<int>& triangles, const ProjectionOptions& opt = {}) {
    if (wrapped.mesh.triangles.size() != atlas.mapping.size())
        throw InvalidArgument("reproject_triangles: wrapped mesh does not match the atlas");
    for (int t : triangles)
        if (t < 0 || static_cast<std::size_t>(t) >= atlas.mapping.size())
            throw InvalidArgument("reproject_triangles: triangle id " + std::to_string(t) + " out of range");
    detail::project_triangles_into(atlas, wrapped.mesh, structure, triangles, opt);
}

// Channel-wise product of atlases sharing one UV mapping.
inline TextureAtlas multiply_textures(std::span<const TextureAtlas> atlases) {
    if (atlases.empty()) throw InvalidArgument("combine_textures: no atlases");
    TextureAtlas out = atlases[0];
    for (std::size_t k = 1; k < atlases.size(); ++k) {
        const TextureAtlas& a = atlases[k];
        if (a.resolution != out.resolution || a.mapping.size() != out.mapping.size())
            throw InvalidArgument("combine_textures: atlases have different resolution or mapping");
        for (std::size_t t = 0; t < a.mapping.size(); ++t)
            for (int c = 0; c < 3; ++c)
                if (a.mapping[t][c] != out.mapping[t][c])
                    throw InvalidArgument("combine_textures: atlases have different UV mappings");
        for (std::size_t i = 0; i < out.image.texels.size(); ++i) {
            const ColorRgb& p = out.image.texels[i];
            const ColorRgb& q = a.image.texels[i];
            out.image.texels[i] = ColorRgb(p.r * q.r, p.g * q.g, p.b * q.b);
        }
    }
    return out;
}

inline TextureAtlas combine_textures(std::span<const TextureAtlas> atlases, double brighten_target = 0.9) {
    TextureAtlas out = multiply_textures(atlases);
    out.image = brighten(out.image, brighten_target);
    return out;
}

// Nearest-texel rendering of a UV-mapped mesh.
inline CompositeImage render_textured(const TriangleMesh& mesh, const std::vector<UvTriangle>& uv,
                                      const TextureAtlas& atlas, const Camera& cam, int threads = 1) {
    if (uv.size() != mesh.triangles.size()) throw InvalidArgument("render_textured: UV mapping does not match mesh");
    const SampleBuffer vis = rasterize_nearest(mesh, cam, threads, true);
    CompositeImage img(cam.width, cam.height);
    const int r = atlas.resolution;
    for (std::size_t i = 0; i < vis.samples.size(); ++i) {
        const SurfaceSample& s = vis.samples[i];
        if (s.triangle < 0) continue;
        const UvTriangle& q = uv[s.triangle];
        Vec2 p = s.bary[0] * q[0] + s.bary[1] * q[1] + s.bary[2] * q[2];
        auto texel = [&](const Vec2& uv) {
            return std::pair{std::clamp(static_cast<int>(std::floor(uv.x() * r)), 0, r - 1),
                             std::clamp(static_cast<int>(std::floor((1.0 - uv.y()) * r)), 0, r - 1)};
        };
        auto [x, y] = texel(p);
        if (!atlas.owner.empty() && atlas.owner[static_cast<std::size_t>(y) * r + x] != s.triangle) {
            // Boundary sample: step up to two texels towards the UV centroid to stay inside the triangle.
            const Vec2 centre = (q[0] + q[1] + q[2]) / 3.0;
            const double dist = (centre - p).norm();
            if (dist > 0.0) std::tie(x, y) = texel(p + std::min(dist, 2.0 / r) * (centre - p) / dist);
        }
        img.texels[i] = atlas.image.at(x, y);
    }
    return img;
}

}  // namespace edutainer
