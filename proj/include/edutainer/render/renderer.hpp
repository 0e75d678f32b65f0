#pragma once

#include "edutainer/color/image.hpp"
#include "edutainer/mesh/triangle_mesh.hpp"
#include "edutainer/render/raster.hpp"

#include <string>

namespace edutainer {

// A mesh plus the ink it is printed in.
struct Structure {
    TriangleMesh mesh;
    Hue hue = Hue::Cyan;
    double opacity = 1.0;
    std::string name;
};

struct Lighting {
    double ambient_floor = 0.25;
};

struct RenderOptions {
    Lighting lighting;
    int threads = 1;
    int max_peel_passes = 64;
    // Structures are closed, outward-wound surfaces: only their front faces are inked.
    bool cull_back_faces = true;
};

// Lambertian factor clamp(|n.l|, ambient_floor, 1) applied to the hue's two
// reflective channels; the absorbed channel stays exactly 0.
inline ColorRgb shade(Hue hue, const Vec3& normal, const Vec3& /*view_dir*/, const Vec3& light_dir,
                      double ambient_floor = 0.25) {
    const double lambert = std::clamp(std::abs(normal.dot(light_dir)), std::min(ambient_floor, 1.0), 1.0);
    ColorRgb c = hue_color(hue);
    for (int ch = 0; ch < 3; ++ch)
        if (ch != absorbed_channel(hue)) c.channel(ch) = lambert;
    return c;
}

// Surface normal at barycentric position: interpolated vertex normals when
// the mesh carries them, the face normal otherwise.
inline Vec3 surface_normal(const TriangleMesh& mesh, int tri, const Barycentric& b) {
    if (mesh.vertex_normals.size() == mesh.vertices.size()) {
        const Triangle& t = mesh.triangles[tri];
        const Vec3 n = b[0] * mesh.vertex_normals[t[0]] + b[1] * mesh.vertex_normals[t[1]] +
                       b[2] * mesh.vertex_normals[t[2]];
        if (n.norm() > 1e-12) return n.normalized();
    }
    return mesh.face_normal(tri);
}

inline Vec3 surface_point(const TriangleMesh& mesh, int tri, const Barycentric& b) {
    return b[0] * mesh.corner(tri, 0) + b[1] * mesh.corner(tri, 1) + b[2] * mesh.corner(tri, 2);
}

// Headlit shading of a structure fragment.
inline ColorRgb shade_fragment(const Structure& s, const CameraFrame& frame, int tri, const Barycentric& b,
                               const Lighting& lighting) {
    const Vec3 n = surface_normal(s.mesh, tri, b);
    const Vec3 v = frame.view_dir(surface_point(s.mesh, tri, b));
    return shade(s.hue, n, v, v, lighting.ambient_floor);
}

struct Fragment {
    double depth = 0.0;
    int structure_index = -1;
    ColorRgb color;
    double alpha = 1.0;
};

// Per-pixel fragments, ordered front to back.
struct FragmentList {
    int width = 0, height = 0;
    std::vector<std::vector<Fragment>> pixels;
    int passes = 0;
    bool truncated = false;

    const std::vector<Fragment>& at(int x, int y) const { return pixels[static_cast<std::size_t>(y) * width + x]; }
};

// Depth peeling: pass k keeps, per pixel, the nearest fragment strictly behind
// the depth kept by pass k-1 (plus a small epsilon). Stops at the first empty
// pass or after `max_peel_passes`.
inline FragmentList depth_peel(std::span<const Structure> scene, const Camera& cam, const RenderOptions& opt = {}) {
    const CameraFrame frame(cam);
    const std::size_t n = static_cast<std::size_t>(cam.width) * cam.height;
    FragmentList out{cam.width, cam.height, std::vector<std::vector<Fragment>>(n), 0, false};
    if (scene.empty()) return out;

    const double eps = 1e-7 * (cam.far - cam.near);
    struct Candidate {
        double depth;
        int structure, triangle;
        Barycentric bary;
    };
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> floor_depth(n, -inf);
    std::vector<Candidate> best(n);

    for (int pass = 0;; ++pass) {
        if (pass >= opt.max_peel_passes) {
            out.truncated = true;
            break;
        }
        std::fill(best.begin(), best.end(), Candidate{inf, -1, -1, {0, 0, 0}});
        for_each_band(cam.height, opt.threads, [&](RowRange rows) {
            for (std::size_t s = 0; s < scene.size(); ++s) {
                const TriangleMesh& m = scene[s].mesh;
                for (std::size_t t = 0; t < m.triangles.size(); ++t) {
                    if (opt.cull_back_faces && !front_facing(frame, m.corner(t, 0), m.corner(t, 1), m.corner(t, 2)))
                        continue;
                    rasterize_triangle(
                        frame, m.corner(t, 0), m.corner(t, 1), m.corner(t, 2),
                        [&](int x, int y, double depth, const Barycentric& b) {
                            const std::size_t i = static_cast<std::size_t>(y) * cam.width + x;
                            if (!(depth > floor_depth[i] + eps)) return;
                            // Scan order is (structure, triangle), so strict `<` keeps the lowest pair on ties.
                            if (depth < best[i].depth)
                                best[i] = Candidate{depth, static_cast<int>(s), static_cast<int>(t), b};
                        },
                        rows);
                }
            }
        });
        std::size_t produced = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const Candidate& c = best[i];
            if (c.structure < 0) {
                floor_depth[i] = inf;  // nothing further behind
                continue;
            }
            const Structure& s = scene[c.structure];
            out.pixels[i].push_back(
                Fragment{c.depth, c.structure, shade_fragment(s, frame, c.triangle, c.bary, opt.lighting), s.opacity});
            floor_depth[i] = c.depth;
            ++produced;
        }
        out.passes = pass + 1;
        if (produced == 0) break;
    }
    return out;
}

// Front-to-back fold of blend_with_opacity over `background`.
inline CompositeImage composite_fragments(const FragmentList& fragments, ColorRgb background = ColorRgb::white()) {
    CompositeImage img(fragments.width, fragments.height, background);
    for (std::size_t i = 0; i < fragments.pixels.size(); ++i) {
        const auto& list = fragments.pixels[i];
        ColorRgb c = background;
        for (std::size_t k = 0; k < list.size(); ++k) {
            if (k > 0 && !(list[k].depth > list[k - 1].depth))
                throw InternalError("composite_fragments: fragment list not strictly depth-sorted");
            c = blend_with_opacity(c, list[k].color, list[k].alpha);
        }
        img.texels[i] = c;
    }
    return img;
}

// Z-buffered, shaded rendering of a single structure.
inline LayerImage render_structure_layer(const Structure& s, const Camera& cam, int structure_index = 0,
                                         const RenderOptions& opt = {}) {
    const CameraFrame frame(cam);
    const SampleBuffer vis = rasterize_nearest(s.mesh, cam, opt.threads, opt.cull_back_faces);
    LayerImage layer(cam.width, cam.height, structure_index);
    for (std::size_t i = 0; i < vis.samples.size(); ++i) {
        const SurfaceSample& smp = vis.samples[i];
        if (smp.triangle < 0) continue;
        layer.color[i] = shade_fragment(s, frame, smp.triangle, smp.bary, opt.lighting);
        layer.alpha[i] = s.opacity;
    }
    return layer;
}

// At most three structures with pairwise distinct hues.
inline void check_scene(std::span<const Structure> scene) {
    if (scene.size() > 3) throw ConfigError("structures", "at most three structures are supported");
    for (std::size_t i = 0; i < scene.size(); ++i) {
        if (!(scene[i].opacity >= 0.0 && scene[i].opacity <= 1.0))
            throw ConfigError("structures[" + std::to_string(i) + "].opacity", "must be in [0,1]");
        for (std::size_t j = 0; j < i; ++j)
            if (scene[i].hue == scene[j].hue)
                throw ConfigError("structures[" + std::to_string(i) + "].hue",
                                  "duplicate hue '" + std::string(to_string(scene[i].hue)) + "'");
    }
}

inline CompositeImage render_2d(std::span<const Structure> scene, const Camera& cam, double brighten_target = 0.9,
                                const RenderOptions& opt = {}) {
    check_scene(scene);
    return brighten(composite_fragments(depth_peel(scene, cam, opt)), brighten_target);
}

}  // namespace edutainer
