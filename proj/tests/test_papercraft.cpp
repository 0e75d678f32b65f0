#include "edutainer/mesh/primitives.hpp"
#include "edutainer/papercraft/papercraft.hpp"
#include "oracles/geometry_oracles.hpp"
#include "oracles/texture_oracles.hpp"

#include <gtest/gtest.h>

#include <regex>
#include <set>

using namespace edutainer;

namespace {

std::size_t count_matches(const std::string& text, const std::string& pattern) {
    const std::regex re(pattern);
    return static_cast<std::size_t>(std::distance(std::sregex_iterator(text.begin(), text.end(), re), std::sregex_iterator()));
}

// Independent net validation: SAT overlaps, shared fold segments, one tab per cut.
void expect_valid_net(const PlanarLayout& layout, const TriangleMesh& mesh) {
    std::set<int> placed;
    for (const Island& is : layout.islands)
        for (const PlacedTriangle& p : is.triangles) EXPECT_TRUE(placed.insert(p.triangle).second);
    EXPECT_EQ(placed.size(), mesh.triangles.size());

    for (const Island& is : layout.islands)
        for (const PlacedTriangle& p : is.triangles)
            for (int k = 0; k < 3; ++k) {
                const double l3 = (mesh.corner(p.triangle, k) - mesh.corner(p.triangle, (k + 1) % 3)).norm();
                const double l2 = (p.corners[k] - p.corners[(k + 1) % 3]).norm();
                if (l3 > 0.0)
                    EXPECT_LE(std::abs(l2 - l3) / l3, 1e-6);
                else
                    EXPECT_LE(l2, 1e-12);
            }

    const double tol = 1e-7 * std::sqrt(mesh.surface_area());
    for (const Island& is : layout.islands)
        for (std::size_t i = 0; i < is.triangles.size(); ++i)
            for (std::size_t j = i + 1; j < is.triangles.size(); ++j)
                EXPECT_FALSE(oracle::triangles_overlap_sat(is.triangles[i].corners, is.triangles[j].corners, tol))
                    << is.triangles[i].triangle << " vs " << is.triangles[j].triangle;

    std::map<int, int> tabs_per_edge;
    for (const Tab& t : layout.tabs) ++tabs_per_edge[t.edge];
    for (std::size_t e = 0; e < layout.edges.size(); ++e) {
        const LayoutEdge& le = layout.edges[e];
        const PlacedTriangle& p0 = layout.placed(le.faces[0]);
        const PlacedTriangle& p1 = layout.placed(le.faces[1]);
        if (le.kind == EdgeKind::Fold) {
            EXPECT_EQ(layout.location[le.faces[0]].first, layout.location[le.faces[1]].first);
            const std::set<std::pair<double, double>> s0{{p0.corners[le.sides[0]].x(), p0.corners[le.sides[0]].y()},
                                                         {p0.corners[(le.sides[0] + 1) % 3].x(),
                                                          p0.corners[(le.sides[0] + 1) % 3].y()}};
            const std::set<std::pair<double, double>> s1{{p1.corners[le.sides[1]].x(), p1.corners[le.sides[1]].y()},
                                                         {p1.corners[(le.sides[1] + 1) % 3].x(),
                                                          p1.corners[(le.sides[1] + 1) % 3].y()}};
            EXPECT_EQ(s0, s1) << "fold edge " << e;
            EXPECT_EQ(tabs_per_edge.count(static_cast<int>(e)), 0u);
        } else {
            EXPECT_EQ(tabs_per_edge[static_cast<int>(e)], 1) << "cut edge " << e;
            EXPECT_GT(le.label, 0);
        }
    }
}

TriangleMesh unit_cube() { return box_mesh(Aabb{Vec3::Zero(), Vec3::Ones()}); }

std::vector<TriangleMesh> torso_like() {
    return {ellipsoid(3, Vec3(0.55, 0.8, 0.35)), capsule(Vec3(-0.2, -0.5, 0), Vec3(0.2, 0.5, 0.05), 0.15, 12, 4),
            icosphere(3, 0.2, Vec3(0.1, 0.35, 0.1))};
}

PaperMesh uv_paper_for(const TriangleMesh& structure, int level, int resolution) {
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&structure, 1), level);
    return assign_uv(paper, unfold(paper), resolution);
}

// Texels at least `inset` texels inside their UV triangle.
std::vector<std::pair<std::size_t, Barycentric>> interior_texels(const TextureAtlas& atlas, double inset) {
    std::vector<std::pair<std::size_t, Barycentric>> out;
    for (std::size_t t = 0; t < atlas.mapping.size(); ++t) {
        const Triangle2 tex = uv_to_texel_space(atlas.mapping[t], atlas.resolution);
        for_each_texel(tex, atlas.resolution, atlas.resolution, [&](int x, int y, const Barycentric& b) {
            const Vec2 p(x + 0.5, y + 0.5);
            for (int k = 0; k < 3; ++k) {
                const Vec2 a = tex[k], c = tex[(k + 1) % 3];
                if (std::abs(cross2(c - a, p - a)) / (c - a).norm() < inset) return;
            }
            out.push_back({static_cast<std::size_t>(y) * atlas.resolution + x, b});
        });
    }
    return out;
}

}  // namespace

TEST(GeneratePaperMesh, UnitSphereLevelOne) {
    const TriangleMesh sphere = icosphere(3);
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&sphere, 1), 1);
    EXPECT_EQ(paper.mesh.triangle_count(), 48u);
    EXPECT_TRUE(validate(paper.mesh).closed);
    for (const Vec3& v : paper.mesh.vertices) EXPECT_NEAR(v.norm(), 1.0, 0.02);
}

TEST(GeneratePaperMesh, TriangleCountPerLevel) {
    const auto scene = torso_like();
    for (int level = 0; level <= 2; ++level)
        EXPECT_EQ(generate_paper_mesh(scene, level).mesh.triangle_count(), 12u * (1u << (2 * level)));
}

TEST(GeneratePaperMesh, ProjectionMatchesBruteForce) {
    const auto scene = torso_like();
    const TriangleMesh box = subdivide(box_mesh(bounding_box(scene)), 1);
    const PaperMesh paper = generate_paper_mesh(scene, 1);
    ASSERT_EQ(paper.mesh.vertices.size(), box.vertices.size());
    double diag = bounding_box(scene).diagonal();
    for (std::size_t v = 0; v < box.vertices.size(); ++v) {
        const auto hit = oracle::brute_closest(box.vertices[v], scene);
        EXPECT_NEAR((paper.mesh.vertices[v] - box.vertices[v]).norm(), hit.distance, 1e-12 * diag);
        EXPECT_LE(oracle::brute_distance_to_mesh(paper.mesh.vertices[v], scene[hit.structure]), 1e-12 * diag);
    }
}

TEST(GeneratePaperMesh, WrapSoundnessAndTopology) {
    const auto scene = torso_like();
    const double diag = bounding_box(scene).diagonal();
    const TriangleMesh box = subdivide(box_mesh(bounding_box(scene)), 2);
    for (int iters : {0, 4}) {
        const PaperMesh paper = generate_paper_mesh(scene, 2, WrapOptions{iters, 0.0});
        EXPECT_EQ(paper.mesh.triangles, box.triangles);
        for (const Vec3& v : paper.mesh.vertices)
            EXPECT_LE(oracle::brute_closest(v, scene).distance, (iters == 0 ? 1e-6 : 0.01) * diag);
    }
}

TEST(GeneratePaperMesh, OffsetPushesOutward) {
    const TriangleMesh sphere = icosphere(3);
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&sphere, 1), 1, WrapOptions{0, 0.05});
    for (const Vec3& v : paper.mesh.vertices) EXPECT_NEAR(v.norm(), 1.05, 0.02);
}

TEST(GeneratePaperMesh, Errors) {
    EXPECT_THROW(generate_paper_mesh({}, 1), InvalidArgument);
    const TriangleMesh sphere = icosphere(1);
    EXPECT_THROW(generate_paper_mesh(std::span<const TriangleMesh>(&sphere, 1), -1), InvalidArgument);
}

TEST(WrapPerStructure, FixedPointOnOwnSurface) {
    const TriangleMesh sphere = icosphere(3);
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&sphere, 1), 1);
    const WrappedPaperMesh w = wrap_per_structure(paper, sphere);
    for (std::size_t v = 0; v < w.mesh.vertices.size(); ++v)
        EXPECT_LE((w.mesh.vertices[v] - paper.mesh.vertices[v]).norm(), 1e-9);
}

TEST(WrapPerStructure, ConcentricSpheresShrinkToInner) {
    const std::vector<TriangleMesh> scene{icosphere(3, 1.0), icosphere(3, 0.5)};
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(scene.data(), 1), 1);
    const WrappedPaperMesh w = wrap_per_structure(paper, scene[1], 1);
    EXPECT_EQ(w.structure_index, 1);
    EXPECT_EQ(w.mesh.triangles, paper.mesh.triangles);
    for (const Vec3& v : w.mesh.vertices) EXPECT_NEAR(v.norm(), 0.5, 0.01);
}

TEST(WrapPerStructure, MatchesBruteForce) {
    const auto scene = torso_like();
    const PaperMesh paper = generate_paper_mesh(scene, 1);
    const WrappedPaperMesh w = wrap_per_structure(paper, scene[1], 1);
    const std::vector<TriangleMesh> only{scene[1]};
    for (std::size_t v = 0; v < w.mesh.vertices.size(); ++v) {
        const double d = oracle::brute_closest(paper.mesh.vertices[v], only).distance;
        EXPECT_NEAR((w.mesh.vertices[v] - paper.mesh.vertices[v]).norm(), d, 1e-12);
    }
    EXPECT_THROW(wrap_per_structure(paper, TriangleMesh{}), InvalidArgument);
}

TEST(Unfold, RegularTetrahedronIsOneIsland) {
    const TriangleMesh tet = tetrahedron(1.0);
    const PlanarLayout layout = unfold(tet);
    ASSERT_EQ(layout.islands.size(), 1u);
    EXPECT_EQ(layout.islands[0].triangles.size(), 4u);
    expect_valid_net(layout, tet);
    EXPECT_NEAR(layout.area(), 4.0 * std::sqrt(3.0) / 4.0, 1e-12);
    EXPECT_EQ(layout.cut_count(), 3u);
    EXPECT_EQ(layout.tabs.size(), 3u);
    for (const LayoutEdge& e : layout.edges)
        if (e.kind == EdgeKind::Fold) EXPECT_EQ(e.direction, FoldDirection::Mountain);
}

TEST(Unfold, CubeNetHasAreaSix) {
    const TriangleMesh cube = unit_cube();
    const PlanarLayout layout = unfold(cube);
    EXPECT_NEAR(layout.area(), 6.0, 1e-12);
    expect_valid_net(layout, cube);
    EXPECT_EQ(layout.islands.size(), 1u);
}

TEST(Unfold, OpenInputRejected) {
    TriangleMesh tri;
    tri.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0)};
    tri.triangles = {{0, 1, 2}};
    EXPECT_THROW(unfold(tri), InvalidArgument);
    EXPECT_THROW(unfold(TriangleMesh{}), InvalidArgument);
}

TEST(Unfold, WrappedScenesGiveValidNets) {
    const std::vector<std::vector<TriangleMesh>> scenes{
        torso_like(),
        {icosphere(3, 0.4), icosphere(3, 0.7), icosphere(3, 1.0)},
        {torus(0.8, 0.3, 24, 12), ellipsoid(3, Vec3(0.4, 0.3, 0.5), Vec3(0, 0, 0.2))}};
    for (const auto& scene : scenes)
        for (int level : {1, 2}) {
            const PaperMesh paper = generate_paper_mesh(scene, level);
            const PlanarLayout layout = unfold(paper);
            expect_valid_net(layout, paper.mesh);
            const LayoutCheck check = check_layout(layout, paper.mesh);
            EXPECT_LE(check.max_isometry_error, 1e-6);
            EXPECT_TRUE(check.overlapping.empty());
        }
}

TEST(Unfold, DeterministicForSeed) {
    const PaperMesh paper = generate_paper_mesh(torso_like(), 2);
    const PlanarLayout a = unfold(paper, UnfoldOptions{32, 7});
    const PlanarLayout b = unfold(paper, UnfoldOptions{32, 7});
    ASSERT_EQ(a.islands.size(), b.islands.size());
    for (std::size_t i = 0; i < a.islands.size(); ++i)
        for (std::size_t k = 0; k < a.islands[i].triangles.size(); ++k) {
            EXPECT_EQ(a.islands[i].triangles[k].triangle, b.islands[i].triangles[k].triangle);
            EXPECT_EQ(a.islands[i].triangles[k].corners, b.islands[i].triangles[k].corners);
        }
    EXPECT_EQ(a.seed, b.seed);
}

TEST(Unfold, TabDepthIsCappedAtFiveMillimetres) {
    PlanarLayout layout = unfold(unit_cube());
    build_tabs(layout, 100.0);  // 100 mm per unit: 0.3 x 1 unit = 30 mm, capped at 5 mm
    for (const Tab& t : layout.tabs) {
        const Vec2 a = t.outline[0], b = t.outline[1];
        const Vec2 dir = (b - a).normalized();
        const double depth = std::abs(cross2(dir, t.outline[2] - a));
        EXPECT_NEAR(depth * 100.0, std::min(5.0, 0.3 * (b - a).norm() * 100.0), 1e-9);
    }
    build_tabs(layout, 1.0);
    for (const Tab& t : layout.tabs) {
        const Vec2 dir = (t.outline[1] - t.outline[0]).normalized();
        EXPECT_NEAR(std::abs(cross2(dir, t.outline[3] - t.outline[0])), 0.3 * (t.outline[1] - t.outline[0]).norm(), 1e-9);
    }
}

TEST(AssignUv, OneIslandFitsUnitSquareWithUniformScale) {
    const PaperMesh paper = generate_paper_mesh(torso_like(), 1);
    const PlanarLayout layout = unfold(paper);
    const PaperMesh uv = assign_uv(paper, layout, 512);
    ASSERT_TRUE(uv.has_uv());
    double ratio = -1.0;
    for (std::size_t t = 0; t < uv.uv.size(); ++t)
        for (int k = 0; k < 3; ++k) {
            EXPECT_GE(uv.uv[t][k].x(), 0.0);
            EXPECT_LE(uv.uv[t][k].x(), 1.0);
            EXPECT_GE(uv.uv[t][k].y(), 0.0);
            EXPECT_LE(uv.uv[t][k].y(), 1.0);
            const double r = (uv.uv[t][k] - uv.uv[t][(k + 1) % 3]).norm() /
                             (paper.mesh.corner(t, k) - paper.mesh.corner(t, (k + 1) % 3)).norm();
            if (ratio < 0.0) ratio = r;
            EXPECT_NEAR(r / ratio, 1.0, 1e-6);
        }
}

TEST(AssignUv, TwoIslandsKeepGutter) {
    const PaperMesh paper{unit_cube(), 0, {}};
    PlanarLayout layout = unfold(paper);
    // Detach the last-placed triangle into its own island.
    Island lone{{layout.islands[0].triangles.back()}};
    layout.islands[0].triangles.pop_back();
    layout.location[lone.triangles[0].triangle] = {1, 0};
    layout.islands.push_back(lone);
    const int res = 256;
    const PaperMesh uv = assign_uv(paper, layout, res);
    Box2 boxes[2];
    for (int i = 0; i < 2; ++i)
        for (const PlacedTriangle& p : layout.islands[i].triangles)
            for (const Vec2& q : uv.uv[p.triangle]) boxes[i].expand(q);
    const double gap_x = std::max(boxes[1].min.x() - boxes[0].max.x(), boxes[0].min.x() - boxes[1].max.x());
    const double gap_y = std::max(boxes[1].min.y() - boxes[0].max.y(), boxes[0].min.y() - boxes[1].max.y());
    EXPECT_GE(std::max(gap_x, gap_y) * res, 2.0 - 1e-9);
    // Distinct islands never share a texel.
    const std::vector<int> owner = uv_owner_map(uv.uv, res);
    std::map<int, int> count;
    for (int o : owner) ++count[o];
    int total = 0;
    for (std::size_t t = 0; t < uv.uv.size(); ++t) {
        int expected = 0;
        for_each_texel(uv_to_texel_space(uv.uv[t], res), res, res, [&](int, int, const Barycentric&) { ++expected; });
        EXPECT_EQ(count[static_cast<int>(t)], expected);
        total += expected;
    }
    EXPECT_EQ(total + count[-1], res * res);
}

TEST(AssignUv, MismatchedLayoutRejected) {
    const PaperMesh cube{unit_cube(), 0, {}};
    const PaperMesh tet{tetrahedron(), 0, {}};
    EXPECT_THROW(assign_uv(cube, unfold(tet)), InvalidArgument);
}

TEST(ProjectTexture, ConstantColourProjection) {
    const TriangleMesh sphere = icosphere(3);
    const PaperMesh uv = uv_paper_for(sphere, 1, 256);
    const WrappedPaperMesh w{uv.mesh, 0};
    const Structure self{w.mesh, Hue::Cyan, 1.0, "self"};
    ProjectionOptions opt;
    opt.lighting.ambient_floor = 1.0;
    const TextureAtlas atlas = project_texture(w, self, uv, 256, opt);
    const auto texels = interior_texels(atlas, 1.5);
    ASSERT_GT(texels.size(), 1000u);
    for (const auto& [i, b] : texels) EXPECT_EQ(atlas.image.texels[i], ColorRgb(0, 1, 1));
    for (std::size_t i = 0; i < atlas.owner.size(); ++i)
        if (atlas.owner[i] < 0) EXPECT_EQ(atlas.image.texels[i], ColorRgb::white());
}

TEST(ProjectTexture, DegenerateViewLeavesWhite) {
    const TriangleMesh sphere = icosphere(2);
    const PaperMesh uv = uv_paper_for(sphere, 1, 128);
    WrappedPaperMesh collapsed{uv.mesh, 0};
    for (Vec3& v : collapsed.mesh.vertices) v = Vec3::Zero();
    const TextureAtlas atlas = project_texture(collapsed, Structure{sphere, Hue::Magenta, 1.0, ""}, uv, 128);
    for (const ColorRgb& c : atlas.image.texels) EXPECT_EQ(c, ColorRgb::white());
}

TEST(ProjectTexture, MatchesRayCastOracle) {
    const Structure sphere{icosphere(3, 0.8), Hue::Magenta, 1.0, "sphere"};
    const TriangleMesh& m = sphere.mesh;
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&m, 1), 1);
    const PaperMesh uv = assign_uv(paper, unfold(paper), 256);
    const WrappedPaperMesh w = wrap_per_structure(uv, m);
    const TextureAtlas atlas = project_texture(w, sphere, uv, 256);
    const auto texels = interior_texels(atlas, 1.0);
    ASSERT_GT(texels.size(), 1000u);
    std::size_t good = 0;
    for (const auto& [i, b] : texels) {
        const int t = atlas.owner[i];
        const Vec3 p = b[0] * w.mesh.corner(t, 0) + b[1] * w.mesh.corner(t, 1) + b[2] * w.mesh.corner(t, 2);
        const ColorRgb expect = oracle::raycast_texel(sphere, p, w.mesh.face_normal(t), 10.0, Lighting{});
        double diff = 0.0;
        for (int c = 0; c < 3; ++c) diff = std::max(diff, std::abs(expect[c] - atlas.image.texels[i][c]));
        if (diff <= 2.0 / 255.0) ++good;
    }
    EXPECT_GE(static_cast<double>(good) / texels.size(), 0.95) << good << " of " << texels.size();
}

TEST(ProjectTexture, ParallelIsIdentical) {
    const Structure sphere{icosphere(3), Hue::Yellow, 0.7, ""};
    const PaperMesh uv = uv_paper_for(sphere.mesh, 1, 128);
    const WrappedPaperMesh w = wrap_per_structure(uv, sphere.mesh);
    ProjectionOptions par;
    par.threads = 4;
    const TextureAtlas a = project_texture(w, sphere, uv, 128);
    const TextureAtlas b = project_texture(w, sphere, uv, 128, par);
    EXPECT_EQ(a.image, b.image);
    EXPECT_EQ(a.owner, b.owner);
}

TEST(ProjectTexture, Errors) {
    const TriangleMesh sphere = icosphere(2);
    PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&sphere, 1), 1);
    const WrappedPaperMesh w{paper.mesh, 0};
    const Structure s{sphere, Hue::Cyan, 1.0, ""};
    EXPECT_THROW(project_texture(w, s, paper, 128), InvalidArgument);
    paper = assign_uv(paper, unfold(paper), 128);
    EXPECT_THROW(project_texture(w, s, paper, 32), InvalidArgument);
}

TEST(CombineTextures, Algebra) {
    const PaperMesh uv = uv_paper_for(unit_cube(), 0, 64);
    auto filled = [&](ColorRgb c) {
        TextureAtlas a{CompositeImage(64, 64), 64, uv.uv, uv_owner_map(uv.uv, 64)};
        for (std::size_t i = 0; i < a.owner.size(); ++i)
            if (a.owner[i] >= 0) a.image.texels[i] = c;
        return a;
    };
    const TextureAtlas white = filled(ColorRgb::white());
    const TextureAtlas cyan = filled(hue_color(Hue::Cyan));
    const TextureAtlas magenta = filled(hue_color(Hue::Magenta));
    const TextureAtlas yellow = filled(hue_color(Hue::Yellow));

    const std::vector<TextureAtlas> id{white, cyan};
    EXPECT_EQ(combine_textures(id, 1.0).image, cyan.image);
    const std::vector<TextureAtlas> cm{cyan, magenta};
    const TextureAtlas blue = combine_textures(cm, 1.0);
    const std::vector<TextureAtlas> cmy{cyan, magenta, yellow};
    const TextureAtlas dark = combine_textures(cmy, 0.9);
    for (std::size_t i = 0; i < cyan.owner.size(); ++i) {
        if (cyan.owner[i] < 0) continue;
        EXPECT_EQ(blue.image.texels[i], ColorRgb(0, 0, 1));
        for (int c = 0; c < 3; ++c) EXPECT_NEAR(dark.image.texels[i][c], 0.1, 1e-12);
    }

    TextureAtlas shifted = cyan;
    shifted.mapping[0][0].x() += 0.01;
    const std::vector<TextureAtlas> bad{cyan, shifted};
    EXPECT_THROW(combine_textures(bad), InvalidArgument);
    const TextureAtlas small{CompositeImage(32, 32), 32, uv.uv, {}};
    const std::vector<TextureAtlas> bad_res{cyan, small};
    EXPECT_THROW(combine_textures(bad_res), InvalidArgument);
}

TEST(FlattenSelection, CoplanarSelectionIsFixedPoint) {
    const TriangleMesh cube = unit_cube();
    // Triangles 0 and 1 form one face of the box.
    const FlattenSelection sel{{0, 1}};
    ASSERT_LE(std::abs(cube.face_normal(0).dot(cube.face_normal(1)) - 1.0), 1e-12);
    const TriangleMesh flat = flatten_selection(cube, sel);
    const double diag = bounds_of(cube).diagonal();
    for (std::size_t v = 0; v < cube.vertices.size(); ++v)
        EXPECT_LE((flat.vertices[v] - cube.vertices[v]).norm(), 1e-12 * diag);
    EXPECT_EQ(flat.triangles, cube.triangles);
}

TEST(FlattenSelection, TwoTriangleClosedForm) {
    TriangleMesh m;
    m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0),    // normal +z
                  Vec3(2, 0, 0), Vec3(2, 1, 0), Vec3(2, 0, 1)};   // normal +x
    m.triangles = {{0, 1, 2}, {3, 4, 5}};
    ASSERT_NEAR(m.face_normal(1).x(), 1.0, 1e-15);
    FlattenReport report;
    const TriangleMesh flat = flatten_selection(m, FlattenSelection{{0, 1}}, &report);
    const Vec3 expected_n = Vec3(1, 0, 1) / std::sqrt(2.0);
    EXPECT_LE((report.normal - expected_n).norm(), 1e-15);
    Vec3 centroid = Vec3::Zero();
    for (const Vec3& v : m.vertices) centroid += v / 6.0;
    EXPECT_LE((report.origin - centroid).norm(), 1e-15);
    for (const Vec3& v : flat.vertices) EXPECT_NEAR((v - centroid).dot(expected_n), 0.0, 1e-15);
    EXPECT_FALSE(report.connected);
}

TEST(FlattenSelection, OppositeNormalsAreDegenerate) {
    TriangleMesh m;
    m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1), Vec3(0, 1, 1), Vec3(1, 0, 1)};
    m.triangles = {{0, 1, 2}, {3, 4, 5}};
    EXPECT_THROW(flatten_selection(m, FlattenSelection{{0, 1}}), DegenerateSelection);
    EXPECT_THROW(flatten_selection(m, FlattenSelection{{}}), InvalidArgument);
    EXPECT_THROW(flatten_selection(m, FlattenSelection{{5}}), InvalidArgument);
}

TEST(FlattenSelection, TouchesOnlySelectedVertices) {
    const TriangleMesh sphere = icosphere(2);
    const PaperMesh paper = generate_paper_mesh(std::span<const TriangleMesh>(&sphere, 1), 1);
    FlattenReport report;
    const PaperMesh flat = flatten_selection(paper, FlattenSelection{{7, 12}}, &report);
    std::set<int> moved(report.moved_vertices.begin(), report.moved_vertices.end());
    for (std::size_t v = 0; v < paper.mesh.vertices.size(); ++v)
        if (!moved.count(static_cast<int>(v))) EXPECT_EQ(flat.mesh.vertices[v], paper.mesh.vertices[v]);
    for (int v : moved) EXPECT_NEAR((flat.mesh.vertices[v] - report.origin).dot(report.normal), 0.0, 1e-12);
    EXPECT_EQ(flat.mesh.triangles, paper.mesh.triangles);
    EXPECT_TRUE(validate(flat.mesh).closed);
}

TEST(PrintSheet, TetrahedronNetOnA4) {
    const TriangleMesh tet = tetrahedron(1.0);
    const PaperMesh paper{tet, 0, {}};
    const PlanarLayout layout = unfold(paper);
    const PaperMesh uv = assign_uv(paper, layout, 128);
    const TextureAtlas atlas{CompositeImage(128, 128), 128, uv.uv, uv_owner_map(uv.uv, 128)};
    const PrintSheet sheet = layout_to_print_sheet(layout, atlas, PageSpec{});
    EXPECT_EQ(sheet.textured_triangles, 4);
    EXPECT_EQ(sheet.fold_lines, 3);
    EXPECT_EQ(sheet.tabs, 3);
    EXPECT_EQ(sheet.cut_segments, 3);
    EXPECT_EQ(sheet.labels, 6);

    const std::string& svg = sheet.svg;
    EXPECT_EQ(count_matches(svg, "<g clip-path="), 4u);
    EXPECT_EQ(count_matches(svg, "<line class=\"(mountain|valley)\""), 3u);
    EXPECT_EQ(count_matches(svg, "<polyline class=\"tab\""), 3u);
    EXPECT_EQ(count_matches(svg, "data:image/png;base64,"), 1u);
    for (int label = 1; label <= 3; ++label)
        EXPECT_EQ(count_matches(svg, ">" + std::to_string(label) + "</text>"), 2u);
    const auto tex = svg.find("<g id=\"texture\">"), fold = svg.find("<g id=\"fold\""), cut = svg.find("<g id=\"cut\"");
    ASSERT_NE(tex, std::string::npos);
    ASSERT_NE(fold, std::string::npos);
    ASSERT_NE(cut, std::string::npos);
    EXPECT_LT(tex, fold);
    EXPECT_LT(fold, cut);
    EXPECT_NE(svg.find("width=\"210.0000mm\""), std::string::npos);
}

TEST(PrintSheet, AutoScaleFitsMargins) {
    const PaperMesh paper{unit_cube(), 0, {}};
    const PlanarLayout layout = unfold(paper);
    const PaperMesh uv = assign_uv(paper, layout, 64);
    const TextureAtlas atlas{CompositeImage(64, 64), 64, uv.uv, {}};
    PageSpec page;
    page.scale = 1000.0;  // one metre per unit, far too large for A4
    const PrintSheet sheet = layout_to_print_sheet(layout, atlas, page);
    EXPECT_LT(sheet.scale, 1000.0);
    EXPECT_GT(sheet.scale, 10.0);
    const std::regex coord("(x[12]?|y[12]?)=\"([-0-9.]+)\"");
    const std::string body = sheet.svg.substr(sheet.svg.find("</defs>"));
    for (auto it = std::sregex_iterator(body.begin(), body.end(), coord); it != std::sregex_iterator(); ++it) {
        const double v = std::stod((*it)[2]);
        const bool is_x = (*it)[1].str()[0] == 'x';
        EXPECT_GE(v, page.margin_mm - 1e-3);
        EXPECT_LE(v, (is_x ? page.width_mm : page.height_mm) - page.margin_mm + 1e-3);
    }

    page.auto_scale = false;
    try {
        layout_to_print_sheet(layout, atlas, page);
        FAIL() << "expected LayoutError";
    } catch (const LayoutError& e) {
        EXPECT_NEAR(e.required_scale(), sheet.scale, 1e-9 * sheet.scale);
    }
    page.scale = 5.0;
    EXPECT_NEAR(layout_to_print_sheet(layout, atlas, page).scale, 5.0, 0.0);
}

TEST(PrintSheet, TwoIslandsLabelBothSides) {
    const PaperMesh paper{unit_cube(), 0, {}};
    PlanarLayout layout = unfold(paper);
    Island lone{{layout.islands[0].triangles.back()}};
    const int t = lone.triangles[0].triangle;
    layout.islands[0].triangles.pop_back();
    layout.location[t] = {1, 0};
    layout.islands.push_back(lone);
    for (LayoutEdge& e : layout.edges)
        if ((e.faces[0] == t || e.faces[1] == t) && e.kind == EdgeKind::Fold) {
            e.kind = EdgeKind::Cut;
            e.label = static_cast<int>(layout.cut_count()) + 100;
        }
    build_tabs(layout, 1.0);
    const PaperMesh uv = assign_uv(paper, layout, 64);
    const TextureAtlas atlas{CompositeImage(64, 64), 64, uv.uv, {}};
    const PrintSheet sheet = layout_to_print_sheet(layout, atlas);
    EXPECT_EQ(static_cast<std::size_t>(sheet.labels), 2 * layout.cut_count());
    EXPECT_EQ(static_cast<std::size_t>(sheet.tabs), layout.cut_count());
    EXPECT_EQ(sheet.cut_segments + sheet.tabs, static_cast<int>(2 * layout.cut_count()));
}

TEST(Assembly, ListsEveryPairingAndFold) {
    const PlanarLayout layout = unfold(tetrahedron());
    const std::string text = assembly_instructions(layout);
    EXPECT_EQ(count_matches(text, "\nlabel [0-9]+:"), 3u);
    EXPECT_EQ(count_matches(text, ": mountain"), 3u);
}
