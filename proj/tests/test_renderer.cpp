#include "edutainer/mesh/primitives.hpp"
#include "edutainer/render/png.hpp"
#include "edutainer/render/renderer.hpp"
#include "oracles/render_oracles.hpp"

#include <gtest/gtest.h>

using namespace edutainer;

namespace {

Camera test_camera(int size = 64) {
    Camera cam;
    cam.position = Vec3(0, 0, 5);
    cam.look_at = Vec3::Zero();
    cam.up = Vec3::UnitY();
    cam.vfov = 40.0;
    cam.near = 0.1;
    cam.far = 20.0;
    cam.width = cam.height = size;
    return cam;
}

// Camera-facing square in the plane z = z0, large enough to fill the test view.
TriangleMesh facing_quad(double z0, double half = 10.0) {
    TriangleMesh m;
    m.vertices = {Vec3(-half, -half, z0), Vec3(half, -half, z0), Vec3(half, half, z0), Vec3(-half, half, z0)};
    m.triangles = {{0, 1, 2}, {0, 2, 3}};
    return m;
}

Structure make(TriangleMesh m, Hue h, double opacity = 1.0) { return Structure{std::move(m), h, opacity, ""}; }

}  // namespace

TEST(Shade, Examples) {
    const Vec3 n = Vec3::UnitZ();
    const ColorRgb lit = shade(Hue::Cyan, n, n, n, 0.25);
    EXPECT_EQ(lit, ColorRgb(0, 1, 1));
    const ColorRgb grazing = shade(Hue::Cyan, n, Vec3::UnitX(), Vec3::UnitX(), 0.25);
    EXPECT_EQ(grazing, ColorRgb(0, 0.25, 0.25));
}

TEST(Shade, AbsorbedChannelAlwaysZero) {
    std::mt19937 rng(1);
    std::normal_distribution<double> g;
    for (int i = 0; i < 300; ++i) {
        const Vec3 n = Vec3(g(rng), g(rng), g(rng)).normalized();
        const Vec3 l = Vec3(g(rng), g(rng), g(rng)).normalized();
        for (Hue h : kAllHues) EXPECT_EQ(shade(h, n, l, l)[absorbed_channel(h)], 0.0);
    }
}

TEST(DepthPeel, EmptyScene) {
    const FragmentList f = depth_peel({}, test_camera());
    for (const auto& list : f.pixels) EXPECT_TRUE(list.empty());
}

TEST(DepthPeel, TwoParallelQuadsOrderedNearToFar) {
    // Camera at z=5 looking down -z: the plane z=4 is 1 unit away, z=3 is 2 units away.
    const std::vector<Structure> scene{make(facing_quad(3.0), Hue::Magenta), make(facing_quad(4.0), Hue::Cyan)};
    const FragmentList f = depth_peel(scene, test_camera());
    for (const auto& list : f.pixels) {
        ASSERT_EQ(list.size(), 2u);
        EXPECT_NEAR(list[0].depth, 1.0, 1e-12);
        EXPECT_NEAR(list[1].depth, 2.0, 1e-12);
        EXPECT_EQ(list[0].structure_index, 1);
        EXPECT_EQ(list[1].structure_index, 0);
    }
}

TEST(DepthPeel, MatchesFragmentSortOnRandomScenes) {
    std::mt19937 rng(2024);
    for (int trial = 0; trial < 20; ++trial) {
        const auto scene = oracle::random_scene(rng, 10);
        const Camera cam = test_camera(48);
        const CompositeImage peeled = composite_fragments(depth_peel(scene, cam));
        const CompositeImage sorted = oracle::fragment_sort_composite(scene, cam);
        EXPECT_LE(oracle::max_channel_diff(peeled, sorted), 1.0 / 255.0) << "trial " << trial;
    }
}

TEST(DepthPeel, ListsStrictlyIncreasingAndBounded) {
    std::mt19937 rng(99);
    const auto scene = oracle::random_scene(rng, 10);
    RenderOptions opt;
    opt.max_peel_passes = 2;
    const FragmentList f = depth_peel(scene, test_camera(), opt);
    for (const auto& list : f.pixels) {
        EXPECT_LE(list.size(), 2u);
        for (std::size_t k = 1; k < list.size(); ++k) EXPECT_GT(list[k].depth, list[k - 1].depth);
    }
}

TEST(CompositeFragments, Examples) {
    FragmentList f{3, 1, std::vector<std::vector<Fragment>>(3), 1, false};
    f.pixels[0] = {Fragment{1.0, 0, hue_color(Hue::Cyan), 1.0}, Fragment{2.0, 1, hue_color(Hue::Magenta), 1.0}};
    f.pixels[2] = {Fragment{1.0, 0, hue_color(Hue::Cyan), 0.5}};
    const CompositeImage img = composite_fragments(f);
    EXPECT_EQ(img.at(0, 0), ColorRgb(0, 0, 1));
    EXPECT_EQ(img.at(1, 0), ColorRgb::white());
    EXPECT_EQ(img.at(2, 0), ColorRgb(0.5, 1, 1));
}

TEST(CompositeFragments, UnsortedInputIsContractViolation) {
    FragmentList f{1, 1, std::vector<std::vector<Fragment>>(1), 1, false};
    f.pixels[0] = {Fragment{2.0, 0, hue_color(Hue::Cyan), 1.0}, Fragment{1.0, 1, hue_color(Hue::Magenta), 1.0}};
    EXPECT_THROW(composite_fragments(f), InternalError);
}

TEST(RenderStructureLayer, CyanSphereHasZeroRed) {
    const Structure s = make(icosphere(3), Hue::Cyan);
    const LayerImage layer = render_structure_layer(s, test_camera());
    int covered = 0;
    for (std::size_t i = 0; i < layer.color.size(); ++i) {
        if (layer.alpha[i] > 0.0) {
            ++covered;
            EXPECT_EQ(layer.color[i].r, 0.0);
        } else {
            EXPECT_EQ(layer.color[i], ColorRgb::white());
        }
    }
    EXPECT_GT(covered, 200);
    EXPECT_EQ(layer.alpha[32 * 64 + 32], 1.0);
}

TEST(RenderStructureLayer, BehindCameraIsTransparent) {
    const Structure s = make(icosphere(2, 1.0, Vec3(0, 0, 10)), Hue::Magenta);
    const LayerImage layer = render_structure_layer(s, test_camera());
    for (double a : layer.alpha) EXPECT_EQ(a, 0.0);
}

TEST(RenderStructureLayer, LayersMatchFragmentCompositeForSingleSurfaces) {
    // Disjoint depth ranges, one surface per structure: layers and peeling agree.
    const std::vector<Structure> scene{make(icosphere(2, 0.8, Vec3(0.3, 0, -1)), Hue::Cyan),
                                       make(facing_quad(1.0, 1.0), Hue::Magenta),
                                       make(icosphere(2, 0.5, Vec3(-0.4, 0.3, 2.5)), Hue::Yellow)};
    const Camera cam = test_camera();
    std::vector<LayerImage> layers;
    for (std::size_t s = 0; s < scene.size(); ++s) layers.push_back(render_structure_layer(scene[s], cam, int(s)));
    const CompositeImage from_layers = composite_layers(layers);
    const CompositeImage from_peel = composite_fragments(depth_peel(scene, cam));
    EXPECT_LE(oracle::max_channel_diff(from_layers, from_peel), 1e-12);
}

TEST(Render2d, NestedSpheresAreBlackWhereAllOverlap) {
    const std::vector<Structure> scene{make(icosphere(3, 0.4), Hue::Cyan), make(icosphere(3, 0.7), Hue::Magenta),
                                       make(icosphere(3, 1.0), Hue::Yellow)};
    const Camera cam = test_camera();
    const CompositeImage raw = composite_fragments(depth_peel(scene, cam));
    EXPECT_EQ(raw.at(32, 32), ColorRgb::black());
    const CompositeImage img = render_2d(scene, cam, 0.9);
    EXPECT_NEAR(img.at(32, 32).r, 0.1, 1e-12);
}

TEST(Render2d, SingleStructureEqualsItsLayer) {
    const std::vector<Structure> scene{make(icosphere(3), Hue::Yellow)};
    const Camera cam = test_camera();
    const CompositeImage img = render_2d(scene, cam, 1.0);
    const LayerImage layer = render_structure_layer(scene[0], cam);
    EXPECT_EQ(img, composite_layers(std::span<const LayerImage>(&layer, 1)));
}

TEST(Render2d, SceneLimits) {
    std::vector<Structure> four{make(icosphere(1), Hue::Cyan), make(icosphere(1), Hue::Magenta),
                                make(icosphere(1), Hue::Yellow), make(icosphere(1), Hue::Cyan)};
    EXPECT_THROW(render_2d(four, test_camera()), ConfigError);
    std::vector<Structure> dup{make(icosphere(1), Hue::Cyan), make(icosphere(1), Hue::Cyan)};
    EXPECT_THROW(render_2d(dup, test_camera()), ConfigError);
}

TEST(Render2d, FilterIsolationWithFullOpacity) {
    const std::vector<Structure> scene{make(icosphere(3, 0.6, Vec3(-0.3, 0, 0)), Hue::Cyan),
                                       make(icosphere(3, 0.6, Vec3(0.3, 0.2, 0)), Hue::Magenta),
                                       make(icosphere(3, 0.6, Vec3(0, -0.3, 0.2)), Hue::Yellow)};
    const Camera cam = test_camera();
    const CompositeImage img = composite_fragments(depth_peel(scene, cam));
    for (std::size_t s = 0; s < scene.size(); ++s) {
        const LayerImage cover = render_structure_layer(scene[s], cam);
        const CompositeImage filtered = filter_image(img, matched_filter(scene[s].hue));
        for (std::size_t i = 0; i < img.texels.size(); ++i)
            if (cover.alpha[i] > 0.0) EXPECT_EQ(filtered.texels[i], ColorRgb::black());
    }
}

TEST(Render2d, DeterministicUnderParallelism) {
    std::mt19937 rng(5);
    auto scene = oracle::random_scene(rng, 40);
    scene.push_back(make(icosphere(3, 0.7), Hue::Cyan));
    scene.erase(scene.begin());
    const Camera cam = test_camera(96);
    RenderOptions serial, parallel;
    parallel.threads = 4;
    EXPECT_EQ(composite_fragments(depth_peel(scene, cam, serial)), composite_fragments(depth_peel(scene, cam, parallel)));
}

TEST(Render2d, SupersampledMatchesNativeOnAverage) {
    const std::vector<Structure> scene{make(icosphere(3, 0.5), Hue::Cyan), make(icosphere(3, 0.9, Vec3(0.4, 0, -0.5)), Hue::Yellow)};
    const Camera native = test_camera(64);
    Camera doubled = native;
    doubled.width = doubled.height = 128;
    const CompositeImage a = render_2d(scene, native);
    const CompositeImage b = render_2d(scene, doubled);
    CompositeImage down(64, 64);
    for (int y = 0; y < 64; ++y)
        for (int x = 0; x < 64; ++x) {
            double acc[3] = {0, 0, 0};
            for (int dy = 0; dy < 2; ++dy)
                for (int dx = 0; dx < 2; ++dx)
                    for (int c = 0; c < 3; ++c) acc[c] += b.at(2 * x + dx, 2 * y + dy)[c] / 4.0;
            down.at(x, y) = ColorRgb(acc[0], acc[1], acc[2]);
        }
    EXPECT_LE(oracle::mean_abs_diff(a, down), 4.0 / 255.0);
}

TEST(Png, EncodeDecodeRoundTrip) {
    CompositeImage img(7, 5);
    img.at(3, 2) = ColorRgb(0.0, 0.5, 1.0);
    const Rgb8Image decoded = decode_png(encode_png(img));
    EXPECT_EQ(decoded.width, 7);
    EXPECT_EQ(decoded.height, 5);
    EXPECT_EQ(decoded.data, to_srgb8(img).data);
    EXPECT_EQ(encode_png(img), encode_png(img));
}
