#include "edutainer/color/image.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace edutainer;

namespace {

const ColorRgb kCyan = hue_color(Hue::Cyan);
const ColorRgb kMagenta = hue_color(Hue::Magenta);
const ColorRgb kYellow = hue_color(Hue::Yellow);

void expect_color(const ColorRgb& got, const ColorRgb& want, double tol = 0.0) {
    EXPECT_NEAR(got.r, want.r, tol);
    EXPECT_NEAR(got.g, want.g, tol);
    EXPECT_NEAR(got.b, want.b, tol);
}

ColorRgb random_color(std::mt19937& rng) {
    std::uniform_real_distribution<double> u(0.0, 1.0);
    return {u(rng), u(rng), u(rng)};
}

}  // namespace

TEST(Composite, SubtractivePrimaries) {
    EXPECT_EQ(composite({kCyan, kMagenta}), ColorRgb(0, 0, 1));
    EXPECT_EQ(composite({kCyan, kYellow}), ColorRgb(0, 1, 0));
    EXPECT_EQ(composite({kMagenta, kYellow}), ColorRgb(1, 0, 0));
    EXPECT_EQ(composite({kCyan, kMagenta, kYellow}), ColorRgb::black());
    EXPECT_EQ(composite(std::span<const ColorRgb>()), ColorRgb::white());
}

TEST(Composite, AlgebraicProperties) {
    std::mt19937 rng(3);
    for (int i = 0; i < 200; ++i) {
        const ColorRgb a = random_color(rng), b = random_color(rng), c = random_color(rng);
        expect_color(composite({a, b}), composite({b, a}));
        expect_color(composite({composite({a, b}), c}), composite({a, composite({b, c})}), 1e-15);
        expect_color(composite({a, ColorRgb::white()}), a);
        const ColorRgb ab = composite({a, b});
        for (int ch = 0; ch < 3; ++ch) {
            EXPECT_LE(ab[ch], a[ch]);
            EXPECT_LE(ab[ch], b[ch]);
        }
        for (FilterKind f : kAllFilters) {
            const int p = pass_channel(f);
            EXPECT_EQ(apply_filter(ab, f)[p], a[p] * b[p]);
        }
    }
}

TEST(BlendWithOpacity, Examples) {
    expect_color(blend_with_opacity(ColorRgb::white(), Hue::Cyan, 1.0), ColorRgb(0, 1, 1));
    expect_color(blend_with_opacity(ColorRgb::white(), Hue::Cyan, 0.5), ColorRgb(0.5, 1, 1));
    expect_color(blend_with_opacity(ColorRgb(0, 1, 1), Hue::Yellow, 1.0), ColorRgb(0, 1, 0));
    EXPECT_THROW(blend_with_opacity(ColorRgb::white(), Hue::Cyan, 1.5), InvalidArgument);
    EXPECT_THROW(blend_with_opacity(ColorRgb::white(), Hue::Cyan, -0.1), InvalidArgument);
}

TEST(BlendWithOpacity, ReducesToCompositeAtFullAlphaAndIdentityAtZero) {
    std::mt19937 rng(5);
    for (int i = 0; i < 100; ++i) {
        const ColorRgb base = random_color(rng);
        for (Hue h : kAllHues) {
            expect_color(blend_with_opacity(base, h, 1.0), composite({base, hue_color(h)}), 1e-15);
            expect_color(blend_with_opacity(base, h, 0.0), base);
        }
    }
}

TEST(ApplyFilter, Examples) {
    EXPECT_EQ(apply_filter(kCyan, FilterKind::Red), ColorRgb::black());
    EXPECT_EQ(apply_filter(kYellow, FilterKind::Blue), ColorRgb::black());
    EXPECT_EQ(apply_filter(ColorRgb::white(), FilterKind::Red), ColorRgb(1, 0, 0));
}

TEST(ApplyFilter, MatchedFilterIsolation) {
    for (Hue h : kAllHues) {
        EXPECT_EQ(matched_hue(matched_filter(h)), h);
        EXPECT_EQ(apply_filter(hue_color(h), matched_filter(h)), ColorRgb::black());
        for (FilterKind f : kAllFilters)
            if (f != matched_filter(h)) EXPECT_EQ(apply_filter(hue_color(h), f), filter_color(f));
    }
}

TEST(ApplyFilter, IdempotentAndPreservesPassChannel) {
    std::mt19937 rng(9);
    for (int i = 0; i < 100; ++i) {
        const ColorRgb c = random_color(rng);
        for (FilterKind f : kAllFilters) {
            const ColorRgb once = apply_filter(c, f);
            EXPECT_EQ(apply_filter(once, f), once);
            EXPECT_EQ(once[pass_channel(f)], c[pass_channel(f)]);
        }
    }
}

TEST(FilterImage, WhiteFieldAndCyanDisc) {
    CompositeImage img(32, 32);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x)
            if ((x - 16) * (x - 16) + (y - 16) * (y - 16) < 64) img.at(x, y) = kCyan;
    const CompositeImage red = filter_image(img, FilterKind::Red);
    for (int y = 0; y < 32; ++y)
        for (int x = 0; x < 32; ++x) {
            const bool disc = (x - 16) * (x - 16) + (y - 16) * (y - 16) < 64;
            EXPECT_EQ(red.at(x, y), disc ? ColorRgb::black() : ColorRgb(1, 0, 0));
        }
    EXPECT_EQ(filter_image(red, FilterKind::Red), red);
    const CompositeImage white_red = filter_image(CompositeImage(4, 4), FilterKind::Red);
    for (const ColorRgb& c : white_red.texels) EXPECT_EQ(c, ColorRgb(1, 0, 0));
}

TEST(Brighten, Examples) {
    const CompositeImage white(8, 8);
    EXPECT_EQ(brighten(white, 0.9), white);

    CompositeImage one_black(4, 4);
    one_black.at(1, 2) = ColorRgb::black();
    const CompositeImage out = brighten(one_black, 0.9);
    expect_color(out.at(1, 2), ColorRgb(0.1, 0.1, 0.1), 1e-15);
    EXPECT_EQ(out.at(0, 0), ColorRgb::white());

    CompositeImage light(4, 4, ColorRgb(0.2, 0.5, 1.0));  // max ink 0.8
    EXPECT_EQ(brighten(light, 0.9), light);

    EXPECT_THROW(brighten(white, 0.0), InvalidArgument);
    EXPECT_THROW(brighten(white, 1.1), InvalidArgument);
}

// Property: brightening never adds ink and keeps per-texel ink ratios.
TEST(Brighten, NeverDarkensAndKeepsInkRatios) {
    std::mt19937 rng(11);
    CompositeImage img(16, 16);
    for (ColorRgb& c : img.texels) c = random_color(rng);
    img.texels[3] = ColorRgb::black();
    for (double target : {0.3, 0.6, 0.9, 1.0}) {
        const CompositeImage out = brighten(img, target);
        for (std::size_t i = 0; i < img.texels.size(); ++i) {
            double ratio = -1.0;
            for (int ch = 0; ch < 3; ++ch) {
                const double before = 1.0 - img.texels[i][ch], after = 1.0 - out.texels[i][ch];
                EXPECT_LE(after, before + 1e-15);
                EXPECT_LE(after, target + 1e-12);
                if (before > 1e-9) {
                    const double r = after / before;
                    if (ratio < 0.0) ratio = r;
                    EXPECT_NEAR(r, ratio, 1e-6);
                } else {
                    EXPECT_NEAR(after, 0.0, 1e-15);
                }
            }
        }
    }
}
