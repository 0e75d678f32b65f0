#pragma once

#include "edutainer/color/color.hpp"

#include <cstdint>
#include <vector>

namespace edutainer {

// Row-major RGB image, row 0 at the top.
struct CompositeImage {
    int width = 0, height = 0;
    std::vector<ColorRgb> texels;

    CompositeImage() = default;
    CompositeImage(int w, int h, ColorRgb fill = ColorRgb::white())
        : width(w), height(h), texels(static_cast<std::size_t>(w) * h, fill) {}

    ColorRgb& at(int x, int y) { return texels[static_cast<std::size_t>(y) * width + x]; }
    const ColorRgb& at(int x, int y) const { return texels[static_cast<std::size_t>(y) * width + x]; }

    friend bool operator==(const CompositeImage&, const CompositeImage&) = default;
};

// A single structure rendered alone. Uncovered texels are white with alpha 0.
struct LayerImage {
    int width = 0, height = 0;
    int structure_index = -1;
    std::vector<ColorRgb> color;
    std::vector<double> alpha;

    LayerImage() = default;
    LayerImage(int w, int h, int structure)
        : width(w), height(h), structure_index(structure),
          color(static_cast<std::size_t>(w) * h, ColorRgb::white()), alpha(static_cast<std::size_t>(w) * h, 0.0) {}
};

inline CompositeImage filter_image(const CompositeImage& image, FilterKind f) {
    CompositeImage out = image;
    for (ColorRgb& c : out.texels) c = apply_filter(c, f);
    return out;
}

// Rescales ink (1 - reflectance) so the densest channel anywhere is at most
// `target_max_density`. Ink proportions within each texel are preserved.
inline CompositeImage brighten(const CompositeImage& image, double target_max_density = 0.9) {
    if (!(target_max_density > 0.0 && target_max_density <= 1.0))
        throw InvalidArgument("brighten: target_max_density must be in (0,1]");
    double densest = 0.0;
    for (const ColorRgb& c : image.texels) densest = std::max({densest, 1.0 - c.r, 1.0 - c.g, 1.0 - c.b});
    if (densest <= target_max_density) return image;
    const double k = target_max_density / densest;
    CompositeImage out = image;
    for (ColorRgb& c : out.texels) c = ColorRgb(1.0 - k * (1.0 - c.r), 1.0 - k * (1.0 - c.g), 1.0 - k * (1.0 - c.b));
    return out;
}

// Composites layers over white: product of blend_with_opacity per layer.
inline CompositeImage composite_layers(std::span<const LayerImage> layers, ColorRgb background = ColorRgb::white()) {
    if (layers.empty()) return {};
    CompositeImage out(layers[0].width, layers[0].height, background);
    for (const LayerImage& l : layers)
        for (std::size_t i = 0; i < out.texels.size(); ++i)
            out.texels[i] = blend_with_opacity(out.texels[i], l.color[i], l.alpha[i]);
    return out;
}

}  // namespace edutainer
