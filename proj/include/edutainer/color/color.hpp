#pragma once

#include "edutainer/error.hpp"

#include <algorithm>
#include <array>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>

namespace edutainer {

// Linear reflectance; white paper is (1, 1, 1).
struct ColorRgb {
    double r = 1.0, g = 1.0, b = 1.0;

    constexpr ColorRgb() = default;
    constexpr ColorRgb(double r_, double g_, double b_)
        : r(std::clamp(r_, 0.0, 1.0)), g(std::clamp(g_, 0.0, 1.0)), b(std::clamp(b_, 0.0, 1.0)) {}

    constexpr double operator[](int c) const { return c == 0 ? r : (c == 1 ? g : b); }
    constexpr double& channel(int c) { return c == 0 ? r : (c == 1 ? g : b); }

    static constexpr ColorRgb white() { return {1.0, 1.0, 1.0}; }
    static constexpr ColorRgb black() { return {0.0, 0.0, 0.0}; }

    friend constexpr bool operator==(const ColorRgb&, const ColorRgb&) = default;
};

enum class Hue { Cyan, Magenta, Yellow };
enum class FilterKind { Red, Green, Blue };

inline constexpr std::array<Hue, 3> kAllHues{Hue::Cyan, Hue::Magenta, Hue::Yellow};
inline constexpr std::array<FilterKind, 3> kAllFilters{FilterKind::Red, FilterKind::Green, FilterKind::Blue};

// The additive channel a hue absorbs: Cyan -> R, Magenta -> G, Yellow -> B.
constexpr int absorbed_channel(Hue h) { return static_cast<int>(h); }

// The single channel a filter transmits.
constexpr int pass_channel(FilterKind f) { return static_cast<int>(f); }

constexpr ColorRgb hue_color(Hue h) {
    switch (h) {
        case Hue::Cyan: return {0.0, 1.0, 1.0};
        case Hue::Magenta: return {1.0, 0.0, 1.0};
        case Hue::Yellow: return {1.0, 1.0, 0.0};
    }
    return ColorRgb::white();
}

constexpr ColorRgb filter_color(FilterKind f) {
    switch (f) {
        case FilterKind::Red: return {1.0, 0.0, 0.0};
        case FilterKind::Green: return {0.0, 1.0, 0.0};
        case FilterKind::Blue: return {0.0, 0.0, 1.0};
    }
    return ColorRgb::black();
}

// The filter under which a hue turns black (red <-> cyan, green <-> magenta, blue <-> yellow).
constexpr FilterKind matched_filter(Hue h) { return static_cast<FilterKind>(absorbed_channel(h)); }
constexpr Hue matched_hue(FilterKind f) { return static_cast<Hue>(pass_channel(f)); }

inline std::string_view to_string(Hue h) {
    switch (h) {
        case Hue::Cyan: return "cyan";
        case Hue::Magenta: return "magenta";
        case Hue::Yellow: return "yellow";
    }
    return "?";
}

inline std::string_view to_string(FilterKind f) {
    switch (f) {
        case FilterKind::Red: return "red";
        case FilterKind::Green: return "green";
        case FilterKind::Blue: return "blue";
    }
    return "?";
}

inline std::optional<Hue> parse_hue(std::string_view s) {
    for (Hue h : kAllHues)
        if (to_string(h) == s) return h;
    return std::nullopt;
}

inline std::optional<FilterKind> parse_filter(std::string_view s) {
    for (FilterKind f : kAllFilters)
        if (to_string(f) == s) return f;
    return std::nullopt;
}

// Channel-wise product; the empty product is white.
inline ColorRgb composite(std::span<const ColorRgb> colors) {
    ColorRgb out = ColorRgb::white();
    for (const ColorRgb& c : colors) out = ColorRgb(out.r * c.r, out.g * c.g, out.b * c.b);
    return out;
}

inline ColorRgb composite(std::initializer_list<ColorRgb> colors) {
    return composite(std::span<const ColorRgb>(colors.begin(), colors.size()));
}

// Lays `ink` over `base` with coverage alpha: base * (1 - alpha * (1 - ink)) per channel.
inline ColorRgb blend_with_opacity(const ColorRgb& base, const ColorRgb& ink, double alpha) {
    if (!(alpha >= 0.0 && alpha <= 1.0)) throw InvalidArgument("blend_with_opacity: alpha outside [0,1]");
    return {base.r * (1.0 - alpha * (1.0 - ink.r)), base.g * (1.0 - alpha * (1.0 - ink.g)),
            base.b * (1.0 - alpha * (1.0 - ink.b))};
}

inline ColorRgb blend_with_opacity(const ColorRgb& base, Hue ink, double alpha) {
    return blend_with_opacity(base, hue_color(ink), alpha);
}

// What a lens of kind `f` transmits: the pass channel, everything else dark.
inline ColorRgb apply_filter(const ColorRgb& c, FilterKind f) {
    ColorRgb out = ColorRgb::black();
    out.channel(pass_channel(f)) = c[pass_channel(f)];
    return out;
}

}  // namespace edutainer
