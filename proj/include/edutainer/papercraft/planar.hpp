#pragma once

#include "edutainer/math.hpp"

#include <array>
#include <vector>

namespace edutainer {

using Triangle2 = std::array<Vec2, 3>;

struct Box2 {
    Vec2 min = Vec2::Constant(std::numeric_limits<double>::infinity());
    Vec2 max = Vec2::Constant(-std::numeric_limits<double>::infinity());

    void expand(const Vec2& p) {
        min = min.cwiseMin(p);
        max = max.cwiseMax(p);
    }
    void expand(const Box2& b) {
        expand(b.min);
        expand(b.max);
    }
    bool valid() const { return min.x() <= max.x() && min.y() <= max.y(); }
    Vec2 extent() const { return valid() ? Vec2(max - min) : Vec2::Zero(); }
    bool overlaps(const Box2& o) const {
        return min.x() <= o.max.x() && o.min.x() <= max.x() && min.y() <= o.max.y() && o.min.y() <= max.y();
    }
};

inline Box2 box_of(const Triangle2& t) {
    Box2 b;
    for (const Vec2& p : t) b.expand(p);
    return b;
}

inline double signed_area(const Triangle2& t) { return 0.5 * orient2d(t[0], t[1], t[2]); }

inline double polygon_area(const std::vector<Vec2>& poly) {
    double a = 0.0;
    for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
    return 0.5 * a;
}

// Area of the intersection of two triangles (either winding), by clipping one
// against the half-planes of the other.
inline double intersection_area(const Triangle2& p, const Triangle2& q) {
    if (!box_of(p).overlaps(box_of(q))) return 0.0;
    Triangle2 clip = q;
    if (signed_area(clip) < 0.0) std::swap(clip[1], clip[2]);
    std::vector<Vec2> poly(p.begin(), p.end());
    for (int e = 0; e < 3 && !poly.empty(); ++e) {
        const Vec2 a = clip[e], b = clip[(e + 1) % 3];
        std::vector<Vec2> out;
        for (std::size_t i = 0; i < poly.size(); ++i) {
            const Vec2& c = poly[i];
            const Vec2& d = poly[(i + 1) % poly.size()];
            const double sc = orient2d(a, b, c), sd = orient2d(a, b, d);
            if (sc >= 0.0) out.push_back(c);
            if ((sc >= 0.0) != (sd >= 0.0)) out.push_back(c + (sc / (sc - sd)) * (d - c));
        }
        poly = std::move(out);
    }
    return poly.size() < 3 ? 0.0 : std::abs(polygon_area(poly));
}

}  // namespace edutainer
