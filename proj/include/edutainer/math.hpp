#pragma once

#include <Eigen/Core>
#include <Eigen/Geometry>

#include <algorithm>
#include <array>
#include <cmath>

namespace edutainer {

using Vec2 = Eigen::Vector2d;
using Vec3 = Eigen::Vector3d;

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

// Twice the signed area of the 2D triangle (a, b, c); positive when counter-clockwise.
inline double orient2d(const Vec2& a, const Vec2& b, const Vec2& c) { return cross2(b - a, c - a); }

inline double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
    return 0.5 * (b - a).cross(c - a).norm();
}

inline double triangle_area(const Vec2& a, const Vec2& b, const Vec2& c) {
    return 0.5 * std::abs(orient2d(a, b, c));
}

inline Vec3 triangle_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
    Vec3 n = (b - a).cross(c - a);
    const double len = n.norm();
    return len > 0.0 ? Vec3(n / len) : Vec3::Zero();
}

}  // namespace edutainer
