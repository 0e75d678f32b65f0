#pragma once

#include "edutainer/papercraft/unfold.hpp"

namespace edutainer {

namespace detail {

struct ShelfPlacement {
    std::vector<Vec2> offset;  // top-left corner of each island in packing space (y down)
    bool fits = false;
};

// Shelf packing of boxes into a width x height container, tallest first, with
// `gutter` around and between all boxes.
inline ShelfPlacement shelf_pack(const std::vector<Vec2>& sizes, double gutter, double width = 1.0,
                                 double height = 1.0) {
    std::vector<int> order(sizes.size());
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return sizes[a].y() > sizes[b].y(); });
    ShelfPlacement out;
    out.offset.assign(sizes.size(), Vec2::Zero());
    double x = gutter, y = gutter, row = 0.0;
    for (int i : order) {
        const Vec2 s = sizes[i];
        if (x + s.x() + gutter > width && x > gutter) {
            y += row + gutter;
            x = gutter;
            row = 0.0;
        }
        if (x + s.x() + gutter > width || y + s.y() + gutter > height) return out;
        out.offset[i] = Vec2(x, y);
        x += s.x() + gutter;
        row = std::max(row, s.y());
    }
    out.fits = true;
    return out;
}

}  // namespace detail

// Packs the layout's islands into [0,1]^2 with one uniform scale and
// `gutter_texels` of empty space around every island at `resolution`.
inline PaperMesh assign_uv(const PaperMesh& paper, const PlanarLayout& layout, int resolution = 2048,
                           double gutter_texels = 2.0) {
    const std::size_t nt = paper.mesh.triangles.size();
    if (layout.source_triangles != nt || layout.location.size() != nt)
        throw InvalidArgument("assign_uv: layout does not belong to this paper mesh");
    std::vector<char> seen(nt, 0);
    for (const Island& is : layout.islands)
        for (const PlacedTriangle& p : is.triangles) {
            if (p.triangle < 0 || static_cast<std::size_t>(p.triangle) >= nt || seen[p.triangle])
                throw InvalidArgument("assign_uv: layout does not belong to this paper mesh");
            seen[p.triangle] = 1;
        }
    if (std::find(seen.begin(), seen.end(), 0) != seen.end())
        throw InvalidArgument("assign_uv: layout misses triangles of the paper mesh");
    if (resolution < 8) throw InvalidArgument("assign_uv: resolution too small");

    std::vector<Box2> boxes;
    double largest = 0.0;
    for (const Island& is : layout.islands) {
        Box2 b;
        for (const PlacedTriangle& p : is.triangles) b.expand(box_of(p.corners));
        boxes.push_back(b);
        largest = std::max({largest, b.extent().x(), b.extent().y()});
    }
    if (!(largest > 0.0)) throw InvalidArgument("assign_uv: layout has zero extent");

    const double gutter = gutter_texels / resolution;
    auto sizes_at = [&](double s) {
        std::vector<Vec2> sizes;
        for (const Box2& b : boxes) sizes.push_back(s * b.extent());
        return sizes;
    };
    double lo = 0.0, hi = (1.0 - 2.0 * gutter) / largest;
    if (!detail::shelf_pack(sizes_at(lo), gutter).fits)
        throw InvalidArgument("assign_uv: too many islands for the atlas resolution");
    if (detail::shelf_pack(sizes_at(hi), gutter).fits) {
        lo = hi;
    } else {
        for (int it = 0; it < 60; ++it) {
            const double mid = 0.5 * (lo + hi);
            (detail::shelf_pack(sizes_at(mid), gutter).fits ? lo : hi) = mid;
        }
    }
    const double scale = lo;
    const detail::ShelfPlacement placement = detail::shelf_pack(sizes_at(scale), gutter);

    PaperMesh out = paper;
    out.uv.assign(nt, UvTriangle{});
    for (std::size_t i = 0; i < layout.islands.size(); ++i) {
        const Box2& b = boxes[i];
        const Vec2 off = placement.offset[i];
        for (const PlacedTriangle& p : layout.islands[i].triangles)
            for (int k = 0; k < 3; ++k) {
                const Vec2 q = p.corners[k];
                out.uv[p.triangle][k] = Vec2(off.x() + scale * (q.x() - b.min.x()),
                                             1.0 - (off.y() + scale * (b.max.y() - q.y())));
            }
    }
    return out;
}

}  // namespace edutainer
