#pragma once

#include "edutainer/papercraft/texture.hpp"
#include "edutainer/papercraft/uv_atlas.hpp"
#include "edutainer/render/png.hpp"

#include <cstdio>
#include <string>

namespace edutainer {

struct PageSpec {
    double width_mm = 210.0;
    double height_mm = 297.0;
    double margin_mm = 10.0;
    double scale = 0.0;  // millimetres per model unit; 0 picks the largest scale that fits
    bool auto_scale = true;
    double island_gap_mm = 4.0;
};

struct PrintSheet {
    std::string svg;
    double scale = 0.0;  // millimetres per model unit actually used
    int textured_triangles = 0;
    int fold_lines = 0;
    int cut_segments = 0;  // straight boundary segments, excluding those replaced by tabs
    int tabs = 0;
    int labels = 0;  // label texts (two per cut edge)
};

namespace detail {

inline std::string fmt_mm(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", std::abs(v) < 5e-5 ? 0.0 : v);
    return buf;
}

inline std::string base64(std::string_view data) {
    static constexpr char table[] = "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";
    std::string out;
    out.reserve((data.size() + 2) / 3 * 4);
    for (std::size_t i = 0; i < data.size(); i += 3) {
        auto byte = [&](std::size_t k) { return k < data.size() ? unsigned(static_cast<unsigned char>(data[k])) : 0u; };
        const unsigned v = (byte(i) << 16) | (byte(i + 1) << 8) | byte(i + 2);
        out += table[(v >> 18) & 63];
        out += table[(v >> 12) & 63];
        out += i + 1 < data.size() ? table[(v >> 6) & 63] : '=';
        out += i + 2 < data.size() ? table[v & 63] : '=';
    }
    return out;
}

struct SheetPlacement {
    std::vector<Box2> boxes;   // island bounds including tabs, layout units
    std::vector<Vec2> offset;  // top-left of each island on the page, mm
    bool fits = false;
};

inline SheetPlacement place_islands(const PlanarLayout& layout, const PageSpec& page, double s) {
    PlanarLayout tabbed = layout;
    build_tabs(tabbed, s);
    SheetPlacement out;
    out.boxes.resize(layout.islands.size());
    for (std::size_t i = 0; i < layout.islands.size(); ++i)
        for (const PlacedTriangle& p : layout.islands[i].triangles) out.boxes[i].expand(box_of(p.corners));
    for (const Tab& t : tabbed.tabs)
        for (const Vec2& q : t.outline) out.boxes[layout.location[t.triangle].first].expand(q);
    std::vector<Vec2> sizes;
    for (const Box2& b : out.boxes) sizes.push_back(s * b.extent());
    const double gap = page.island_gap_mm;
    const ShelfPlacement packed = shelf_pack(sizes, gap, page.width_mm - 2.0 * page.margin_mm + 2.0 * gap,
                                             page.height_mm - 2.0 * page.margin_mm + 2.0 * gap);
    out.fits = packed.fits;
    out.offset = packed.offset;
    for (Vec2& o : out.offset) o += Vec2::Constant(page.margin_mm - gap);
    return out;
}

inline double largest_fitting_scale(const PlanarLayout& layout, const PageSpec& page) {
    double largest = 0.0;
    for (const Island& is : layout.islands) {
        Box2 b;
        for (const PlacedTriangle& p : is.triangles) b.expand(box_of(p.corners));
        largest = std::max({largest, b.extent().x(), b.extent().y()});
    }
    if (!(largest > 0.0)) throw InvalidArgument("layout_to_print_sheet: layout has zero extent");
    double lo = 0.0, hi = std::min(page.width_mm, page.height_mm) / largest;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (lo + hi);
        (place_islands(layout, page, mid).fits ? lo : hi) = mid;
    }
    return lo;
}

// Affine map taking the atlas image (pixel units, y down) onto the sheet triangle.
inline std::array<double, 6> texel_to_sheet(const Triangle2& texel, const Triangle2& sheet) {
    Eigen::Matrix3d m;
    Eigen::Matrix<double, 3, 2> rhs;
    for (int k = 0; k < 3; ++k) {
        m.row(k) << texel[k].x(), texel[k].y(), 1.0;
        rhs.row(k) << sheet[k].x(), sheet[k].y();
    }
    const Eigen::Matrix<double, 3, 2> sol = m.fullPivLu().solve(rhs);
    return {sol(0, 0), sol(0, 1), sol(1, 0), sol(1, 1), sol(2, 0), sol(2, 1)};
}

}  // namespace detail

// SVG 1.1 print sheet in millimetres with top-level layers `texture`, `fold`
// and `cut`. The atlas is embedded once and clipped per triangle.
inline PrintSheet layout_to_print_sheet(const PlanarLayout& layout, const TextureAtlas& atlas,
                                        const PageSpec& page = {}) {
    if (atlas.mapping.size() != layout.source_triangles)
        throw InvalidArgument("layout_to_print_sheet: atlas does not match the layout");
    if (!(page.width_mm > 2.0 * page.margin_mm && page.height_mm > 2.0 * page.margin_mm))
        throw InvalidArgument("layout_to_print_sheet: margins leave no printable area");

    double s = page.scale;
    if (s > 0.0 && !detail::place_islands(layout, page, s).fits) {
        const double fit = detail::largest_fitting_scale(layout, page);
        if (!page.auto_scale)
            throw LayoutError(fit, "layout_to_print_sheet: net does not fit the page at " + detail::fmt_mm(s) +
                                       " mm/unit; largest fitting scale is " + detail::fmt_mm(fit));
        s = fit;
    } else if (!(s > 0.0)) {
        s = detail::largest_fitting_scale(layout, page);
    }
    if (!(s > 0.0)) throw LayoutError(0.0, "layout_to_print_sheet: net cannot be placed on the page");

    PlanarLayout tabbed = layout;
    tabbed.scale = s;
    build_tabs(tabbed, s);
    const detail::SheetPlacement place = detail::place_islands(layout, page, s);

    auto to_sheet = [&](int island, const Vec2& p) {
        const Box2& b = place.boxes[island];
        return Vec2(place.offset[island].x() + s * (p.x() - b.min.x()),
                    place.offset[island].y() + s * (b.max.y() - p.y()));
    };
    auto sheet_triangle = [&](int t) {
        const auto [island, slot] = layout.location[t];
        const Triangle2& c = layout.islands[island].triangles[slot].corners;
        return Triangle2{to_sheet(island, c[0]), to_sheet(island, c[1]), to_sheet(island, c[2])};
    };
    auto pt = [](const Vec2& p) { return detail::fmt_mm(p.x()) + "," + detail::fmt_mm(p.y()); };

    PrintSheet sheet;
    sheet.scale = s;
    std::string& o = sheet.svg;
    o += "<?xml version=\"1.0\" encoding=\"UTF-8\" standalone=\"no\"?>\n";
    o += "<svg xmlns=\"http://www.w3.org/2000/svg\" xmlns:xlink=\"http://www.w3.org/1999/xlink\" version=\"1.1\" ";
    o += "width=\"" + detail::fmt_mm(page.width_mm) + "mm\" height=\"" + detail::fmt_mm(page.height_mm) + "mm\" ";
    o += "viewBox=\"0 0 " + detail::fmt_mm(page.width_mm) + " " + detail::fmt_mm(page.height_mm) + "\">\n";
    o += "<defs>\n";
    o += "<image id=\"atlas\" x=\"0\" y=\"0\" width=\"" + std::to_string(atlas.resolution) + "\" height=\"" +
         std::to_string(atlas.resolution) + "\" preserveAspectRatio=\"none\" xlink:href=\"data:image/png;base64,";
    o += detail::base64(encode_png(atlas.image));
    o += "\"/>\n";
    const int nt = static_cast<int>(layout.source_triangles);
    for (int t = 0; t < nt; ++t) {
        const Triangle2 q = sheet_triangle(t);
        o += "<clipPath id=\"clip-t" + std::to_string(t) + "\"><polygon points=\"" + pt(q[0]) + " " + pt(q[1]) + " " +
             pt(q[2]) + "\"/></clipPath>\n";
    }
    o += "</defs>\n";

    // Texture layer, with the mating labels printed on top.
    o += "<g id=\"texture\">\n";
    for (int t = 0; t < nt; ++t) {
        const auto m = detail::texel_to_sheet(uv_to_texel_space(atlas.mapping[t], atlas.resolution), sheet_triangle(t));
        o += "<g clip-path=\"url(#clip-t" + std::to_string(t) + ")\" data-triangle=\"" + std::to_string(t) +
             "\"><use xlink:href=\"#atlas\" transform=\"matrix(";
        for (int k = 0; k < 6; ++k) {
            char buf[40];
            std::snprintf(buf, sizeof buf, "%.9g", m[k]);
            o += buf;
            if (k < 5) o += ' ';
        }
        o += ")\"/></g>\n";
        ++sheet.textured_triangles;
    }
    o += "<g class=\"labels\" font-family=\"sans-serif\" text-anchor=\"middle\" dominant-baseline=\"central\" "
         "fill=\"#000000\">\n";
    for (const LayoutEdge& e : tabbed.edges) {
        if (e.kind != EdgeKind::Cut) continue;
        for (int side = 0; side < 2; ++side) {
            const int t = e.faces[side], k = e.sides[side];
            const Triangle2 q = sheet_triangle(t);
            const Vec2 a = q[k], b = q[(k + 1) % 3], c = q[(k + 2) % 3];
            const Vec2 mid = 0.5 * (a + b);
            const double len = (b - a).norm();
            const double inward = std::min(2.5, 0.25 * (c - mid).norm());
            const Vec2 at = mid + inward * (c - mid).normalized();
            const double size = std::clamp(0.25 * len, 0.5, 3.0);
            o += "<text x=\"" + detail::fmt_mm(at.x()) + "\" y=\"" + detail::fmt_mm(at.y()) + "\" font-size=\"" +
                 detail::fmt_mm(size) + "\" data-edge=\"" + std::to_string(&e - tabbed.edges.data()) + "\">" +
                 std::to_string(e.label) + "</text>\n";
            ++sheet.labels;
        }
    }
    o += "</g>\n</g>\n";

    o += "<g id=\"fold\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.2\">\n";
    for (const LayoutEdge& e : tabbed.edges) {
        if (e.kind != EdgeKind::Fold) continue;
        const Triangle2 q = sheet_triangle(e.faces[0]);
        const Vec2 a = q[e.sides[0]], b = q[(e.sides[0] + 1) % 3];
        const bool mountain = e.direction == FoldDirection::Mountain;
        o += "<line class=\"" + std::string(mountain ? "mountain" : "valley") + "\" x1=\"" + detail::fmt_mm(a.x()) +
             "\" y1=\"" + detail::fmt_mm(a.y()) + "\" x2=\"" + detail::fmt_mm(b.x()) + "\" y2=\"" +
             detail::fmt_mm(b.y()) + "\" stroke-dasharray=\"" + (mountain ? "3,1,0.6,1" : "1.5,1.5") + "\"/>\n";
        ++sheet.fold_lines;
    }
    o += "</g>\n";

    o += "<g id=\"cut\" fill=\"none\" stroke=\"#000000\" stroke-width=\"0.25\">\n";
    std::vector<const Tab*> tab_of(tabbed.edges.size(), nullptr);
    for (const Tab& tab : tabbed.tabs) tab_of[tab.edge] = &tab;
    for (std::size_t ei = 0; ei < tabbed.edges.size(); ++ei) {
        const LayoutEdge& e = tabbed.edges[ei];
        if (e.kind != EdgeKind::Cut) continue;
        for (int side = 0; side < 2; ++side) {
            const int t = e.faces[side], k = e.sides[side];
            const int island = layout.location[t].first;
            const Tab* tab = tab_of[ei];
            if (tab && tab->triangle == t && tab->side == k) {
                o += "<polyline class=\"tab\" data-edge=\"" + std::to_string(ei) + "\" points=\"" +
                     pt(to_sheet(island, tab->outline[0])) + " " + pt(to_sheet(island, tab->outline[3])) + " " +
                     pt(to_sheet(island, tab->outline[2])) + " " + pt(to_sheet(island, tab->outline[1])) + "\"/>\n";
                ++sheet.tabs;
            } else {
                const Triangle2 q = sheet_triangle(t);
                o += "<line class=\"edge\" data-edge=\"" + std::to_string(ei) + "\" x1=\"" +
                     detail::fmt_mm(q[k].x()) + "\" y1=\"" + detail::fmt_mm(q[k].y()) + "\" x2=\"" +
                     detail::fmt_mm(q[(k + 1) % 3].x()) + "\" y2=\"" + detail::fmt_mm(q[(k + 1) % 3].y()) + "\"/>\n";
                ++sheet.cut_segments;
            }
        }
    }
    o += "</g>\n</svg>\n";
    return sheet;
}

// Plain-text assembly notes: glue pairings and fold directions.
inline std::string assembly_instructions(const PlanarLayout& layout) {
    std::string o;
    o += "islands " + std::to_string(layout.islands.size()) + "\n";
    for (std::size_t i = 0; i < layout.islands.size(); ++i) {
        o += "island " + std::to_string(i) + ":";
        for (const PlacedTriangle& p : layout.islands[i].triangles) o += " " + std::to_string(p.triangle);
        o += "\n";
    }
    o += "\ntabs (glue the flap onto the edge with the same label)\n";
    std::vector<int> tab_face(layout.edges.size(), -1);
    for (const Tab& t : layout.tabs) tab_face[t.edge] = t.triangle;
    for (std::size_t e = 0; e < layout.edges.size(); ++e) {
        const LayoutEdge& le = layout.edges[e];
        if (le.kind != EdgeKind::Cut) continue;
        const int with_tab = tab_face[e] >= 0 ? tab_face[e] : le.faces[0];
        const int mate = with_tab == le.faces[0] ? le.faces[1] : le.faces[0];
        o += "label " + std::to_string(le.label) + ": edge " + std::to_string(e) + " (vertices " +
             std::to_string(le.v0) + "-" + std::to_string(le.v1) + "), tab on triangle " + std::to_string(with_tab) +
             ", glue to triangle " + std::to_string(mate) + "\n";
    }
    o += "\nfolds\n";
    for (std::size_t e = 0; e < layout.edges.size(); ++e) {
        const LayoutEdge& le = layout.edges[e];
        if (le.kind != EdgeKind::Fold) continue;
        o += "edge " + std::to_string(e) + " (triangles " + std::to_string(le.faces[0]) + "-" +
             std::to_string(le.faces[1]) + "): " + (le.direction == FoldDirection::Mountain ? "mountain" : "valley") +
             "\n";
    }
    return o;
}

}  // namespace edutainer
