#pragma once

#include "edutainer/mesh/closest_point.hpp"
#include "edutainer/mesh/triangle_mesh.hpp"

#include <memory>
#include <numeric>

namespace edutainer {

struct SurfaceHit {
    Vec3 point = Vec3::Zero();
    int structure_index = -1;
    int triangle_index = -1;
    double distance = std::numeric_limits<double>::infinity();
};

// Bounding-volume hierarchy over the triangles of one or more structures,
// answering closest-surface-point queries. Immutable after construction;
// concurrent queries are safe.
class SurfaceIndex {
public:
    explicit SurfaceIndex(std::span<const TriangleMesh> structures) {
        if (structures.empty()) throw InvalidArgument("closest_surface_point: empty structure list");
        for (std::size_t s = 0; s < structures.size(); ++s) {
            const TriangleMesh& m = structures[s];
            if (m.empty()) throw InvalidArgument("closest_surface_point: structure " + std::to_string(s) + " is empty");
            for (std::size_t t = 0; t < m.triangles.size(); ++t) {
                prims_.push_back(Prim{m.corner(t, 0), m.corner(t, 1), m.corner(t, 2), static_cast<int>(s),
                                      static_cast<int>(t), Vec3::Zero()});
                prims_.back().centroid = (prims_.back().a + prims_.back().b + prims_.back().c) / 3.0;
                bounds_.expand(prims_.back().a);
                bounds_.expand(prims_.back().b);
                bounds_.expand(prims_.back().c);
            }
        }
        order_.resize(prims_.size());
        std::iota(order_.begin(), order_.end(), 0);
        nodes_.reserve(2 * prims_.size());
        build(0, static_cast<int>(prims_.size()));
    }

    explicit SurfaceIndex(const TriangleMesh& single) : SurfaceIndex(std::span<const TriangleMesh>(&single, 1)) {}

    const Aabb& bounds() const noexcept { return bounds_; }
    std::size_t primitive_count() const noexcept { return prims_.size(); }

    // Nearest surface point. Exact ties go to the lowest (structure, triangle) pair.
    SurfaceHit closest(const Vec3& query) const {
        Best best;
        visit(0, query, best);
        SurfaceHit hit;
        hit.point = best.point;
        hit.structure_index = best.structure;
        hit.triangle_index = best.triangle;
        hit.distance = std::sqrt(best.d2);
        return hit;
    }

private:
    struct Prim {
        Vec3 a, b, c;
        int structure, triangle;
        Vec3 centroid;
    };
    struct Node {
        Aabb box;
        int left = -1, right = -1;  // children, or -1 for a leaf
        int begin = 0, end = 0;     // leaf range into order_
    };
    struct Best {
        double d2 = std::numeric_limits<double>::infinity();
        int structure = std::numeric_limits<int>::max();
        int triangle = std::numeric_limits<int>::max();
        Vec3 point = Vec3::Zero();
    };

    static constexpr int kLeafSize = 4;

    int build(int begin, int end) {
        const int id = static_cast<int>(nodes_.size());
        nodes_.emplace_back();
        Aabb box, centroids;
        for (int i = begin; i < end; ++i) {
            const Prim& p = prims_[order_[i]];
            box.expand(p.a);
            box.expand(p.b);
            box.expand(p.c);
            centroids.expand(p.centroid);
        }
        nodes_[id].box = box;
        if (end - begin <= kLeafSize) {
            nodes_[id].begin = begin;
            nodes_[id].end = end;
            return id;
        }
        int axis = 0;
        centroids.extent().maxCoeff(&axis);
        const int mid = begin + (end - begin) / 2;
        std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end, [&](int x, int y) {
            const double cx = prims_[x].centroid[axis], cy = prims_[y].centroid[axis];
            return cx < cy || (cx == cy && x < y);
        });
        const int left = build(begin, mid);
        const int right = build(mid, end);
        nodes_[id].left = left;
        nodes_[id].right = right;
        return id;
    }

    void visit(int id, const Vec3& q, Best& best) const {
        const Node& node = nodes_[id];
        if (node.left < 0) {
            for (int i = node.begin; i < node.end; ++i) {
                const Prim& p = prims_[order_[i]];
                const Vec3 cp = closest_point_on_triangle(q, p.a, p.b, p.c);
                const double d2 = (cp - q).squaredNorm();
                if (d2 < best.d2 || (d2 == best.d2 && std::pair(p.structure, p.triangle) <
                                                          std::pair(best.structure, best.triangle))) {
                    best.d2 = d2;
                    best.structure = p.structure;
                    best.triangle = p.triangle;
                    best.point = cp;
                }
            }
            return;
        }
        const double dl = nodes_[node.left].box.squared_distance(q);
        const double dr = nodes_[node.right].box.squared_distance(q);
        const int first = dl <= dr ? node.left : node.right;
        const int second = dl <= dr ? node.right : node.left;
        const double d_first = std::min(dl, dr), d_second = std::max(dl, dr);
        // `<=` keeps subtrees that may hold an exact tie.
        if (d_first <= best.d2) visit(first, q, best);
        if (d_second <= best.d2) visit(second, q, best);
    }

    std::vector<Prim> prims_;
    std::vector<int> order_;
    std::vector<Node> nodes_;
    Aabb bounds_;
};

inline SurfaceHit closest_surface_point(const Vec3& query, std::span<const TriangleMesh> structures) {
    return SurfaceIndex(structures).closest(query);
}

}  // namespace edutainer
