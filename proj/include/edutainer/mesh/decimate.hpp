#pragma once

#include "edutainer/mesh/triangle_mesh.hpp"
#include "edutainer/mesh/validate.hpp"

#include <Eigen/Dense>

#include <queue>
#include <tuple>

namespace edutainer {

namespace detail {

using Quadric = Eigen::Matrix4d;

struct CollapseCandidate {
    double cost;
    int keep, drop;
    unsigned keep_version, drop_version;
    Vec3 target;

    bool operator>(const CollapseCandidate& o) const {
        return std::tie(cost, keep, drop) > std::tie(o.cost, o.keep, o.drop);
    }
};

class QuadricDecimator {
public:
    explicit QuadricDecimator(const TriangleMesh& mesh)
        : pos_(mesh.vertices),
          tris_(mesh.triangles),
          face_alive_(mesh.triangles.size(), true),
          vertex_alive_(mesh.vertices.size(), true),
          version_(mesh.vertices.size(), 0),
          quadric_(mesh.vertices.size(), Quadric::Zero()),
          faces_of_(mesh.vertices.size()),
          alive_faces_(mesh.triangles.size()) {
        for (std::size_t t = 0; t < tris_.size(); ++t) {
            const Vec3& a = pos_[tris_[t][0]];
            const Vec3& b = pos_[tris_[t][1]];
            const Vec3& c = pos_[tris_[t][2]];
            const Vec3 cr = (b - a).cross(c - a);
            const double area = 0.5 * cr.norm();
            for (int v : tris_[t]) faces_of_[v].push_back(static_cast<int>(t));
            if (area <= 0.0) continue;
            const Vec3 n = cr.normalized();
            Eigen::Vector4d plane(n.x(), n.y(), n.z(), -n.dot(a));
            const Quadric k = area * plane * plane.transpose();
            for (int v : tris_[t]) quadric_[v] += k;
        }
    }

    TriangleMesh run(std::size_t target, bool keep_normals) {
        for (std::size_t t = 0; t < tris_.size(); ++t)
            for (int k = 0; k < 3; ++k) {
                const int a = tris_[t][k], b = tris_[t][(k + 1) % 3];
                if (a < b) push(a, b);
            }
        while (alive_faces_ > target && !heap_.empty()) {
            const CollapseCandidate c = heap_.top();
            heap_.pop();
            if (!vertex_alive_[c.keep] || !vertex_alive_[c.drop]) continue;
            if (version_[c.keep] != c.keep_version || version_[c.drop] != c.drop_version) continue;
            collapse(c);
        }
        return compact(keep_normals);
    }

private:
    std::vector<int> live_faces(int v) const {
        std::vector<int> out;
        for (int f : faces_of_[v])
            if (face_alive_[f] && (tris_[f][0] == v || tris_[f][1] == v || tris_[f][2] == v)) out.push_back(f);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    std::vector<int> neighbors(int v) const {
        std::vector<int> out;
        for (int f : live_faces(v))
            for (int w : tris_[f])
                if (w != v) out.push_back(w);
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    void push(int a, int b) {
        const Quadric q = quadric_[a] + quadric_[b];
        Vec3 target;
        double cost;
        optimal_target(q, pos_[a], pos_[b], target, cost);
        const int keep = std::min(a, b), drop = std::max(a, b);
        heap_.push(CollapseCandidate{cost, keep, drop, version_[keep], version_[drop], target});
    }

    static double evaluate(const Quadric& q, const Vec3& p) {
        const Eigen::Vector4d h(p.x(), p.y(), p.z(), 1.0);
        return std::max(0.0, h.dot(q * h));
    }

    static void optimal_target(const Quadric& q, const Vec3& a, const Vec3& b, Vec3& target, double& cost) {
        const Eigen::Matrix3d m = q.topLeftCorner<3, 3>();
        const Eigen::Vector3d rhs = -q.topRightCorner<3, 1>();
        Eigen::FullPivLU<Eigen::Matrix3d> lu(m);
        lu.setThreshold(1e-10);
        if (lu.isInvertible()) {
            const Vec3 x = lu.solve(rhs);
            // Stay near the edge; far-away optima come from nearly flat regions.
            const double span = (b - a).norm();
            const Vec3 mid = 0.5 * (a + b);
            if ((x - mid).norm() <= 2.0 * span) {
                target = x;
                cost = evaluate(q, x);
                return;
            }
        }
        const Vec3 options[3] = {a, b, 0.5 * (a + b)};
        cost = std::numeric_limits<double>::infinity();
        for (const Vec3& o : options) {
            const double c = evaluate(q, o);
            if (c < cost) {
                cost = c;
                target = o;
            }
        }
    }

    bool collapse(const CollapseCandidate& c) {
        const int u = c.keep, v = c.drop;
        const std::vector<int> nu = neighbors(u), nv = neighbors(v);
        if (!std::binary_search(nu.begin(), nu.end(), v)) return false;

        // Link condition: exactly the two wing vertices are shared.
        std::vector<int> common;
        std::set_intersection(nu.begin(), nu.end(), nv.begin(), nv.end(), std::back_inserter(common));
        if (common.size() != 2) return false;
        for (int w : common)
            if (neighbors(w).size() <= 3) return false;
        if (nu.size() + nv.size() - 4 < 3) return false;
        if (alive_faces_ < 6) return false;

        const std::vector<int> fu = live_faces(u), fv = live_faces(v);
        std::vector<int> removed, kept;
        for (int f : fu) (contains(f, v) ? removed : kept).push_back(f);
        for (int f : fv)
            if (!contains(f, u)) kept.push_back(f);
        if (removed.size() != 2) return false;

        // Reject folds: no surviving face may flip or collapse.
        for (int f : kept) {
            Triangle t = tris_[f];
            const Vec3 before = (pos_[t[1]] - pos_[t[0]]).cross(pos_[t[2]] - pos_[t[0]]);
            std::array<Vec3, 3> p{pos_[t[0]], pos_[t[1]], pos_[t[2]]};
            for (int k = 0; k < 3; ++k)
                if (t[k] == u || t[k] == v) p[k] = c.target;
            const Vec3 after = (p[1] - p[0]).cross(p[2] - p[0]);
            const double la = after.norm(), lb = before.norm();
            if (la <= 1e-14 * (lb + 1e-300)) return false;
            if (after.dot(before) < 0.2 * la * lb) return false;
        }

        for (int f : removed) {
            face_alive_[f] = false;
            --alive_faces_;
        }
        for (int f : fv) {
            if (!face_alive_[f]) continue;
            for (int& w : tris_[f])
                if (w == v) w = u;
            faces_of_[u].push_back(f);
        }
        vertex_alive_[v] = false;
        pos_[u] = c.target;
        quadric_[u] += quadric_[v];
        ++version_[u];
        faces_of_[u] = live_faces(u);
        for (int w : neighbors(u)) push(u, w);
        return true;
    }

    bool contains(int f, int v) const { return tris_[f][0] == v || tris_[f][1] == v || tris_[f][2] == v; }

    TriangleMesh compact(bool keep_normals) const {
        TriangleMesh out;
        std::vector<int> remap(pos_.size(), -1);
        for (std::size_t f = 0; f < tris_.size(); ++f)
            if (face_alive_[f])
                for (int w : tris_[f]) remap[w] = -2;
        // Surviving vertices keep their relative order.
        for (std::size_t v = 0; v < pos_.size(); ++v)
            if (remap[v] == -2) {
                remap[v] = static_cast<int>(out.vertices.size());
                out.vertices.push_back(pos_[v]);
            }
        for (std::size_t f = 0; f < tris_.size(); ++f) {
            if (!face_alive_[f]) continue;
            out.triangles.push_back({remap[tris_[f][0]], remap[tris_[f][1]], remap[tris_[f][2]]});
        }
        if (keep_normals) out.vertex_normals = compute_vertex_normals(out);
        return out;
    }

    std::vector<Vec3> pos_;
    std::vector<Triangle> tris_;
    std::vector<bool> face_alive_, vertex_alive_;
    std::vector<unsigned> version_;
    std::vector<Quadric, Eigen::aligned_allocator<Quadric>> quadric_;
    std::vector<std::vector<int>> faces_of_;
    std::size_t alive_faces_;
    std::priority_queue<CollapseCandidate, std::vector<CollapseCandidate>, std::greater<>> heap_;
};

}  // namespace detail

// Quadric-error edge collapse down to at most `target_triangles` (or until no
// collapse passes the topology guards). Closed input stays closed.
inline TriangleMesh decimate(const TriangleMesh& mesh, int target_triangles) {
    if (target_triangles < 4) throw InvalidArgument("decimate: target_triangles must be >= 4");
    if (!validate(mesh).closed) throw InvalidArgument("decimate: input mesh is not closed");
    if (mesh.triangle_count() <= static_cast<std::size_t>(target_triangles)) return mesh;
    detail::QuadricDecimator dec(mesh);
    return dec.run(static_cast<std::size_t>(target_triangles), !mesh.vertex_normals.empty());
}

}  // namespace edutainer
