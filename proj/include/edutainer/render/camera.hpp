#pragma once

#include "edutainer/error.hpp"
#include "edutainer/math.hpp"

#include <numbers>

namespace edutainer {

enum class Projection { Perspective, Orthographic };

struct Camera {
    Vec3 position = Vec3(0, 0, 5);
    Vec3 look_at = Vec3::Zero();
    Vec3 up = Vec3::UnitY();
    double vfov = 40.0;  // degrees, perspective only
    double near = 0.1;
    double far = 100.0;
    int width = 512;
    int height = 512;
    Projection projection = Projection::Perspective;
    double ortho_height = 2.0;  // visible height in model units, orthographic only

    void check() const {
        const Vec3 dir = look_at - position;
        if (!(dir.norm() > 0.0)) throw InvalidArgument("camera: position equals look_at");
        if (!(up.norm() > 0.0) || dir.normalized().cross(up.normalized()).norm() < 1e-9)
            throw InvalidArgument("camera: up is parallel to the view direction");
        if (projection == Projection::Perspective && !(vfov > 0.0 && vfov < 180.0))
            throw InvalidArgument("camera: vfov must be in (0,180)");
        if (projection == Projection::Orthographic && !(ortho_height > 0.0))
            throw InvalidArgument("camera: ortho_height must be positive");
        if (!(near > 0.0 && near < far)) throw InvalidArgument("camera: need 0 < near < far");
        if (width < 1 || height < 1) throw InvalidArgument("camera: viewport must be at least 1x1");
    }
};

// Orthonormal eye frame plus projection helpers for one camera.
class CameraFrame {
public:
    explicit CameraFrame(const Camera& cam) : cam_(cam) {
        cam.check();
        forward_ = (cam.look_at - cam.position).normalized();
        right_ = forward_.cross(cam.up).normalized();
        up_ = right_.cross(forward_);
        aspect_ = static_cast<double>(cam.width) / cam.height;
        half_h_ = cam.projection == Projection::Perspective ? std::tan(cam.vfov * std::numbers::pi / 360.0)
                                                            : 0.5 * cam.ortho_height;
    }

    const Camera& camera() const noexcept { return cam_; }
    const Vec3& forward() const noexcept { return forward_; }
    const Vec3& right() const noexcept { return right_; }
    const Vec3& up() const noexcept { return up_; }
    bool perspective() const noexcept { return cam_.projection == Projection::Perspective; }

    // (x right, y up, z = depth along the view direction)
    Vec3 to_eye(const Vec3& p) const {
        const Vec3 d = p - cam_.position;
        return {d.dot(right_), d.dot(up_), d.dot(forward_)};
    }

    Vec3 from_eye(const Vec3& e) const { return cam_.position + e.x() * right_ + e.y() * up_ + e.z() * forward_; }

    // Eye-space point to continuous pixel coordinates (x right, y down).
    Vec2 to_pixel(const Vec3& e) const {
        const double scale = perspective() ? e.z() * half_h_ : half_h_;
        const double nx = e.x() / (scale * aspect_);
        const double ny = e.y() / scale;
        return {(nx + 1.0) * 0.5 * cam_.width, (1.0 - ny) * 0.5 * cam_.height};
    }

    // Unit direction from a world point towards the viewer.
    Vec3 view_dir(const Vec3& world) const {
        if (!perspective()) return -forward_;
        const Vec3 d = cam_.position - world;
        const double n = d.norm();
        return n > 0.0 ? Vec3(d / n) : Vec3(-forward_);
    }

private:
    Camera cam_;
    Vec3 forward_, right_, up_;
    double aspect_ = 1.0, half_h_ = 1.0;
};

}  // namespace edutainer
