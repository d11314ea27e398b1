#include "beamsense/geometry.hpp"

#include <algorithm>

namespace beamsense {

std::optional<std::pair<double, double>> clip_segment_to_box(const Vec2& p, const Vec2& q,
                                                             const BoxFootprint& box) {
    // Liang-Barsky slab clipping: keep t with direction*t <= bound per edge.
    double t0 = 0.0, t1 = 1.0;
    const double dx = q.x - p.x;
    const double dy = q.y - p.y;

    auto clip = [&](double direction, double bound) {
        if (direction == 0.0) return bound >= 0.0;  // parallel: inside the slab?
        const double t = bound / direction;
        if (direction < 0.0) {
            if (t > t1) return false;
            t0 = std::max(t0, t);
        } else {
            if (t < t0) return false;
            t1 = std::min(t1, t);
        }
        return true;
    };

    if (!clip(-dx, p.x - box.min_x())) return std::nullopt;
    if (!clip(dx, box.max_x() - p.x)) return std::nullopt;
    if (!clip(-dy, p.y - box.min_y())) return std::nullopt;
    if (!clip(dy, box.max_y() - p.y)) return std::nullopt;
    if (t0 > t1) return std::nullopt;
    return std::make_pair(t0, t1);
}

Vec2 mirror_across(const WallFace& face, const Vec2& p) {
    Vec2 n = face.normal();
    double d = (p - face.a).dot(n);
    return p - n * (2.0 * d);
}

std::optional<LineHit> intersect_segment_face(const Vec2& p, const Vec2& q, const WallFace& face) {
    const Vec2 r = q - p;
    const Vec2 d = face.direction();
    const double denom = r.cross(d);
    if (std::abs(denom) < 1e-15) return std::nullopt;  // parallel
    const Vec2 w = face.a - p;
    const double t = w.cross(d) / denom;
    const double s = w.cross(r) / denom;
    if (t < 0.0 || t > 1.0 || s < 0.0 || s > 1.0) return std::nullopt;
    return LineHit{t, s};
}

}  // namespace beamsense
