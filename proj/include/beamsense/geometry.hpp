#pragma once

// Plan-view (x, y) geometry with heights carried separately. The road runs
// along +x; azimuths are measured counterclockwise from +x in radians.

#include <cmath>
#include <optional>

namespace beamsense {

constexpr double kPi = 3.14159265358979323846;

struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    Vec2 operator+(const Vec2& o) const { return {x + o.x, y + o.y}; }
    Vec2 operator-(const Vec2& o) const { return {x - o.x, y - o.y}; }
    Vec2 operator*(double s) const { return {x * s, y * s}; }
    double dot(const Vec2& o) const { return x * o.x + y * o.y; }
    double cross(const Vec2& o) const { return x * o.y - y * o.x; }
    double norm() const { return std::hypot(x, y); }
};

struct Vec3 {
    double x = 0.0;
    double y = 0.0;
    double z = 0.0;

    Vec2 xy() const { return {x, y}; }
    Vec3 operator-(const Vec3& o) const { return {x - o.x, y - o.y, z - o.z}; }
    double norm() const { return std::sqrt(x * x + y * y + z * z); }
};

/// Wrap an angle to (-pi, pi].
inline double wrap_angle(double a) {
    a = std::fmod(a, 2.0 * kPi);
    if (a <= -kPi) a += 2.0 * kPi;
    if (a > kPi) a -= 2.0 * kPi;
    return a;
}

inline double azimuth_of(const Vec2& d) { return std::atan2(d.y, d.x); }

/// Position plus the boresight azimuth of an antenna array mounted there.
struct Pose {
    Vec3 position;
    double boresight = 0.0;
};

/// Axis-aligned box in plan view extruded from the ground to `height`.
struct BoxFootprint {
    Vec2 center;
    double half_length = 0.0;  // along x
    double half_width = 0.0;   // along y
    double height = 0.0;

    double min_x() const { return center.x - half_length; }
    double max_x() const { return center.x + half_length; }
    double min_y() const { return center.y - half_width; }
    double max_y() const { return center.y + half_width; }

    bool contains(const Vec2& p, double eps = 1e-9) const {
        return p.x >= min_x() - eps && p.x <= max_x() + eps && p.y >= min_y() - eps &&
               p.y <= max_y() + eps;
    }

    bool overlaps(const BoxFootprint& o) const {
        return min_x() < o.max_x() && max_x() > o.min_x() && min_y() < o.max_y() &&
               max_y() > o.min_y();
    }
};

/// Parameter interval of segment p->q (2D) clipped against the box footprint.
/// Empty optional means the segment misses the box in plan view.
std::optional<std::pair<double, double>> clip_segment_to_box(const Vec2& p, const Vec2& q,
                                                             const BoxFootprint& box);

/// Vertical rectangular reflector: a plan-view segment extruded to `height`.
struct WallFace {
    Vec2 a;
    Vec2 b;
    double height = 0.0;
    double reflection_loss_db = 0.0;

    Vec2 direction() const { return b - a; }
    /// Unit normal; sign convention is fixed by the a->b winding.
    Vec2 normal() const {
        Vec2 d = direction();
        double n = d.norm();
        return {-d.y / n, d.x / n};
    }
    /// Signed distance of p from the infinite line through the face.
    double signed_distance(const Vec2& p) const { return (p - a).dot(normal()); }
};

/// Mirror p across the infinite line through the face.
Vec2 mirror_across(const WallFace& face, const Vec2& p);

/// Intersection parameter t on segment p->q with the infinite line through
/// the face, plus the face parameter s in [0,1] if the hit lies on the face.
struct LineHit {
    double t = 0.0;  // along p->q
    double s = 0.0;  // along a->b
};
std::optional<LineHit> intersect_segment_face(const Vec2& p, const Vec2& q, const WallFace& face);

}  // namespace beamsense
