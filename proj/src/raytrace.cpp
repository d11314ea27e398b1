#include "beamsense/raytrace.hpp"

#include <algorithm>
#include <cmath>

namespace beamsense {

namespace {

constexpr double kParamEps = 1e-9;
constexpr double kMinSubSegment = 1e-9;

struct Tracer {
    const Scene& scene;
    std::vector<int> excluded_boxes;  // mounts at the segment endpoints

    bool box_excluded(int index) const {
        return std::find(excluded_boxes.begin(), excluded_boxes.end(), index) !=
               excluded_boxes.end();
    }

    /// True when the 3D segment p->q passes through a vehicle box or a
    /// building face. Endpoints are treated as open (a segment may start or
    /// end on a reflector without being blocked by it).
    bool segment_blocked(const Vec3& p, const Vec3& q, int skip_wall) const {
        for (std::size_t i = 0; i < scene.vehicles.size(); ++i) {
            if (box_excluded(static_cast<int>(i))) continue;
            const BoxFootprint& box = scene.vehicles[i].box;
            auto span = clip_segment_to_box(p.xy(), q.xy(), box);
            if (!span) continue;
            double t0 = std::max(span->first, kParamEps);
            double t1 = std::min(span->second, 1.0 - kParamEps);
            if (t0 >= t1) continue;
            const double z0 = p.z + t0 * (q.z - p.z);
            const double z1 = p.z + t1 * (q.z - p.z);
            if (std::min(z0, z1) < box.height) return true;
        }
        for (std::size_t w = 0; w < scene.building_faces.size(); ++w) {
            if (static_cast<int>(w) == skip_wall) continue;
            const WallFace& face = scene.building_faces[w];
            auto hit = intersect_segment_face(p.xy(), q.xy(), face);
            if (!hit) continue;
            if (hit->t <= kParamEps || hit->t >= 1.0 - kParamEps) continue;
            const double z = p.z + hit->t * (q.z - p.z);
            if (z < face.height) return true;
        }
        return false;
    }
};

std::complex<double> path_gain(double wavelength, double length_m, double loss_db, Rng& rng) {
    const double amplitude = free_space_amplitude(wavelength, length_m) *
                             std::pow(10.0, -loss_db / 20.0);
    const double phase = rng.uniform(0.0, 2.0 * kPi);
    return std::polar(amplitude, phase);
}

/// Image-method bounce of tx->face->rx. Fails when the reflection point
/// falls off the face, above the reflector, or on a blocked sub-segment.
std::optional<Path> bounce_path(const Tracer& tracer, const Pose& tx, const Pose& rx,
                                const WallFace& face, int skip_wall, PathKind kind,
                                double wavelength, Rng& rng) {
    const double side_tx = face.signed_distance(tx.position.xy());
    const double side_rx = face.signed_distance(rx.position.xy());
    if (side_tx * side_rx <= 0.0) return std::nullopt;  // not both on one side

    const Vec2 image = mirror_across(face, tx.position.xy());
    auto hit = intersect_segment_face(image, rx.position.xy(), face);
    if (!hit) return std::nullopt;

    const Vec2 bounce2d = face.a + face.direction() * hit->s;
    // Mirroring a vertical reflector keeps z, so the unfolded image->rx line
    // interpolates the bounce height directly.
    const double zb = tx.position.z + hit->t * (rx.position.z - tx.position.z);
    if (zb < 0.0 || zb > face.height) return std::nullopt;

    const Vec3 bounce{bounce2d.x, bounce2d.y, zb};
    const Vec3 leg_a = bounce - tx.position;
    const Vec3 leg_b = rx.position - bounce;
    if (leg_a.norm() < kMinSubSegment || leg_b.norm() < kMinSubSegment) return std::nullopt;
    if (tracer.segment_blocked(tx.position, bounce, skip_wall)) return std::nullopt;
    if (tracer.segment_blocked(bounce, rx.position, skip_wall)) return std::nullopt;

    Path path;
    path.kind = kind;
    path.aod_azimuth = wrap_angle(azimuth_of(bounce2d - tx.position.xy()) - tx.boresight);
    path.aoa_azimuth = wrap_angle(azimuth_of(bounce2d - rx.position.xy()) - rx.boresight);
    path.length_m = leg_a.norm() + leg_b.norm();
    path.gain = path_gain(wavelength, path.length_m, face.reflection_loss_db, rng);
    path.bounce_point = bounce;
    return path;
}

}  // namespace beamsense::<anonymous>

std::vector<Path> trace_paths(const Scene& scene, const Pose& tx, const Pose& rx,
                              double carrier_hz, Rng& rng) {
    const double wavelength = wavelength_m(carrier_hz);
    Tracer tracer{scene, {}};
    for (std::size_t i = 0; i < scene.vehicles.size(); ++i) {
        const BoxFootprint& box = scene.vehicles[i].box;
        if (box.contains(tx.position.xy()) || box.contains(rx.position.xy()))
            tracer.excluded_boxes.push_back(static_cast<int>(i));
    }

    std::vector<Path> paths;

    if (!tracer.segment_blocked(tx.position, rx.position, -1)) {
        const Vec3 d = rx.position - tx.position;
        Path los;
        los.kind = PathKind::Los;
        los.aod_azimuth = wrap_angle(azimuth_of(d.xy()) - tx.boresight);
        los.aoa_azimuth = wrap_angle(azimuth_of(Vec2{-d.x, -d.y}) - rx.boresight);
        los.length_m = d.norm();
        los.gain = path_gain(wavelength, los.length_m, 0.0, rng);
        paths.push_back(los);
    }

    for (std::size_t w = 0; w < scene.building_faces.size(); ++w) {
        auto p = bounce_path(tracer, tx, rx, scene.building_faces[w], static_cast<int>(w),
                             PathKind::WallBounce, wavelength, rng);
        if (p) paths.push_back(*p);
    }

    for (std::size_t v = 0; v < scene.vehicles.size(); ++v) {
        if (tracer.box_excluded(static_cast<int>(v))) continue;
        const BoxFootprint& box = scene.vehicles[v].box;
        // Four vertical side faces, wound so normal() points outward.
        const Vec2 c00{box.min_x(), box.min_y()};
        const Vec2 c10{box.max_x(), box.min_y()};
        const Vec2 c11{box.max_x(), box.max_y()};
        const Vec2 c01{box.min_x(), box.max_y()};
        const WallFace faces[4] = {
            {c00, c01, box.height, scene.vehicle_reflection_loss_db},  // -x side
            {c11, c10, box.height, scene.vehicle_reflection_loss_db},  // +x side
            {c10, c00, box.height, scene.vehicle_reflection_loss_db},  // -y side
            {c01, c11, box.height, scene.vehicle_reflection_loss_db},  // +y side
        };
        for (const WallFace& face : faces) {
            if (face.signed_distance(tx.position.xy()) <= 0.0) continue;
            if (face.signed_distance(rx.position.xy()) <= 0.0) continue;
            auto p = bounce_path(tracer, tx, rx, face, -1, PathKind::VehicleBounce, wavelength,
                                 rng);
            if (p) paths.push_back(*p);
        }
    }
    return paths;
}

ChannelState classify_state(const std::vector<Path>& paths) {
    for (const Path& p : paths)
        if (p.kind == PathKind::Los) return ChannelState::Los;
    return ChannelState::Nlos;
}

}  // namespace beamsense
