#pragma once

// First-order specular ray model: a direct segment plus one image-method
// bounce per building face and per vehicle side, with box blockage tested
// in plan view against the interpolated ray height.

#include <complex>
#include <optional>
#include <vector>

#include "beamsense/rng.hpp"
#include "beamsense/scene.hpp"

namespace beamsense {

enum class PathKind { Los, WallBounce, VehicleBounce };

struct Path {
    PathKind kind = PathKind::Los;
    double aod_azimuth = 0.0;  // radians, relative to the tx boresight
    double aoa_azimuth = 0.0;  // radians, relative to the rx boresight
    double length_m = 0.0;     // 3D length including the bounce
    std::complex<double> gain;
    std::optional<Vec3> bounce_point;
};

enum class ChannelState { Los, Nlos };

/// All propagation paths between two poses. Gains carry free-space loss at
/// `carrier_hz`, per-bounce reflection loss, and a uniform random phase
/// drawn from `rng`. Returns an empty list under total blockage.
std::vector<Path> trace_paths(const Scene& scene, const Pose& tx, const Pose& rx,
                              double carrier_hz, Rng& rng);

ChannelState classify_state(const std::vector<Path>& paths);

constexpr double kSpeedOfLight = 299792458.0;

inline double wavelength_m(double carrier_hz) { return kSpeedOfLight / carrier_hz; }

inline double free_space_amplitude(double wavelength, double length_m) {
    return wavelength / (4.0 * kPi * length_m);
}

}  // namespace beamsense
