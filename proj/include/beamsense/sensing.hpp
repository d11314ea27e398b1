#pragma once

// Infrastructure-side information sources: GNSS fixes, RSU radar positioning
// with CRB-derived accuracy, and the passive-radar covariance that yields an
// azimuth power spectrum at the communication array.

#include <Eigen/Dense>

#include "beamsense/phyarray.hpp"
#include "beamsense/rng.hpp"
#include "beamsense/scene.hpp"

namespace beamsense {

enum class PositionSource { Gnss, RsuRadar };

struct PositionEstimate {
    Vec2 reported;
    double uncertainty_radius_m = 0.0;
    PositionSource source = PositionSource::Gnss;
};

struct RadarSpec {
    int virtual_antennas = 29;
    double carrier_hz = 24e9;
    double tx_power_dbm = 10.0;
    double bandwidth_hz = 250e6;
    double noise_figure_db = 12.0;
    double target_rcs_dbsm = 10.0;
    // Coherent gain of the chirp-sequence processing (range/Doppler FFTs);
    // required to turn the spec sheet into a usable post-processing SNR.
    double processing_gain_db = 48.0;
};

struct RadarAccuracy {
    double sigma_range_m = 0.0;
    double sigma_azimuth_rad = 0.0;
    bool weak = false;  // post-processing SNR below -10 dB; sigmas saturated
};

struct SpatialCovariance {
    cmat r;
    double carrier_hz = 0.0;
    Ula array;
};

struct Aps {
    Eigen::VectorXd grid;   // strictly increasing relative azimuths
    Eigen::VectorXd power;  // nonnegative
};

struct ApsSimilarity {
    double peak_offset_rad = 0.0;
    double correlation = 0.0;
};

/// Reported position drawn uniformly in a disk of `radius_m` around the
/// true position; the true position is contained by construction.
PositionEstimate gnss_estimate(const Vec2& true_pos, double radius_m, Rng& rng);

/// Post-processing SNR of a single target at `range_m`, from the radar
/// equation with unit element gains.
double radar_snr_linear(const RadarSpec& spec, double range_m);

/// Single-target deterministic CRBs: sigma_range = c/(2B*sqrt(2*SNR)) and
/// sigma_az = sqrt(6/(SNR*(2*pi*d/lambda)^2*cos^2(az)*N(N^2-1))) for the
/// half-wavelength virtual ULA.
RadarAccuracy radar_position_error(const RadarSpec& spec, double range_m, double azimuth_rad);

/// Polar reconstruction around the RSU with Gaussian range/azimuth noise;
/// uncertainty_radius = 3*sqrt(sigma_r^2 + (range*sigma_az)^2).
PositionEstimate radar_estimate_from_sigmas(const Vec2& true_pos, const Pose& rsu,
                                            double sigma_range_m, double sigma_azimuth_rad,
                                            Rng& rng);

/// Full RSU-radar fix. Throws TargetTooWeak when the return is saturated and
/// std::invalid_argument when the target is outside the radar field of view.
PositionEstimate rsu_radar_estimate(const RadarSpec& spec, const Vec2& true_pos, const Pose& rsu,
                                    Rng& rng);

/// Sample covariance of synthetic passive-radar snapshots at the RSU array.
/// Each snapshot re-rolls every path phase; noise_power is the per-element
/// noise variance in the same normalized units as the path gains.
SpatialCovariance passive_radar_covariance(const Scene& scene, const Pose& radar_tx_pose,
                                           const Ula& rsu_array, double carrier_hz, Rng& rng,
                                           int snapshots, double noise_power = 0.0);

/// Bartlett spectrum on `grid_size` uniform points over [-pi/2, pi/2].
Aps estimate_aps(const SpatialCovariance& cov, int grid_size);

/// Comm-band covariance synthesized from a radar-derived spectrum. Both
/// arrays are half-wavelength at their own carriers, so grid azimuths
/// transfer directly.
SpatialCovariance translate_aps(const Aps& aps, const Ula& comm_array, double comm_carrier_hz);

/// Peak offset (a minus b) and Pearson correlation of two spectra on equal
/// grids. Throws GridMismatch otherwise.
ApsSimilarity aps_similarity(const Aps& a, const Aps& b);

}  // namespace beamsense
