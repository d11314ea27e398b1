#include "beamsense/sensing.hpp"

#include <cmath>
#include <stdexcept>

#include "beamsense/errors.hpp"
#include "beamsense/kernels.hpp"
#include "beamsense/raytrace.hpp"

namespace beamsense {

namespace {
constexpr double kBoltzmann = 1.380649e-23;
constexpr double kNoiseTempK = 290.0;
constexpr double kWeakSnrDb = -10.0;

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
}  // namespace

PositionEstimate gnss_estimate(const Vec2& true_pos, double radius_m, Rng& rng) {
    if (radius_m < 0.0) throw std::invalid_argument("gnss radius must be nonnegative");
    const double r = radius_m * std::sqrt(rng.uniform());
    const double theta = rng.uniform(0.0, 2.0 * kPi);
    PositionEstimate est;
    est.reported = true_pos + Vec2{r * std::cos(theta), r * std::sin(theta)};
    est.uncertainty_radius_m = radius_m;
    est.source = PositionSource::Gnss;
    return est;
}

double radar_snr_linear(const RadarSpec& spec, double range_m) {
    if (range_m <= 0.0) throw std::invalid_argument("radar range must be positive");
    const double lambda = wavelength_m(spec.carrier_hz);
    const double pt_w = db_to_linear(spec.tx_power_dbm) * 1e-3;
    const double rcs = db_to_linear(spec.target_rcs_dbsm);
    const double four_pi = 4.0 * kPi;
    const double pr = pt_w * lambda * lambda * rcs /
                      (four_pi * four_pi * four_pi * std::pow(range_m, 4.0));
    const double noise_w = kBoltzmann * kNoiseTempK * spec.bandwidth_hz *
                           db_to_linear(spec.noise_figure_db);
    return pr / noise_w * db_to_linear(spec.processing_gain_db);
}

RadarAccuracy radar_position_error(const RadarSpec& spec, double range_m, double azimuth_rad) {
    if (spec.virtual_antennas < 2) throw std::invalid_argument("radar needs >= 2 antennas");
    double snr = radar_snr_linear(spec, range_m);
    RadarAccuracy acc;
    if (10.0 * std::log10(snr) < kWeakSnrDb) {
        acc.weak = true;
        snr = db_to_linear(kWeakSnrDb);  // saturate at the detection floor
    }
    acc.sigma_range_m = kSpeedOfLight / (2.0 * spec.bandwidth_hz * std::sqrt(2.0 * snr));
    const double n = spec.virtual_antennas;
    const double phase_slope = kPi;  // 2*pi*d/lambda at half-wavelength spacing
    const double cosine = std::cos(azimuth_rad);
    acc.sigma_azimuth_rad =
        std::sqrt(6.0 / (snr * phase_slope * phase_slope * cosine * cosine * n * (n * n - 1.0)));
    return acc;
}

PositionEstimate radar_estimate_from_sigmas(const Vec2& true_pos, const Pose& rsu,
                                            double sigma_range_m, double sigma_azimuth_rad,
                                            Rng& rng) {
    const Vec2 d = true_pos - rsu.position.xy();
    const double range = d.norm();
    const double azimuth = azimuth_of(d);
    const double noisy_range = range + sigma_range_m * rng.normal();
    const double noisy_azimuth = azimuth + sigma_azimuth_rad * rng.normal();
    PositionEstimate est;
    est.reported = rsu.position.xy() +
                   Vec2{noisy_range * std::cos(noisy_azimuth), noisy_range * std::sin(noisy_azimuth)};
    est.uncertainty_radius_m =
        3.0 * std::sqrt(sigma_range_m * sigma_range_m +
                        range * range * sigma_azimuth_rad * sigma_azimuth_rad);
    est.source = PositionSource::RsuRadar;
    return est;
}

PositionEstimate rsu_radar_estimate(const RadarSpec& spec, const Vec2& true_pos, const Pose& rsu,
                                    Rng& rng) {
    const Vec2 d = true_pos - rsu.position.xy();
    const double rel = wrap_angle(azimuth_of(d) - rsu.boresight);
    if (std::abs(rel) >= 0.5 * kPi)
        throw std::invalid_argument("radar target outside field of view");
    const RadarAccuracy acc = radar_position_error(spec, d.norm(), rel);
    if (acc.weak) throw TargetTooWeak("radar return below -10 dB post-processing SNR");
    return radar_estimate_from_sigmas(true_pos, rsu, acc.sigma_range_m, acc.sigma_azimuth_rad,
                                      rng);
}

SpatialCovariance passive_radar_covariance(const Scene& scene, const Pose& radar_tx_pose,
                                           const Ula& rsu_array, double carrier_hz, Rng& rng,
                                           int snapshots, double noise_power) {
    if (snapshots < 1) throw std::invalid_argument("snapshots must be >= 1");
    Pose rx_pose{scene.rsu_pose.position, rsu_array.boresight};
    const std::vector<Path> paths = trace_paths(scene, radar_tx_pose, rx_pose, carrier_hz, rng);

    // Keep the arrivals the array can see and precompute their responses.
    std::vector<cvec> responses;
    std::vector<double> amplitudes;
    for (const Path& p : paths) {
        if (std::abs(p.aoa_azimuth) >= 0.5 * kPi) continue;
        responses.push_back(steering_vector_rel(rsu_array, p.aoa_azimuth));
        amplitudes.push_back(std::abs(p.gain));
    }

    const double noise_amp = std::sqrt(noise_power);
    cmat snaps(rsu_array.n, snapshots);
    for (int s = 0; s < snapshots; ++s) {
        cvec x = cvec::Zero(rsu_array.n);
        for (std::size_t p = 0; p < responses.size(); ++p) {
            const double phase = rng.uniform(0.0, 2.0 * kPi);
            x += std::polar(amplitudes[p], phase) * responses[p];
        }
        if (noise_amp > 0.0)
            for (int e = 0; e < rsu_array.n; ++e) x(e) += noise_amp * rng.cnormal();
        snaps.col(s) = x;
    }

    SpatialCovariance cov;
    cov.r = kernels::sample_covariance(snaps);
    cov.carrier_hz = carrier_hz;
    cov.array = rsu_array;
    return cov;
}

Aps estimate_aps(const SpatialCovariance& cov, int grid_size) {
    if (grid_size < 2) throw std::invalid_argument("grid_size must be >= 2");
    Aps aps;
    aps.grid.resize(grid_size);
    for (int g = 0; g < grid_size; ++g)
        aps.grid(g) = -0.5 * kPi + kPi * g / (grid_size - 1);
    aps.power = kernels::bartlett_spectrum(cov.r, cov.array, aps.grid);
    return aps;
}

SpatialCovariance translate_aps(const Aps& aps, const Ula& comm_array, double comm_carrier_hz) {
    SpatialCovariance cov;
    cov.r = kernels::power_profile_covariance(aps.power, aps.grid, comm_array);
    cov.carrier_hz = comm_carrier_hz;
    cov.array = comm_array;
    return cov;
}

ApsSimilarity aps_similarity(const Aps& a, const Aps& b) {
    if (a.grid.size() != b.grid.size() || (a.grid - b.grid).cwiseAbs().maxCoeff() > 1e-12)
        throw GridMismatch("spectra evaluated on different azimuth grids");

    Eigen::Index ia = 0, ib = 0;
    a.power.maxCoeff(&ia);
    b.power.maxCoeff(&ib);

    const auto n = static_cast<double>(a.power.size());
    const double mean_a = a.power.mean();
    const double mean_b = b.power.mean();
    const Eigen::VectorXd da = a.power.array() - mean_a;
    const Eigen::VectorXd db = b.power.array() - mean_b;
    const double var_a = da.squaredNorm() / n;
    const double var_b = db.squaredNorm() / n;

    ApsSimilarity sim;
    sim.peak_offset_rad = a.grid(ia) - b.grid(ib);
    if (var_a <= 0.0 || var_b <= 0.0)
        sim.correlation = (a.power - b.power).cwiseAbs().maxCoeff() <= 1e-12 ? 1.0 : 0.0;
    else
        sim.correlation = da.dot(db) / (n * std::sqrt(var_a * var_b));
    return sim;
}

}  // namespace beamsense
