#include "beamsense/phyarray.hpp"

#include <cmath>

namespace beamsense {

namespace {
constexpr double kFrontHemisphere = 0.5 * kPi;

bool in_front(double rel) { return std::abs(rel) < kFrontHemisphere; }
}  // namespace

cvec steering_vector_rel(const Ula& array, double rel_azimuth) {
    cvec a(array.n);
    const double omega = 2.0 * kPi * array.spacing_wavelengths * std::sin(rel_azimuth);
    for (int k = 0; k < array.n; ++k) a(k) = std::polar(1.0, omega * k);
    return a;
}

cvec steering_vector(const Ula& array, double azimuth) {
    return steering_vector_rel(array, wrap_angle(azimuth - array.boresight));
}

Codebook dft_codebook(const Ula& array) {
    const int n = array.n;
    Codebook cb;
    cb.beams.resize(n, n);
    const double scale = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k < n; ++k)
        for (int m = 0; m < n; ++m)
            cb.beams(m, k) = std::polar(scale, 2.0 * kPi * k * m / n);
    return cb;
}

double dft_beam_sin_center(int n, int k, double spacing_wavelengths) {
    const double period = 1.0 / spacing_wavelengths;
    double u = static_cast<double>(k) / (n * spacing_wavelengths);
    u = std::fmod(u, period);
    if (u >= 0.5 * period) u -= period;
    if (u < -0.5 * period) u += period;
    return u;
}

Codebook stacked_codebook(const std::vector<Ula>& arrays) {
    int rows = 0;
    int cols = 0;
    for (const Ula& a : arrays) {
        rows += a.n;
        cols += a.n;
    }
    Codebook cb;
    cb.beams = cmat::Zero(rows, cols);
    int row0 = 0;
    int col0 = 0;
    for (const Ula& a : arrays) {
        Codebook sub = dft_codebook(a);
        cb.beams.block(row0, col0, a.n, a.n) = sub.beams;
        row0 += a.n;
        col0 += a.n;
    }
    return cb;
}

Channel assemble_channel(const std::vector<Path>& paths, const Ula& tx, const Ula& rx,
                         double carrier_hz, double path_tx_frame, double path_rx_frame) {
    Channel ch;
    ch.carrier_hz = carrier_hz;
    ch.h = cmat::Zero(rx.n, tx.n);
    for (const Path& p : paths) {
        const double rel_tx = wrap_angle(p.aod_azimuth + path_tx_frame - tx.boresight);
        const double rel_rx = wrap_angle(p.aoa_azimuth + path_rx_frame - rx.boresight);
        if (!in_front(rel_tx) || !in_front(rel_rx)) continue;
        const cvec at = steering_vector_rel(tx, rel_tx);
        const cvec ar = steering_vector_rel(rx, rel_rx);
        ch.h.noalias() += p.gain * (ar * at.adjoint());
    }
    return ch;
}

Channel assemble_channel(const std::vector<Path>& paths, const Ula& tx, const Ula& rx,
                         double carrier_hz) {
    return assemble_channel(paths, tx, rx, carrier_hz, tx.boresight, rx.boresight);
}

Channel assemble_stacked_channel(const std::vector<Path>& paths, const Ula& tx,
                                 const std::vector<Ula>& rx_arrays, double carrier_hz,
                                 double path_tx_frame, double path_rx_frame) {
    int rows = 0;
    for (const Ula& a : rx_arrays) rows += a.n;
    Channel ch;
    ch.carrier_hz = carrier_hz;
    ch.h = cmat::Zero(rows, tx.n);
    int row0 = 0;
    for (const Ula& a : rx_arrays) {
        Channel sub = assemble_channel(paths, tx, a, carrier_hz, path_tx_frame, path_rx_frame);
        ch.h.block(row0, 0, a.n, tx.n) = sub.h;
        row0 += a.n;
    }
    return ch;
}

double pair_snr(const Channel& channel, const cvec& tx_beam, const cvec& rx_beam,
                double tx_power_dbm, double noise_power_dbm) {
    const std::complex<double> g = rx_beam.adjoint() * (channel.h * tx_beam);
    const double mag2 = std::norm(g);
    if (mag2 == 0.0) return -std::numeric_limits<double>::infinity();
    return 10.0 * std::log10(mag2) + tx_power_dbm - noise_power_dbm;
}

}  // namespace beamsense
