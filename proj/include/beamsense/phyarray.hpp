#pragma once

// Uniform linear arrays, DFT codebooks, narrowband channel assembly from
// traced paths, and per-beam-pair SNR.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "beamsense/geometry.hpp"
#include "beamsense/raytrace.hpp"

namespace beamsense {

using cvec = Eigen::VectorXcd;
using cmat = Eigen::MatrixXcd;

struct Ula {
    int n = 1;
    double spacing_wavelengths = 0.5;
    double boresight = 0.0;  // scene-frame azimuth
};

/// Array response for an azimuth measured from the array boresight.
/// Element k carries phase 2*pi*spacing*k*sin(rel); 2-norm is sqrt(n).
cvec steering_vector_rel(const Ula& array, double rel_azimuth);

/// Array response for a scene-frame azimuth.
cvec steering_vector(const Ula& array, double azimuth);

struct Codebook {
    cmat beams;  // one unit-norm column per beam
    int beam_count() const { return static_cast<int>(beams.cols()); }
};

/// N orthonormal DFT beams; beam k element m is exp(i*2*pi*k*m/n)/sqrt(n).
Codebook dft_codebook(const Ula& array);

/// Sine-domain center of DFT beam k, wrapped to [-1/(2d), 1/(2d)).
double dft_beam_sin_center(int n, int k, double spacing_wavelengths);

/// Stacked codebook over several equal-size arrays: beam a*n+k is array a's
/// DFT beam k embedded in the block of rows owned by that array. Columns
/// stay orthonormal.
Codebook stacked_codebook(const std::vector<Ula>& arrays);

struct Channel {
    cmat h;  // n_rx x n_tx
    double carrier_hz = 0.0;
};

/// Narrowband channel H = sum_p gain_p * a_rx(aoa_p) * a_tx(aod_p)^H.
/// Path angles are interpreted in (path_tx_frame, path_rx_frame); arrays see
/// only the front hemisphere of their own boresight. An empty path list
/// yields the zero matrix.
Channel assemble_channel(const std::vector<Path>& paths, const Ula& tx, const Ula& rx,
                         double carrier_hz, double path_tx_frame, double path_rx_frame);

/// Convenience overload: path angles already relative to the array boresights.
Channel assemble_channel(const std::vector<Path>& paths, const Ula& tx, const Ula& rx,
                         double carrier_hz);

/// Rows stacked over several receive arrays sharing one mount point.
Channel assemble_stacked_channel(const std::vector<Path>& paths, const Ula& tx,
                                 const std::vector<Ula>& rx_arrays, double carrier_hz,
                                 double path_tx_frame, double path_rx_frame);

/// 10*log10(|w^H H f|^2) + tx_power_dbm - noise_power_dbm. Returns -inf for
/// a vanishing inner product.
double pair_snr(const Channel& channel, const cvec& tx_beam, const cvec& rx_beam,
                double tx_power_dbm, double noise_power_dbm);

}  // namespace beamsense
