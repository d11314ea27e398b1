#pragma once

// Data-parallel inner loops used by the sensing and beam-search pipeline.
// Every kernel ships in two variants: an OpenMP version and a serial
// reference. Both iterate each independent output in the same order, so the
// results are bit-identical regardless of thread count; tests and the
// benchmark target compare the two.

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "beamsense/phyarray.hpp"

namespace beamsense::kernels {

/// Beam-domain gains G(j,k) = w_j^H H f_k for the given beam columns.
cmat beam_gain_matrix(const cmat& h, const cmat& tx_beams, const cmat& rx_beams);
cmat beam_gain_matrix_serial(const cmat& h, const cmat& tx_beams, const cmat& rx_beams);

/// Bartlett spectrum a(g)^H R a(g) / n^2 over relative azimuth grid points.
/// Values are clamped at zero (a PSD input is nonnegative in exact math).
Eigen::VectorXd bartlett_spectrum(const cmat& r, const Ula& array,
                                  const Eigen::VectorXd& grid_rel_azimuth);
Eigen::VectorXd bartlett_spectrum_serial(const cmat& r, const Ula& array,
                                         const Eigen::VectorXd& grid_rel_azimuth);

/// Covariance synthesized from a nonnegative angular power profile:
/// R = sum_g p_g a(g) a(g)^H. Toeplitz for a ULA, so only the first column
/// of lags is accumulated; the result is exactly Hermitian.
cmat power_profile_covariance(const Eigen::VectorXd& power,
                              const Eigen::VectorXd& grid_rel_azimuth, const Ula& array);
cmat power_profile_covariance_serial(const Eigen::VectorXd& power,
                                     const Eigen::VectorXd& grid_rel_azimuth, const Ula& array);

/// Sample covariance (1/S) X X^H of snapshot columns; exactly Hermitian.
cmat sample_covariance(const cmat& snapshots);
cmat sample_covariance_serial(const cmat& snapshots);

}  // namespace beamsense::kernels
