#include "beamsense/kernels.hpp"

#include <cmath>

namespace beamsense::kernels {

namespace {

inline void beam_gain_column(const cmat& h, const cmat& tx_beams, const cmat& rx_beams, int k,
                             cmat& out) {
    const cvec v = h * tx_beams.col(k);
    out.col(k) = rx_beams.adjoint() * v;
}

inline double bartlett_point(const cmat& r, const Ula& array, double rel) {
    const cvec a = steering_vector_rel(array, rel);
    const std::complex<double> q = a.adjoint() * (r * a);
    const double n2 = static_cast<double>(array.n) * static_cast<double>(array.n);
    return std::max(0.0, q.real() / n2);
}

inline std::complex<double> covariance_lag(const Eigen::VectorXd& power,
                                           const Eigen::VectorXd& grid, const Ula& array,
                                           int lag) {
    std::complex<double> acc{0.0, 0.0};
    const double two_pi_d = 2.0 * kPi * array.spacing_wavelengths;
    for (Eigen::Index g = 0; g < grid.size(); ++g)
        acc += power(g) * std::polar(1.0, two_pi_d * lag * std::sin(grid(g)));
    return acc;
}

inline std::complex<double> sample_cov_entry(const cmat& x, int i, int j) {
    std::complex<double> acc{0.0, 0.0};
    for (Eigen::Index s = 0; s < x.cols(); ++s) acc += x(i, s) * std::conj(x(j, s));
    return acc / static_cast<double>(x.cols());
}

cmat toeplitz_from_lags(const std::vector<std::complex<double>>& lags, int n) {
    cmat r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            const int lag = i - j;
            r(i, j) = lag >= 0 ? lags[static_cast<std::size_t>(lag)]
                               : std::conj(lags[static_cast<std::size_t>(-lag)]);
        }
        r(i, i) = std::complex<double>(lags[0].real(), 0.0);
    }
    return r;
}

}  // namespace beamsense::kernels::<anonymous>

cmat beam_gain_matrix(const cmat& h, const cmat& tx_beams, const cmat& rx_beams) {
    cmat g(rx_beams.cols(), tx_beams.cols());
    const int cols = static_cast<int>(tx_beams.cols());
#pragma omp parallel for schedule(static)
    for (int k = 0; k < cols; ++k) beam_gain_column(h, tx_beams, rx_beams, k, g);
    return g;
}

cmat beam_gain_matrix_serial(const cmat& h, const cmat& tx_beams, const cmat& rx_beams) {
    cmat g(rx_beams.cols(), tx_beams.cols());
    const int cols = static_cast<int>(tx_beams.cols());
    for (int k = 0; k < cols; ++k) beam_gain_column(h, tx_beams, rx_beams, k, g);
    return g;
}

Eigen::VectorXd bartlett_spectrum(const cmat& r, const Ula& array,
                                  const Eigen::VectorXd& grid_rel_azimuth) {
    Eigen::VectorXd p(grid_rel_azimuth.size());
    const int n = static_cast<int>(grid_rel_azimuth.size());
#pragma omp parallel for schedule(static)
    for (int g = 0; g < n; ++g) p(g) = bartlett_point(r, array, grid_rel_azimuth(g));
    return p;
}

Eigen::VectorXd bartlett_spectrum_serial(const cmat& r, const Ula& array,
                                         const Eigen::VectorXd& grid_rel_azimuth) {
    Eigen::VectorXd p(grid_rel_azimuth.size());
    const int n = static_cast<int>(grid_rel_azimuth.size());
    for (int g = 0; g < n; ++g) p(g) = bartlett_point(r, array, grid_rel_azimuth(g));
    return p;
}

cmat power_profile_covariance(const Eigen::VectorXd& power,
                              const Eigen::VectorXd& grid_rel_azimuth, const Ula& array) {
    std::vector<std::complex<double>> lags(static_cast<std::size_t>(array.n));
#pragma omp parallel for schedule(static)
    for (int lag = 0; lag < array.n; ++lag)
        lags[static_cast<std::size_t>(lag)] = covariance_lag(power, grid_rel_azimuth, array, lag);
    return toeplitz_from_lags(lags, array.n);
}

cmat power_profile_covariance_serial(const Eigen::VectorXd& power,
                                     const Eigen::VectorXd& grid_rel_azimuth, const Ula& array) {
    std::vector<std::complex<double>> lags(static_cast<std::size_t>(array.n));
    for (int lag = 0; lag < array.n; ++lag)
        lags[static_cast<std::size_t>(lag)] = covariance_lag(power, grid_rel_azimuth, array, lag);
    return toeplitz_from_lags(lags, array.n);
}

cmat sample_covariance(const cmat& snapshots) {
    const int n = static_cast<int>(snapshots.rows());
    cmat r(n, n);
#pragma omp parallel for schedule(static)
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const std::complex<double> e = sample_cov_entry(snapshots, i, j);
            r(i, j) = i == j ? std::complex<double>(e.real(), 0.0) : e;
            r(j, i) = std::conj(r(i, j));
        }
    }
    return r;
}

cmat sample_covariance_serial(const cmat& snapshots) {
    const int n = static_cast<int>(snapshots.rows());
    cmat r(n, n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j <= i; ++j) {
            const std::complex<double> e = sample_cov_entry(snapshots, i, j);
            r(i, j) = i == j ? std::complex<double>(e.real(), 0.0) : e;
            r(j, i) = std::conj(r(i, j));
        }
    }
    return r;
}

}  // namespace beamsense::kernels
