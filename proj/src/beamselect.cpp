#include "beamsense/beamselect.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>
#include <tuple>

#include "beamsense/kernels.hpp"

namespace beamsense {

namespace {

struct SideSector {
    enum class Kind { Normal, Degenerate, Empty } kind = Kind::Normal;
    double u_lo = 0.0;
    double u_hi = 0.0;
};

// Angular sector subtended at `viewpoint` by disk(center, radius), mapped to
// the sine domain of an array with the given boresight. Degenerate when the
// disk contains the viewpoint; Empty when the whole sector lies behind the
// array.
SideSector subtended_sector(const Vec2& viewpoint, const Vec2& center, double radius,
                            double boresight) {
    SideSector s;
    const Vec2 d = center - viewpoint;
    const double dist = d.norm();
    if (radius >= dist) {
        s.kind = SideSector::Kind::Degenerate;
        return s;
    }
    const double half = std::asin(radius / dist);
    const double rel_center = wrap_angle(azimuth_of(d) - boresight);
    const double lo = rel_center - half;
    const double hi = rel_center + half;
    if (lo >= 0.5 * kPi || hi <= -0.5 * kPi) {
        s.kind = SideSector::Kind::Empty;
        return s;
    }
    s.u_lo = std::sin(std::max(lo, -0.5 * kPi));
    s.u_hi = std::sin(std::min(hi, 0.5 * kPi));
    return s;
}

double circular_distance(double a, double b, double period) {
    double d = std::fmod(std::abs(a - b), period);
    return std::min(d, period - d);
}

double distance_to_sector(double u, const SideSector& s, double period) {
    switch (s.kind) {
        case SideSector::Kind::Degenerate:
            return 0.0;
        case SideSector::Kind::Empty:
            return 2.0 * period;  // after every visible beam
        case SideSector::Kind::Normal:
            break;
    }
    if (u >= s.u_lo && u <= s.u_hi) return 0.0;
    return std::min(circular_distance(u, s.u_lo, period), circular_distance(u, s.u_hi, period));
}

// Mainlobe-overlap test: strict inequality keeps a zero-width sector placed
// exactly on a beam center from spilling into the neighbors.
bool beam_overlaps(double u_center, const SideSector& s, double halfwidth, double period) {
    if (s.kind == SideSector::Kind::Degenerate) return true;
    if (s.kind == SideSector::Kind::Empty) return false;
    return distance_to_sector(u_center, s, period) < halfwidth;
}

}  // namespace beamsense::<anonymous>

CandidateSet exhaustive_candidates(int n_tx_beams, int n_rx_beams) {
    CandidateSet set;
    set.strategy = Strategy::Exhaustive;
    set.pairs.reserve(static_cast<std::size_t>(n_tx_beams) * static_cast<std::size_t>(n_rx_beams));
    for (int t = 0; t < n_tx_beams; ++t)
        for (int r = 0; r < n_rx_beams; ++r) set.pairs.push_back({t, r});
    return set;
}

CandidateSet cartesian_candidates(int n_tx_beams, const std::vector<int>& rx_indices) {
    CandidateSet set;
    set.strategy = Strategy::Exhaustive;
    set.pairs.reserve(static_cast<std::size_t>(n_tx_beams) * rx_indices.size());
    for (int t = 0; t < n_tx_beams; ++t)
        for (int r : rx_indices) set.pairs.push_back({t, r});
    return set;
}

CandidateSet position_candidates(const PositionEstimate& est, const Vec2& rsu_xy,
                                 const Ula& tx_array, const RxGeometry& rx,
                                 std::optional<int> budget_pairs) {
    CandidateSet set;
    set.strategy = Strategy::PositionAssisted;

    const double tx_period = 1.0 / tx_array.spacing_wavelengths;
    const double tx_halfwidth = 1.0 / (tx_array.n * tx_array.spacing_wavelengths);
    const SideSector tx_sector =
        subtended_sector(rsu_xy, est.reported, est.uncertainty_radius_m, tx_array.boresight);
    set.degenerate_tx = tx_sector.kind == SideSector::Kind::Degenerate;

    std::vector<int> tx_beams;
    std::vector<double> tx_u(static_cast<std::size_t>(tx_array.n));
    for (int k = 0; k < tx_array.n; ++k) {
        tx_u[static_cast<std::size_t>(k)] =
            dft_beam_sin_center(tx_array.n, k, tx_array.spacing_wavelengths);
        if (beam_overlaps(tx_u[static_cast<std::size_t>(k)], tx_sector, tx_halfwidth, tx_period))
            tx_beams.push_back(k);
    }

    // Receive side: the vehicle knows the RSU exactly but its own position
    // only within the same disk, which subtends the same half-angle.
    struct RxBeam {
        int global = 0;
        double u = 0.0;
        const SideSector* sector = nullptr;
        double period = 0.0;
    };
    std::vector<SideSector> rx_sectors(rx.arrays.size());
    std::vector<RxBeam> rx_all;
    std::vector<int> rx_beams;
    bool rx_degenerate = false;
    int offset = 0;
    for (std::size_t a = 0; a < rx.arrays.size(); ++a) {
        const Ula& array = rx.arrays[a];
        const bool allowed = !rx.restrict_to_array || *rx.restrict_to_array == static_cast<int>(a);
        rx_sectors[a] =
            subtended_sector(est.reported, rsu_xy, est.uncertainty_radius_m, array.boresight);
        if (allowed) {
            if (rx_sectors[a].kind == SideSector::Kind::Degenerate) rx_degenerate = true;
            const double period = 1.0 / array.spacing_wavelengths;
            const double halfwidth = 1.0 / (array.n * array.spacing_wavelengths);
            for (int k = 0; k < array.n; ++k) {
                const double u = dft_beam_sin_center(array.n, k, array.spacing_wavelengths);
                rx_all.push_back({offset + k, u, &rx_sectors[a], period});
                if (beam_overlaps(u, rx_sectors[a], halfwidth, period))
                    rx_beams.push_back(offset + k);
            }
        }
        offset += array.n;
    }
    set.degenerate_rx = rx_degenerate;

    for (int t : tx_beams)
        for (int r : rx_beams) set.pairs.push_back({t, r});

    if (budget_pairs) {
        // Order the whole allowed pair space by how far each side sits from
        // its sector, then cut at the budget. In-sector pairs keep tx-major
        // order, so an ample budget reproduces the unbudgeted set.
        struct Scored {
            double dist;
            int tx;
            int rx;
        };
        std::vector<Scored> scored;
        scored.reserve(static_cast<std::size_t>(tx_array.n) * rx_all.size());
        for (int t = 0; t < tx_array.n; ++t) {
            const double dt =
                distance_to_sector(tx_u[static_cast<std::size_t>(t)], tx_sector, tx_period);
            for (const RxBeam& rb : rx_all) {
                const double dr = distance_to_sector(rb.u, *rb.sector, rb.period);
                scored.push_back({dt + dr, t, rb.global});
            }
        }
        std::sort(scored.begin(), scored.end(), [](const Scored& a, const Scored& b) {
            return std::tie(a.dist, a.tx, a.rx) < std::tie(b.dist, b.tx, b.rx);
        });
        const std::size_t take =
            std::min(scored.size(), static_cast<std::size_t>(std::max(0, *budget_pairs)));
        set.pairs.clear();
        set.pairs.reserve(take);
        for (std::size_t i = 0; i < take; ++i) set.pairs.push_back({scored[i].tx, scored[i].rx});
    }
    return set;
}

CandidateSet aps_candidates(const SpatialCovariance& comm_cov, const Codebook& cb_tx,
                            const std::vector<int>& rx_indices, int budget_symbols) {
    const int n_rx = static_cast<int>(rx_indices.size());
    if (n_rx < 1) throw std::invalid_argument("aps_candidates needs at least one rx beam");
    if (budget_symbols < n_rx)
        throw std::invalid_argument("budget_symbols must be >= the rx beam count");
    const int n = static_cast<int>(comm_cov.r.rows());
    if (cb_tx.beam_count() != n)
        throw std::invalid_argument("tx codebook does not match covariance dimension");

    // Beam-aligned power f_k^H R f_k, evaluated in the lag domain of the DFT
    // codebook. Exactly equal diagonals (for example R = I) give exactly
    // tied scores, so the index tie-break is reproducible.
    std::vector<std::complex<double>> lag(static_cast<std::size_t>(n));
    for (int tau = 0; tau < n; ++tau) {
        std::complex<double> acc{0.0, 0.0};
        for (int m = 0; m + tau < n; ++m) acc += comm_cov.r(m, m + tau);
        lag[static_cast<std::size_t>(tau)] = acc;
    }
    std::vector<double> score(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        double s = lag[0].real();
        for (int tau = 1; tau < n; ++tau) {
            const double phase = 2.0 * kPi * k * tau / n;
            s += 2.0 * (lag[static_cast<std::size_t>(tau)] * std::polar(1.0, phase)).real();
        }
        score[static_cast<std::size_t>(k)] = s / n;
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) order[static_cast<std::size_t>(k)] = k;
    std::sort(order.begin(), order.end(), [&](int a, int b) {
        const double sa = score[static_cast<std::size_t>(a)];
        const double sb = score[static_cast<std::size_t>(b)];
        return sa != sb ? sa > sb : a < b;
    });

    const int top = std::min(budget_symbols / n_rx, n);
    CandidateSet set;
    set.strategy = Strategy::ApsAssisted;
    set.pairs.reserve(static_cast<std::size_t>(top) * static_cast<std::size_t>(n_rx));
    for (int i = 0; i < top; ++i)
        for (int r : rx_indices) set.pairs.push_back({order[static_cast<std::size_t>(i)], r});
    return set;
}

TrainingOutcome run_training(const Channel& channel, const Codebook& cb_tx,
                             const Codebook& cb_rx, const CandidateSet& candidates,
                             double tx_power_dbm, double noise_power_dbm, Rng& rng, bool noisy) {
    if (candidates.pairs.empty()) throw std::invalid_argument("empty candidate set");

    std::map<int, int> tx_col, rx_col;
    for (const BeamPair& p : candidates.pairs) {
        tx_col.emplace(p.tx, 0);
        rx_col.emplace(p.rx, 0);
    }
    cmat tx_sub(cb_tx.beams.rows(), tx_col.size());
    int c = 0;
    for (auto& [idx, col] : tx_col) {
        col = c;
        tx_sub.col(c++) = cb_tx.beams.col(idx);
    }
    cmat rx_sub(cb_rx.beams.rows(), rx_col.size());
    c = 0;
    for (auto& [idx, col] : rx_col) {
        col = c;
        rx_sub.col(c++) = cb_rx.beams.col(idx);
    }

    const cmat g = kernels::beam_gain_matrix(channel.h, tx_sub, rx_sub);
    const double p_lin = std::pow(10.0, tx_power_dbm / 10.0);
    const double noise_lin = std::pow(10.0, noise_power_dbm / 10.0);
    const double amp = std::sqrt(p_lin);
    const double noise_amp = std::sqrt(noise_lin);

    TrainingOutcome out;
    double best_metric = -1.0;
    for (const BeamPair& pair : candidates.pairs) {
        const std::complex<double> base = amp * g(rx_col[pair.rx], tx_col[pair.tx]);
        const double metric = noisy ? std::norm(base + noise_amp * rng.cnormal())
                                    : std::norm(base);
        if (metric > best_metric) {
            best_metric = metric;
            out.best = pair;
        }
    }
    const std::complex<double> winner = amp * g(rx_col[out.best.rx], tx_col[out.best.tx]);
    out.noiseless_metric = std::norm(winner);
    out.measured_snr_db = 10.0 * std::log10(std::max(best_metric, 1e-300) / noise_lin);
    return out;
}

OverheadReport overhead(long long pair_count, double symbol_duration_s) {
    if (pair_count < 0) throw std::invalid_argument("pair_count must be nonnegative");
    OverheadReport report;
    report.pair_count = pair_count;
    report.symbol_duration_s = symbol_duration_s;
    report.training_time_s = static_cast<double>(pair_count) * symbol_duration_s;
    return report;
}

}  // namespace beamsense
