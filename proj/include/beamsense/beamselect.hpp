#pragma once

// Candidate-set construction for the three beam-training strategies, the
// training sweep itself, and the overhead accounting.

#include <optional>
#include <vector>

#include "beamsense/phyarray.hpp"
#include "beamsense/rng.hpp"
#include "beamsense/sensing.hpp"

namespace beamsense {

enum class Strategy { Exhaustive, PositionAssisted, ApsAssisted };

struct BeamPair {
    int tx = 0;
    int rx = 0;
    friend bool operator==(const BeamPair&, const BeamPair&) = default;
};

struct CandidateSet {
    std::vector<BeamPair> pairs;
    Strategy strategy = Strategy::Exhaustive;
    bool degenerate_tx = false;  // fell back to the full codebook on that side
    bool degenerate_rx = false;
};

struct OverheadReport {
    long long pair_count = 0;
    double symbol_duration_s = 0.0;
    double training_time_s = 0.0;
};

constexpr double kSymbolDurationS = 4.75e-6;

/// Full Cartesian product, tx-major.
CandidateSet exhaustive_candidates(int n_tx_beams, int n_rx_beams);

/// Cartesian product of all tx beams with an explicit rx index subset.
CandidateSet cartesian_candidates(int n_tx_beams, const std::vector<int>& rx_indices);

/// Geometry of the receive side: one entry per array, boresights in the
/// scene frame; global rx beam a*n+k is array a's DFT beam k.
struct RxGeometry {
    std::vector<Ula> arrays;
    std::optional<int> restrict_to_array;  // engaged for single-panel search
};

/// Beams whose mainlobes (null-to-null, sine domain) intersect the angular
/// sector subtended by the uncertainty disk, on both link ends; optionally
/// truncated/padded to `budget_pairs` by sector-distance ordering. Falls
/// back to the full codebook on a side whose subtended angle is degenerate
/// (disk contains the viewpoint).
CandidateSet position_candidates(const PositionEstimate& est, const Vec2& rsu_xy,
                                 const Ula& tx_array, const RxGeometry& rx,
                                 std::optional<int> budget_pairs = std::nullopt);

/// Top floor(budget/n_rx) tx beams by beam-aligned covariance power, each
/// paired with every rx beam in `rx_indices`.
CandidateSet aps_candidates(const SpatialCovariance& comm_cov, const Codebook& cb_tx,
                            const std::vector<int>& rx_indices, int budget_symbols);

struct TrainingOutcome {
    BeamPair best;
    double measured_snr_db = 0.0;
    double noiseless_metric = 0.0;  // P * |w^H H f|^2 of the winner, mW
};

/// Sweep the candidate pairs and return the argmax of the measured power
/// (fresh complex Gaussian noise per measurement when `noisy`). Ties keep
/// the first candidate in order.
TrainingOutcome run_training(const Channel& channel, const Codebook& cb_tx,
                             const Codebook& cb_rx, const CandidateSet& candidates,
                             double tx_power_dbm, double noise_power_dbm, Rng& rng, bool noisy);

OverheadReport overhead(long long pair_count, double symbol_duration_s = kSymbolDurationS);

}  // namespace beamsense
