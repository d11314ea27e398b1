#pragma once

// Monte Carlo campaign runner and result export. Trials are independent
// tasks with counter-split RNG streams, so parallel runs are bit-identical
// to serial ones and to each other at any thread count.

#include <iosfwd>
#include <string>
#include <vector>

#include "beamsense/beamselect.hpp"
#include "beamsense/config.hpp"

namespace beamsense {

struct TrialStrategyRecord {
    std::string strategy;
    long long pair_count = 0;
    int chosen_tx = 0;
    int chosen_rx = 0;
    bool success = false;
    double snr_gap_db = 0.0;
};

struct TrialRecord {
    int trial = 0;
    std::uint64_t drop_seed = 0;
    ChannelState state = ChannelState::Los;
    int resamples = 0;
    int gt_tx = 0;
    int gt_rx = 0;
    std::vector<TrialStrategyRecord> strategies;
};

struct StrategySummary {
    std::string strategy;
    int trials = 0;
    double success_pct = 0.0;
    double mean_pairs = 0.0;
    double mean_time_ms = 0.0;
    double mean_snr_gap_db = 0.0;
    double wilson_lo_pct = 0.0;  // 95% interval on the success percentage
    double wilson_hi_pct = 0.0;
};

struct CampaignResult {
    std::vector<StrategySummary> summary;
    std::vector<TrialRecord> trials;
    long long total_resamples = 0;
};

CampaignResult run_campaign(const ExperimentConfig& config);

/// summary.csv + trials.csv (csv) or results.json (json) under `out_dir`.
/// Serialization is stable: fixed column order, 6 significant digits.
void emit_results(const CampaignResult& result, const std::string& format,
                  const std::string& out_dir);

CampaignResult load_result_json(const std::string& path);

bool results_equal(const CampaignResult& a, const CampaignResult& b);

/// Controlled LOS sweep used for the position-pruning overhead comparison:
/// one vehicle per drop, plan ranges swept across [range_min, range_max].
struct SweepConfig {
    int drops = 500;
    double range_min_m = 15.0;
    double range_max_m = 60.0;
    std::uint64_t seed = 11;
    int rsu_antennas = 64;
    int vehicle_array_antennas = 16;
    int vehicle_array_count = 4;
    double spacing_wavelengths = 0.5;
    double gnss_radius_m = 5.0;
    RadarSpec radar;
};

struct SweepResult {
    double mean_gnss_pairs = 0.0;
    double mean_radar_pairs = 0.0;
    double fraction_radar_smaller = 0.0;  // drops where radar < gnss
    std::vector<long long> gnss_counts;
    std::vector<long long> radar_counts;
};

SweepResult run_position_sweep(const SweepConfig& config);

struct OverheadRow {
    std::string strategy;
    double mean_pair_count = 0.0;
    double training_time_ms = 0.0;
};

/// Exhaustive / GNSS / RSU-radar rows from the sweep means.
std::vector<OverheadRow> overhead_table(const SweepConfig& config);

/// Single-drop APS comparison: radar-derived versus comm-channel spectrum at
/// the RSU, plus their similarity.
struct ApsDemo {
    Aps radar_aps;
    Aps comm_aps;
    ApsSimilarity similarity;
    double range_m = 0.0;
    std::uint64_t drop_seed = 0;
};

ApsDemo run_aps_demo(const ExperimentConfig& config, double min_range_m = 45.0,
                     double max_range_m = 150.0);

/// Write a spectrum as "angle_deg,power" rows.
void write_aps_csv(const Aps& aps, const std::string& path);

/// Quick invariant suite; prints one line per check, returns failure count.
int run_validation(std::ostream& out);

}  // namespace beamsense
