#pragma once

// Experiment configuration: defaults, JSON file loading with strict
// unknown-key rejection, and serialization back to JSON.

#include <cstdint>
#include <string>
#include <vector>

#include "beamsense/scene.hpp"
#include "beamsense/sensing.hpp"

namespace beamsense {

struct CommConfig {
    int rsu_antennas = 128;
    double carrier_hz = 73e9;
    int vehicle_array_antennas = 16;
    int vehicle_array_count = 4;
    double spacing_wavelengths = 0.5;
    double tx_power_dbm = 30.0;
    double noise_power_dbm = -84.0;
    std::string rx_array_mode = "union";  // or "best_facing"
};

struct PassiveRadarConfig {
    int rsu_antennas = 128;
    double carrier_hz = 76e9;
    double tx_power_dbm = 10.0;
    double bandwidth_hz = 250e6;
    double noise_figure_db = 12.0;
    double processing_gain_db = 48.0;
    int snapshots = 64;
    int grid_size = 512;
};

struct ExperimentConfig {
    SceneConfig scene;
    CommConfig comm;
    RadarSpec radar;  // RSU positioning radar
    PassiveRadarConfig passive;
    std::vector<std::string> strategies{"exhaustive", "position-gnss", "aps"};
    int trials = 1000;
    std::uint64_t seed = 7;
    bool noisy_training = false;
    int budget_symbols = 560;
    bool nlos_only = false;
    double gnss_radius_m = 5.0;
    int threads = 0;  // 0 = runtime default

    void validate() const;
};

/// Parse a JSON config file. Missing keys keep their defaults; unknown keys
/// are errors. Throws ConfigError / IoError.
ExperimentConfig load_experiment_config(const std::string& path);

ExperimentConfig parse_experiment_config(const std::string& json_text);

std::string experiment_config_to_json(const ExperimentConfig& config);

}  // namespace beamsense
