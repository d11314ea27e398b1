#include "beamsense/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "beamsense/errors.hpp"

namespace beamsense {

namespace {

using nlohmann::json;

void reject_unknown_keys(const json& obj, const std::set<std::string>& known,
                         const std::string& scope) {
    for (auto it = obj.begin(); it != obj.end(); ++it)
        if (!known.count(it.key()))
            throw ConfigError("unknown config key: " + scope + "." + it.key());
}

template <typename T>
void read(const json& obj, const char* key, T& out) {
    if (!obj.contains(key)) return;
    try {
        out = obj.at(key).get<T>();
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad value for ") + key + ": " + e.what());
    }
}

void parse_dims(const json& obj, const std::string& scope, VehicleDims& dims) {
    reject_unknown_keys(obj, {"length_m", "width_m", "height_m"}, scope);
    read(obj, "length_m", dims.length_m);
    read(obj, "width_m", dims.width_m);
    read(obj, "height_m", dims.height_m);
}

void parse_scene(const json& obj, SceneConfig& scene) {
    reject_unknown_keys(obj,
                        {"road_width_m", "canyon_length_m", "building_setback_m",
                         "building_height_m", "rsu_height_m", "rsu_offset_along_road_m",
                         "vehicle", "truck", "truck_fraction", "lane_count",
                         "inter_vehicle_gap_mean_m", "vehicle_count",
                         "reflection_loss_concrete_db", "reflection_loss_metal_db", "seed"},
                        "scene");
    read(obj, "road_width_m", scene.road_width_m);
    read(obj, "canyon_length_m", scene.canyon_length_m);
    read(obj, "building_setback_m", scene.building_setback_m);
    read(obj, "building_height_m", scene.building_height_m);
    read(obj, "rsu_height_m", scene.rsu_height_m);
    read(obj, "rsu_offset_along_road_m", scene.rsu_offset_along_road_m);
    if (obj.contains("vehicle")) parse_dims(obj.at("vehicle"), "scene.vehicle", scene.vehicle_dims);
    if (obj.contains("truck")) parse_dims(obj.at("truck"), "scene.truck", scene.truck_dims);
    read(obj, "truck_fraction", scene.truck_fraction);
    read(obj, "lane_count", scene.lane_count);
    read(obj, "inter_vehicle_gap_mean_m", scene.inter_vehicle_gap_mean_m);
    read(obj, "vehicle_count", scene.vehicle_count);
    read(obj, "reflection_loss_concrete_db", scene.reflection_loss_concrete_db);
    read(obj, "reflection_loss_metal_db", scene.reflection_loss_metal_db);
    read(obj, "seed", scene.seed);
}

void parse_comm(const json& obj, CommConfig& comm) {
    reject_unknown_keys(obj,
                        {"rsu_antennas", "carrier_hz", "vehicle_array_antennas",
                         "vehicle_array_count", "spacing_wavelengths", "tx_power_dbm",
                         "noise_power_dbm", "rx_array_mode"},
                        "comm");
    read(obj, "rsu_antennas", comm.rsu_antennas);
    read(obj, "carrier_hz", comm.carrier_hz);
    read(obj, "vehicle_array_antennas", comm.vehicle_array_antennas);
    read(obj, "vehicle_array_count", comm.vehicle_array_count);
    read(obj, "spacing_wavelengths", comm.spacing_wavelengths);
    read(obj, "tx_power_dbm", comm.tx_power_dbm);
    read(obj, "noise_power_dbm", comm.noise_power_dbm);
    read(obj, "rx_array_mode", comm.rx_array_mode);
}

void parse_radar(const json& obj, RadarSpec& radar) {
    reject_unknown_keys(obj,
                        {"virtual_antennas", "carrier_hz", "tx_power_dbm", "bandwidth_hz",
                         "noise_figure_db", "target_rcs_dbsm", "processing_gain_db"},
                        "radar");
    read(obj, "virtual_antennas", radar.virtual_antennas);
    read(obj, "carrier_hz", radar.carrier_hz);
    read(obj, "tx_power_dbm", radar.tx_power_dbm);
    read(obj, "bandwidth_hz", radar.bandwidth_hz);
    read(obj, "noise_figure_db", radar.noise_figure_db);
    read(obj, "target_rcs_dbsm", radar.target_rcs_dbsm);
    read(obj, "processing_gain_db", radar.processing_gain_db);
}

void parse_passive(const json& obj, PassiveRadarConfig& passive) {
    reject_unknown_keys(obj,
                        {"rsu_antennas", "carrier_hz", "tx_power_dbm", "bandwidth_hz",
                         "noise_figure_db", "processing_gain_db", "snapshots", "grid_size"},
                        "passive");
    read(obj, "rsu_antennas", passive.rsu_antennas);
    read(obj, "carrier_hz", passive.carrier_hz);
    read(obj, "tx_power_dbm", passive.tx_power_dbm);
    read(obj, "bandwidth_hz", passive.bandwidth_hz);
    read(obj, "noise_figure_db", passive.noise_figure_db);
    read(obj, "processing_gain_db", passive.processing_gain_db);
    read(obj, "snapshots", passive.snapshots);
    read(obj, "grid_size", passive.grid_size);
}

void parse_campaign(const json& obj, ExperimentConfig& cfg) {
    reject_unknown_keys(obj,
                        {"strategies", "trials", "seed", "noisy_training", "budget_symbols",
                         "nlos_only", "gnss_radius_m", "threads"},
                        "campaign");
    read(obj, "strategies", cfg.strategies);
    read(obj, "trials", cfg.trials);
    read(obj, "seed", cfg.seed);
    read(obj, "noisy_training", cfg.noisy_training);
    read(obj, "budget_symbols", cfg.budget_symbols);
    read(obj, "nlos_only", cfg.nlos_only);
    read(obj, "gnss_radius_m", cfg.gnss_radius_m);
    read(obj, "threads", cfg.threads);
}

}  // namespace beamsense::<anonymous>

void ExperimentConfig::validate() const {
    scene.validate();
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("experiment config: " + what);
    };
    require(trials >= 1, "trials must be >= 1");
    require(comm.rsu_antennas >= 1 && comm.vehicle_array_antennas >= 1,
            "antenna counts must be positive");
    require(comm.vehicle_array_count >= 1, "vehicle_array_count must be >= 1");
    require(comm.spacing_wavelengths > 0, "spacing must be positive");
    require(comm.carrier_hz > 0 && passive.carrier_hz > 0 && radar.carrier_hz > 0,
            "carriers must be positive");
    require(comm.rx_array_mode == "union" || comm.rx_array_mode == "best_facing",
            "rx_array_mode must be union or best_facing");
    require(radar.virtual_antennas >= 2, "radar needs >= 2 virtual antennas");
    require(passive.snapshots >= 1, "snapshots must be >= 1");
    require(passive.grid_size >= 2, "grid_size must be >= 2");
    require(budget_symbols >= comm.vehicle_array_antennas,
            "budget_symbols must cover at least one rx sweep");
    require(gnss_radius_m >= 0, "gnss_radius_m must be nonnegative");
    for (const std::string& s : strategies)
        require(s == "exhaustive" || s == "position-gnss" || s == "position-radar" || s == "aps",
                "unknown strategy: " + s);
}

ExperimentConfig parse_experiment_config(const std::string& json_text) {
    json root;
    try {
        root = json::parse(json_text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("invalid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    reject_unknown_keys(root, {"scene", "comm", "radar", "passive", "campaign"}, "root");

    ExperimentConfig cfg;
    if (root.contains("scene")) parse_scene(root.at("scene"), cfg.scene);
    if (root.contains("comm")) parse_comm(root.at("comm"), cfg.comm);
    if (root.contains("radar")) parse_radar(root.at("radar"), cfg.radar);
    if (root.contains("passive")) parse_passive(root.at("passive"), cfg.passive);
    if (root.contains("campaign")) parse_campaign(root.at("campaign"), cfg);
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    return parse_experiment_config(buffer.str());
}

std::string experiment_config_to_json(const ExperimentConfig& cfg) {
    json root;
    root["scene"] = {
        {"road_width_m", cfg.scene.road_width_m},
        {"canyon_length_m", cfg.scene.canyon_length_m},
        {"building_setback_m", cfg.scene.building_setback_m},
        {"building_height_m", cfg.scene.building_height_m},
        {"rsu_height_m", cfg.scene.rsu_height_m},
        {"rsu_offset_along_road_m", cfg.scene.rsu_offset_along_road_m},
        {"vehicle",
         {{"length_m", cfg.scene.vehicle_dims.length_m},
          {"width_m", cfg.scene.vehicle_dims.width_m},
          {"height_m", cfg.scene.vehicle_dims.height_m}}},
        {"truck",
         {{"length_m", cfg.scene.truck_dims.length_m},
          {"width_m", cfg.scene.truck_dims.width_m},
          {"height_m", cfg.scene.truck_dims.height_m}}},
        {"truck_fraction", cfg.scene.truck_fraction},
        {"lane_count", cfg.scene.lane_count},
        {"inter_vehicle_gap_mean_m", cfg.scene.inter_vehicle_gap_mean_m},
        {"vehicle_count", cfg.scene.vehicle_count},
        {"reflection_loss_concrete_db", cfg.scene.reflection_loss_concrete_db},
        {"reflection_loss_metal_db", cfg.scene.reflection_loss_metal_db},
        {"seed", cfg.scene.seed},
    };
    root["comm"] = {
        {"rsu_antennas", cfg.comm.rsu_antennas},
        {"carrier_hz", cfg.comm.carrier_hz},
        {"vehicle_array_antennas", cfg.comm.vehicle_array_antennas},
        {"vehicle_array_count", cfg.comm.vehicle_array_count},
        {"spacing_wavelengths", cfg.comm.spacing_wavelengths},
        {"tx_power_dbm", cfg.comm.tx_power_dbm},
        {"noise_power_dbm", cfg.comm.noise_power_dbm},
        {"rx_array_mode", cfg.comm.rx_array_mode},
    };
    root["radar"] = {
        {"virtual_antennas", cfg.radar.virtual_antennas},
        {"carrier_hz", cfg.radar.carrier_hz},
        {"tx_power_dbm", cfg.radar.tx_power_dbm},
        {"bandwidth_hz", cfg.radar.bandwidth_hz},
        {"noise_figure_db", cfg.radar.noise_figure_db},
        {"target_rcs_dbsm", cfg.radar.target_rcs_dbsm},
        {"processing_gain_db", cfg.radar.processing_gain_db},
    };
    root["passive"] = {
        {"rsu_antennas", cfg.passive.rsu_antennas},
        {"carrier_hz", cfg.passive.carrier_hz},
        {"tx_power_dbm", cfg.passive.tx_power_dbm},
        {"bandwidth_hz", cfg.passive.bandwidth_hz},
        {"noise_figure_db", cfg.passive.noise_figure_db},
        {"processing_gain_db", cfg.passive.processing_gain_db},
        {"snapshots", cfg.passive.snapshots},
        {"grid_size", cfg.passive.grid_size},
    };
    root["campaign"] = {
        {"strategies", cfg.strategies},
        {"trials", cfg.trials},
        {"seed", cfg.seed},
        {"noisy_training", cfg.noisy_training},
        {"budget_symbols", cfg.budget_symbols},
        {"nlos_only", cfg.nlos_only},
        {"gnss_radius_m", cfg.gnss_radius_m},
        {"threads", cfg.threads},
    };
    return root.dump(2);
}

}  // namespace beamsense
