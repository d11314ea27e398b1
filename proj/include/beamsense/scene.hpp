#pragma once

// Urban-canyon drop generator: a straight road flanked by two building
// walls, randomly dropped vehicles, an elevated RSU, and the ego vehicle
// that carries the communication receiver and the automotive radar.

#include <cstdint>
#include <vector>

#include "beamsense/geometry.hpp"

namespace beamsense {

struct VehicleDims {
    double length_m = 5.0;
    double width_m = 2.0;
    double height_m = 1.6;
};

struct SceneConfig {
    double road_width_m = 20.0;
    double canyon_length_m = 200.0;
    double building_setback_m = 5.0;   // building face to road edge
    double building_height_m = 25.0;
    double rsu_height_m = 5.0;
    double rsu_offset_along_road_m = 0.0;
    VehicleDims vehicle_dims;          // passenger car
    VehicleDims truck_dims{10.0, 2.5, 3.5};
    double truck_fraction = 0.3;       // tall vehicles create NLOS drops
    int lane_count = 4;
    double inter_vehicle_gap_mean_m = 17.0;
    int vehicle_count = 12;
    double reflection_loss_concrete_db = 6.0;
    double reflection_loss_metal_db = 3.0;
    std::uint64_t seed = 1;

    /// Throws ConfigError when an invariant is violated.
    void validate() const;
};

struct VehicleBox {
    BoxFootprint box;
    double heading = 0.0;  // 0 = +x, pi = -x
    bool is_truck = false;
};

struct Scene {
    std::vector<WallFace> building_faces;
    std::vector<VehicleBox> vehicles;
    Pose rsu_pose;                 // elevated, boresight across the road
    int ego_vehicle_index = 0;
    Pose ego_array_pose;           // roof center, boresight = heading
    double vehicle_reflection_loss_db = 3.0;
    std::uint64_t drop_seed = 0;

    const VehicleBox& ego() const { return vehicles[static_cast<std::size_t>(ego_vehicle_index)]; }

    /// Front-bumper mount of the ego automotive radar transmitter.
    Pose ego_radar_pose() const;
};

/// Deterministic function of the config (including its seed). Throws
/// InfeasibleDrop when the vehicles cannot be packed into the canyon.
Scene build_scene(const SceneConfig& config);

}  // namespace beamsense
