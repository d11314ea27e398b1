#include "beamsense/scene.hpp"

#include <algorithm>
#include <string>

#include "beamsense/errors.hpp"
#include "beamsense/rng.hpp"

namespace beamsense {

namespace {
constexpr double kMinHeadwayM = 1.0;
constexpr double kBumperHeightM = 0.5;
constexpr std::uint64_t kSceneStream = 0x5CE9EULL;
}  // namespace

void SceneConfig::validate() const {
    auto require = [](bool ok, const std::string& what) {
        if (!ok) throw ConfigError("scene config: " + what);
    };
    require(road_width_m > 0, "road_width_m must be positive");
    require(canyon_length_m > 0, "canyon_length_m must be positive");
    require(building_setback_m > 0, "building_setback_m must be positive");
    require(building_height_m > 0, "building_height_m must be positive");
    require(rsu_height_m > 0, "rsu_height_m must be positive");
    require(vehicle_dims.length_m > 0 && vehicle_dims.width_m > 0 && vehicle_dims.height_m > 0,
            "vehicle dimensions must be positive");
    require(truck_dims.length_m > 0 && truck_dims.width_m > 0 && truck_dims.height_m > 0,
            "truck dimensions must be positive");
    require(truck_fraction >= 0.0 && truck_fraction <= 1.0, "truck_fraction must be in [0,1]");
    require(lane_count >= 1, "lane_count must be >= 1");
    require(vehicle_count >= 1, "vehicle_count must be >= 1");
    require(inter_vehicle_gap_mean_m > 0, "inter_vehicle_gap_mean_m must be positive");
    require(rsu_height_m > vehicle_dims.height_m, "rsu_height_m must exceed vehicle height");
    if (truck_fraction > 0.0)
        require(rsu_height_m > truck_dims.height_m, "rsu_height_m must exceed truck height");
    const double lane_width = road_width_m / lane_count;
    require(vehicle_dims.width_m <= lane_width && truck_dims.width_m <= lane_width,
            "vehicle width must fit inside one lane");
}

Pose Scene::ego_radar_pose() const {
    const VehicleBox& v = ego();
    const Vec2 dir{std::cos(v.heading), std::sin(v.heading)};
    Vec2 bumper = v.box.center + dir * v.box.half_length;
    return Pose{{bumper.x, bumper.y, kBumperHeightM}, v.heading};
}

Scene build_scene(const SceneConfig& config) {
    config.validate();
    Rng rng = Rng::fork(config.seed, kSceneStream);

    const int n = config.vehicle_count;
    std::vector<bool> is_truck(static_cast<std::size_t>(n));
    double min_footprint = 0.0;
    for (int i = 0; i < n; ++i) {
        is_truck[static_cast<std::size_t>(i)] = rng.uniform() < config.truck_fraction;
        const VehicleDims& d = is_truck[static_cast<std::size_t>(i)] ? config.truck_dims
                                                                     : config.vehicle_dims;
        min_footprint += d.length_m + kMinHeadwayM;
    }
    if (min_footprint > config.lane_count * config.canyon_length_m)
        throw InfeasibleDrop("vehicle_count cannot fit in canyon_length");

    const double min_x = -0.5 * config.canyon_length_m;
    const double max_x = 0.5 * config.canyon_length_m;
    const double lane_width = config.road_width_m / config.lane_count;

    Scene scene;
    scene.drop_seed = config.seed;
    scene.vehicle_reflection_loss_db = config.reflection_loss_metal_db;
    scene.vehicles.reserve(static_cast<std::size_t>(n));

    // Round-robin over lanes, each lane advancing its own cursor by
    // vehicle length plus an exponential headway floored at 1 m.
    std::vector<double> cursor(static_cast<std::size_t>(config.lane_count), min_x);
    for (int i = 0; i < n; ++i) {
        const VehicleDims& d = is_truck[static_cast<std::size_t>(i)] ? config.truck_dims
                                                                     : config.vehicle_dims;
        bool placed = false;
        for (int tried = 0; tried < config.lane_count && !placed; ++tried) {
            const int lane = (i + tried) % config.lane_count;
            double& x = cursor[static_cast<std::size_t>(lane)];
            const double headway = std::max(kMinHeadwayM,
                                            rng.exponential(config.inter_vehicle_gap_mean_m));
            if (x + headway + d.length_m > max_x) continue;
            VehicleBox v;
            v.box.center = {x + headway + 0.5 * d.length_m, (lane + 0.5) * lane_width};
            v.box.half_length = 0.5 * d.length_m;
            v.box.half_width = 0.5 * d.width_m;
            v.box.height = d.height_m;
            v.heading = (lane < (config.lane_count + 1) / 2) ? 0.0 : kPi;
            v.is_truck = is_truck[static_cast<std::size_t>(i)];
            scene.vehicles.push_back(v);
            x = v.box.center.x + v.box.half_length;
            placed = true;
        }
        if (!placed) throw InfeasibleDrop("random gaps exhausted all lanes");
    }

    scene.ego_vehicle_index = static_cast<int>(rng.uniform_int(static_cast<std::uint64_t>(n)));
    const VehicleBox& ego = scene.ego();
    scene.ego_array_pose =
        Pose{{ego.box.center.x, ego.box.center.y, ego.box.height}, ego.heading};

    // Two full-length building faces bracketing the road.
    const double south_y = -config.building_setback_m;
    const double north_y = config.road_width_m + config.building_setback_m;
    scene.building_faces.push_back(WallFace{{min_x, south_y},
                                            {max_x, south_y},
                                            config.building_height_m,
                                            config.reflection_loss_concrete_db});
    scene.building_faces.push_back(WallFace{{min_x, north_y},
                                            {max_x, north_y},
                                            config.building_height_m,
                                            config.reflection_loss_concrete_db});

    scene.rsu_pose = Pose{{config.rsu_offset_along_road_m, -0.5 * config.building_setback_m,
                           config.rsu_height_m},
                          0.5 * kPi};
    return scene;
}

}  // namespace beamsense
