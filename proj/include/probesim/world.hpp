#pragma once

#include <vector>

#include "probesim/errors.hpp"
#include "probesim/geometry.hpp"
#include "probesim/terrain.hpp"

namespace probesim {

struct RoverPath {
    std::vector<Vec2> waypoints;
    double speed = 0.4;             // m/s along the path
    double start_time = 0.0;        // s; rover rests at waypoint 0 before this
    double trunk_height = 1.5;      // m above terrain
    double trunk_half_extent = 0.5; // m, half side of the square landing zone

    void validate() const {
        if (waypoints.empty()) throw ScenarioInvalid("rover.waypoints must contain >= 1 point");
        if (speed < 0.0) throw ScenarioInvalid("rover.speed must be >= 0");
        if (trunk_half_extent <= 0.0) throw ScenarioInvalid("rover.trunk_half_extent must be > 0");
    }
};

struct RoverPose {
    Vec3 position;  // trunk-top center
    Vec2 velocity;
};

// Piecewise-linear constant-speed traversal, clamped at the last waypoint.
inline RoverPose rover_pose(const RoverPath& path, const Terrain& terrain, double t) {
    const auto lift = [&](Vec2 p) {
        return Vec3{p.x, p.y, terrain_height(terrain, p.x, p.y) + path.trunk_height};
    };

    const Vec2 first = path.waypoints.front();
    if (t < path.start_time || path.speed == 0.0 || path.waypoints.size() < 2)
        return {lift(first), {0.0, 0.0}};

    double remaining = path.speed * (t - path.start_time);
    for (std::size_t i = 0; i + 1 < path.waypoints.size(); ++i) {
        const Vec2 a = path.waypoints[i];
        const Vec2 b = path.waypoints[i + 1];
        const double seg_len = norm(b - a);
        if (seg_len <= 0.0) continue;
        if (remaining < seg_len) {
            const Vec2 dir = (1.0 / seg_len) * (b - a);
            const Vec2 p = a + remaining * dir;
            return {lift(p), path.speed * dir};
        }
        remaining -= seg_len;
    }
    return {lift(path.waypoints.back()), {0.0, 0.0}};
}

struct WorldState {
    double t = 0.0;
    Vec3 probe_position;
    bool probe_attached = false;
    bool probe_deployed = false;
    Vec3 rover_position;
    Vec2 rover_velocity;
};

inline WorldState attach_probe(WorldState world, Vec3 vehicle_position,
                               double carry_offset = 0.3) {
    if (world.probe_attached) throw AttachWhileAttached();
    if (world.probe_deployed) throw AttachAfterDeploy();
    world.probe_attached = true;
    world.probe_position = vehicle_position - Vec3{0.0, 0.0, carry_offset};
    return world;
}

inline WorldState detach_probe(WorldState world, const Terrain& terrain) {
    if (!world.probe_attached) throw DetachWhileDetached();
    world.probe_attached = false;
    world.probe_deployed = true;
    world.probe_position.z = terrain_height(terrain, world.probe_position.x,
                                            world.probe_position.y);
    return world;
}

// One fixed-dt tick of ground truth. The probe follows the vehicle while
// attached; the rover follows its scripted path.
inline WorldState step_world(WorldState world, const RoverPath& path, const Terrain& terrain,
                             Vec3 vehicle_position, double dt, double carry_offset = 0.3) {
    world.t += dt;
    const RoverPose rp = rover_pose(path, terrain, world.t);
    world.rover_position = rp.position;
    world.rover_velocity = rp.velocity;
    if (world.probe_attached)
        world.probe_position = vehicle_position - Vec3{0.0, 0.0, carry_offset};
    return world;
}

inline WorldState make_world(const RoverPath& path, const Terrain& terrain, Vec2 probe_spawn) {
    WorldState w;
    w.t = 0.0;
    w.probe_position = {probe_spawn.x, probe_spawn.y,
                        terrain_height(terrain, probe_spawn.x, probe_spawn.y)};
    const RoverPose rp = rover_pose(path, terrain, 0.0);
    w.rover_position = rp.position;
    w.rover_velocity = rp.velocity;
    return w;
}

}  // namespace probesim
