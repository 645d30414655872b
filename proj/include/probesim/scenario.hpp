#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "probesim/control.hpp"
#include "probesim/errors.hpp"
#include "probesim/estimation.hpp"
#include "probesim/sensing.hpp"
#include "probesim/terrain.hpp"
#include "probesim/vehicle.hpp"
#include "probesim/world.hpp"

namespace probesim {

struct ProbeConfig {
    Vec2 spawn{30.0, 20.0};
    double radius = 0.25;       // visual radius, m
    double carry_offset = 0.3;  // m below vehicle center while attached

    void validate() const {
        if (radius <= 0.0) throw ScenarioInvalid("probe.radius must be > 0");
        if (carry_offset < 0.0) throw ScenarioInvalid("probe.carry_offset must be >= 0");
    }
};

struct RoverVisualConfig {
    double trunk_radius = 0.5;     // red trunk as seen by the detector
    double fiducial_radius = 0.1;  // fiducial marker on the trunk

    void validate() const {
        if (trunk_radius <= 0.0) throw ScenarioInvalid("rover.trunk_radius must be > 0");
        if (fiducial_radius <= 0.0) throw ScenarioInvalid("rover.fiducial_radius must be > 0");
    }
};

struct SonarConfig {
    double max_range = 10.0;

    void validate() const {
        if (max_range <= 0.0) throw ScenarioInvalid("sonar.max_range must be > 0");
    }
};

struct GpsConfig {
    double sigma = 0.5;
    std::vector<std::pair<double, double>> outages;  // [start, end) windows, s

    bool in_outage(double t) const {
        for (const auto& [start, end] : outages)
            if (t >= start && t < end) return true;
        return false;
    }

    void validate() const {
        if (sigma < 0.0) throw ScenarioInvalid("gps.sigma must be >= 0");
        for (const auto& [start, end] : outages)
            if (end < start) throw ScenarioInvalid("gps.outages: end must be >= start");
    }
};

struct OdometryConfig {
    double sigma = 0.1;
    double density_threshold = 0.3;

    void validate() const {
        if (sigma < 0.0) throw ScenarioInvalid("odometry.sigma must be >= 0");
        if (density_threshold < 0.0 || density_threshold > 1.0)
            throw ScenarioInvalid("odometry.density_threshold must be in [0,1]");
    }
};

struct Team1Config {
    double search_xmin = 20.0, search_ymin = 10.0, search_xmax = 40.0, search_ymax = 30.0;
    double search_spacing = 10.0;
    double search_altitude = 10.0;  // absolute z, doubles as cruise altitude
    double setpoint_gain = 0.8;     // 1/s
    double capture_radius = 1.5;
    double descent_rate = 0.8;
    double centering_gain = 0.5;
    double docking_max_distance = 0.6;
    double docking_max_inclination = deg2rad(30.0);
    double drop_release_altitude = 1.0;  // above ground at the drop point
    double rover_engage_radius = 3.0;    // horizontal, switch from cruise to descent
    double fiducial_engage_altitude = 5.0;  // above trunk, switch to fiducial servo
    double touchdown_altitude = 0.15;
    double touchdown_radius = 0.3;
    double lost_fail_s = 60.0;  // continuous tracking loss before the trial is LOST

    void validate() const {
        if (search_spacing <= 0.0) throw ScenarioInvalid("team1.search_spacing must be > 0");
        if (!(search_xmax > search_xmin) || !(search_ymax > search_ymin))
            throw ScenarioInvalid("team1.search bounds are degenerate");
        if (setpoint_gain <= 0.0) throw ScenarioInvalid("team1.setpoint_gain must be > 0");
        if (descent_rate <= 0.0) throw ScenarioInvalid("team1.descent_rate must be > 0");
        if (docking_max_distance <= 0.0) throw ScenarioInvalid("team1.docking_max_distance must be > 0");
        if (touchdown_altitude <= 0.0) throw ScenarioInvalid("team1.touchdown_altitude must be > 0");
        if (touchdown_radius <= 0.0) throw ScenarioInvalid("team1.touchdown_radius must be > 0");
    }
};

struct Team2Config {
    Vec2 spiral_center{15.0, 5.0};
    double spiral_step = 6.0;
    double spiral_max_radius = 25.0;
    double search_altitude = 10.0;  // absolute z, doubles as cruise altitude
    PidGains pid;                   // defaults match the velocity-control loop
    double setpoint_gain = 0.6;
    double capture_radius = 1.5;
    double descent_step = 1.0;  // vertical setpoint decrement while centered, m
    double centering_gain = 0.5;
    double docking_max_distance = 0.6;
    double docking_max_inclination = deg2rad(30.0);
    double trigger_range = 4.0;  // sonar range that forces a climb
    double climb_rate = 1.0;
    double drop_release_altitude = 1.0;
    double pursuit_far_range = 20.0;    // range at which the approach altitude tops out
    double pursuit_far_altitude = 5.0;  // above trunk at far range
    double pursuit_near_altitude = 0.5; // above trunk at zero range
    double confirm_altitude = 2.0;      // trunk must be seen before descending below this
    double commit_altitude = 0.15;      // vertical target once confirmed and over the trunk
    double touchdown_altitude = 0.3;
    bool velocity_feedforward = false;  // optional rover-velocity feedforward
    double gps_smoothing = 0.2;         // EMA weight per tick on raw fixes

    void validate() const {
        pid.validate();
        if (spiral_step <= 0.0) throw ScenarioInvalid("team2.spiral_step must be > 0");
        if (spiral_max_radius < 0.0) throw ScenarioInvalid("team2.spiral_max_radius must be >= 0");
        if (setpoint_gain <= 0.0) throw ScenarioInvalid("team2.setpoint_gain must be > 0");
        if (trigger_range <= 0.0) throw ScenarioInvalid("team2.trigger_range must be > 0");
        if (climb_rate <= 0.0) throw ScenarioInvalid("team2.climb_rate must be > 0");
        if (pursuit_far_range <= 0.0) throw ScenarioInvalid("team2.pursuit_far_range must be > 0");
        if (touchdown_altitude <= 0.0) throw ScenarioInvalid("team2.touchdown_altitude must be > 0");
        if (gps_smoothing <= 0.0 || gps_smoothing > 1.0)
            throw ScenarioInvalid("team2.gps_smoothing must be in (0,1]");
    }
};

struct Scenario {
    std::string name = "default";
    double dt = 0.05;
    double timeout = 600.0;
    std::uint64_t default_seed = 0;

    Terrain terrain;
    ProbeConfig probe;
    Vec2 drop_zone{0.0, 40.0};
    RoverPath rover;
    RoverVisualConfig rover_visual;
    Vec3 vehicle_start{0.0, 0.0, 10.0};
    VehicleLimits limits;
    CameraModel camera;
    SonarConfig sonar;
    GpsConfig gps;
    OdometryConfig odometry;
    KalmanParams kalman;
    Team1Config team1;
    Team2Config team2;

    Scenario() {
        rover.waypoints = {{-20.0, 40.0}, {60.0, 40.0}};
    }

    void validate() const {
        if (dt <= 0.0) throw ScenarioInvalid("dt must be > 0");
        if (timeout <= 0.0) throw ScenarioInvalid("timeout must be > 0");
        terrain.validate();
        probe.validate();
        rover.validate();
        rover_visual.validate();
        limits.validate();
        camera.validate();
        sonar.validate();
        gps.validate();
        odometry.validate();
        kalman.validate();
        team1.validate();
        team2.validate();
    }
};

namespace detail {

template <typename T>
T json_get(const nlohmann::json& j, const std::string& section, const char* key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioInvalid(section + "." + key + ": " + e.what());
    }
}

inline Vec2 json_vec2(const nlohmann::json& j, const std::string& section, const char* key,
                      Vec2 fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 2)
        throw ScenarioInvalid(section + "." + std::string(key) + ": expected [x, y]");
    return {a[0].get<double>(), a[1].get<double>()};
}

inline Vec3 json_vec3(const nlohmann::json& j, const std::string& section, const char* key,
                      Vec3 fallback) {
    if (!j.contains(key)) return fallback;
    const auto& a = j.at(key);
    if (!a.is_array() || a.size() != 3)
        throw ScenarioInvalid(section + "." + std::string(key) + ": expected [x, y, z]");
    return {a[0].get<double>(), a[1].get<double>(), a[2].get<double>()};
}

}  // namespace detail

inline Scenario scenario_from_json(const nlohmann::json& j) {
    using detail::json_get;
    Scenario sc;
    sc.name = json_get<std::string>(j, "scenario", "name", sc.name);
    sc.dt = json_get(j, "scenario", "dt", sc.dt);
    sc.timeout = json_get(j, "scenario", "timeout_s", sc.timeout);
    sc.default_seed = json_get(j, "scenario", "seed", sc.default_seed);

    if (j.contains("terrain")) {
        const auto& t = j.at("terrain");
        sc.terrain.base_height = json_get(t, "terrain", "base_height", sc.terrain.base_height);
        sc.terrain.default_density =
            json_get(t, "terrain", "default_density", sc.terrain.default_density);
        if (t.contains("hills")) {
            sc.terrain.hills.clear();
            for (const auto& h : t.at("hills")) {
                Hill hill;
                hill.center_x = json_get(h, "terrain.hills", "cx", 0.0);
                hill.center_y = json_get(h, "terrain.hills", "cy", 0.0);
                hill.amplitude = json_get(h, "terrain.hills", "amplitude", 0.0);
                hill.sigma = json_get(h, "terrain.hills", "sigma", 1.0);
                sc.terrain.hills.push_back(hill);
            }
        }
        if (t.contains("feature_patches")) {
            sc.terrain.feature_patches.clear();
            for (const auto& p : t.at("feature_patches")) {
                FeaturePatch patch;
                patch.center_x = json_get(p, "terrain.feature_patches", "cx", 0.0);
                patch.center_y = json_get(p, "terrain.feature_patches", "cy", 0.0);
                patch.radius = json_get(p, "terrain.feature_patches", "radius", 0.0);
                patch.density = json_get(p, "terrain.feature_patches", "density", 0.0);
                sc.terrain.feature_patches.push_back(patch);
            }
        }
    }

    if (j.contains("probe")) {
        const auto& p = j.at("probe");
        sc.probe.spawn = detail::json_vec2(p, "probe", "spawn", sc.probe.spawn);
        sc.probe.radius = json_get(p, "probe", "radius", sc.probe.radius);
        sc.probe.carry_offset = json_get(p, "probe", "carry_offset", sc.probe.carry_offset);
    }

    sc.drop_zone = detail::json_vec2(j, "scenario", "drop_zone", sc.drop_zone);

    if (j.contains("rover")) {
        const auto& r = j.at("rover");
        if (r.contains("waypoints")) {
            sc.rover.waypoints.clear();
            for (const auto& w : r.at("waypoints")) {
                if (!w.is_array() || w.size() != 2)
                    throw ScenarioInvalid("rover.waypoints: expected [x, y] entries");
                sc.rover.waypoints.push_back({w[0].get<double>(), w[1].get<double>()});
            }
        }
        sc.rover.speed = json_get(r, "rover", "speed", sc.rover.speed);
        sc.rover.start_time = json_get(r, "rover", "start_time", sc.rover.start_time);
        sc.rover.trunk_height = json_get(r, "rover", "trunk_height", sc.rover.trunk_height);
        sc.rover.trunk_half_extent =
            json_get(r, "rover", "trunk_half_extent", sc.rover.trunk_half_extent);
        sc.rover_visual.trunk_radius =
            json_get(r, "rover", "trunk_radius", sc.rover_visual.trunk_radius);
        sc.rover_visual.fiducial_radius =
            json_get(r, "rover", "fiducial_radius", sc.rover_visual.fiducial_radius);
    }

    if (j.contains("vehicle")) {
        const auto& v = j.at("vehicle");
        sc.vehicle_start = detail::json_vec3(v, "vehicle", "start", sc.vehicle_start);
        sc.limits.max_speed = json_get(v, "vehicle", "max_speed", sc.limits.max_speed);
        sc.limits.max_vertical_speed =
            json_get(v, "vehicle", "max_vertical_speed", sc.limits.max_vertical_speed);
        sc.limits.response_tau = json_get(v, "vehicle", "response_tau", sc.limits.response_tau);
        if (v.contains("pitch_gain_deg_per_mps"))
            sc.limits.pitch_gain = deg2rad(v.at("pitch_gain_deg_per_mps").get<double>());
        if (v.contains("pitch_max_deg"))
            sc.limits.pitch_max = deg2rad(v.at("pitch_max_deg").get<double>());
    }

    if (j.contains("camera")) {
        const auto& c = j.at("camera");
        if (c.contains("half_fov_deg")) sc.camera.half_fov = deg2rad(c.at("half_fov_deg").get<double>());
        sc.camera.image_width = json_get(c, "camera", "image_width", sc.camera.image_width);
        sc.camera.image_height = json_get(c, "camera", "image_height", sc.camera.image_height);
        sc.camera.pixel_noise_sigma =
            json_get(c, "camera", "pixel_noise_sigma", sc.camera.pixel_noise_sigma);
        sc.camera.min_detect_area =
            json_get(c, "camera", "min_detect_area", sc.camera.min_detect_area);
    }

    if (j.contains("sonar"))
        sc.sonar.max_range = json_get(j.at("sonar"), "sonar", "max_range", sc.sonar.max_range);

    if (j.contains("gps")) {
        const auto& g = j.at("gps");
        sc.gps.sigma = json_get(g, "gps", "sigma", sc.gps.sigma);
        if (g.contains("outages")) {
            sc.gps.outages.clear();
            for (const auto& o : g.at("outages")) {
                if (!o.is_array() || o.size() != 2)
                    throw ScenarioInvalid("gps.outages: expected [start, end] entries");
                sc.gps.outages.emplace_back(o[0].get<double>(), o[1].get<double>());
            }
        }
    }

    if (j.contains("odometry")) {
        const auto& o = j.at("odometry");
        sc.odometry.sigma = json_get(o, "odometry", "sigma", sc.odometry.sigma);
        sc.odometry.density_threshold =
            json_get(o, "odometry", "density_threshold", sc.odometry.density_threshold);
    }

    if (j.contains("kalman")) {
        const auto& k = j.at("kalman");
        sc.kalman.accel_noise_sigma =
            json_get(k, "kalman", "accel_noise_sigma", sc.kalman.accel_noise_sigma);
        sc.kalman.gps_sigma = json_get(k, "kalman", "gps_sigma", sc.kalman.gps_sigma);
        sc.kalman.odometry_sigma =
            json_get(k, "kalman", "odometry_sigma", sc.kalman.odometry_sigma);
        sc.kalman.lost_timeout = json_get(k, "kalman", "lost_timeout", sc.kalman.lost_timeout);
        sc.kalman.lost_cov_trace =
            json_get(k, "kalman", "lost_cov_trace", sc.kalman.lost_cov_trace);
    }

    if (j.contains("team1")) {
        const auto& t = j.at("team1");
        auto& c = sc.team1;
        if (t.contains("search_bounds")) {
            const auto& b = t.at("search_bounds");
            if (!b.is_array() || b.size() != 4)
                throw ScenarioInvalid("team1.search_bounds: expected [xmin, ymin, xmax, ymax]");
            c.search_xmin = b[0].get<double>();
            c.search_ymin = b[1].get<double>();
            c.search_xmax = b[2].get<double>();
            c.search_ymax = b[3].get<double>();
        }
        c.search_spacing = json_get(t, "team1", "search_spacing", c.search_spacing);
        c.search_altitude = json_get(t, "team1", "search_altitude", c.search_altitude);
        c.setpoint_gain = json_get(t, "team1", "setpoint_gain", c.setpoint_gain);
        c.capture_radius = json_get(t, "team1", "capture_radius", c.capture_radius);
        c.descent_rate = json_get(t, "team1", "descent_rate", c.descent_rate);
        c.centering_gain = json_get(t, "team1", "centering_gain", c.centering_gain);
        c.docking_max_distance =
            json_get(t, "team1", "docking_max_distance", c.docking_max_distance);
        if (t.contains("docking_max_inclination_deg"))
            c.docking_max_inclination = deg2rad(t.at("docking_max_inclination_deg").get<double>());
        c.drop_release_altitude =
            json_get(t, "team1", "drop_release_altitude", c.drop_release_altitude);
        c.rover_engage_radius = json_get(t, "team1", "rover_engage_radius", c.rover_engage_radius);
        c.fiducial_engage_altitude =
            json_get(t, "team1", "fiducial_engage_altitude", c.fiducial_engage_altitude);
        c.touchdown_altitude = json_get(t, "team1", "touchdown_altitude", c.touchdown_altitude);
        c.touchdown_radius = json_get(t, "team1", "touchdown_radius", c.touchdown_radius);
        c.lost_fail_s = json_get(t, "team1", "lost_fail_s", c.lost_fail_s);
    }

    if (j.contains("team2")) {
        const auto& t = j.at("team2");
        auto& c = sc.team2;
        c.spiral_center = detail::json_vec2(t, "team2", "spiral_center", c.spiral_center);
        c.spiral_step = json_get(t, "team2", "spiral_step", c.spiral_step);
        c.spiral_max_radius = json_get(t, "team2", "spiral_max_radius", c.spiral_max_radius);
        c.search_altitude = json_get(t, "team2", "search_altitude", c.search_altitude);
        if (t.contains("pid")) {
            const auto& p = t.at("pid");
            c.pid.kp = json_get(p, "team2.pid", "kp", c.pid.kp);
            c.pid.ki = json_get(p, "team2.pid", "ki", c.pid.ki);
            c.pid.kd = json_get(p, "team2.pid", "kd", c.pid.kd);
            c.pid.time_interval = json_get(p, "team2.pid", "time_interval", c.pid.time_interval);
        }
        c.setpoint_gain = json_get(t, "team2", "setpoint_gain", c.setpoint_gain);
        c.capture_radius = json_get(t, "team2", "capture_radius", c.capture_radius);
        c.descent_step = json_get(t, "team2", "descent_step", c.descent_step);
        c.centering_gain = json_get(t, "team2", "centering_gain", c.centering_gain);
        c.docking_max_distance =
            json_get(t, "team2", "docking_max_distance", c.docking_max_distance);
        if (t.contains("docking_max_inclination_deg"))
            c.docking_max_inclination = deg2rad(t.at("docking_max_inclination_deg").get<double>());
        c.trigger_range = json_get(t, "team2", "trigger_range", c.trigger_range);
        c.climb_rate = json_get(t, "team2", "climb_rate", c.climb_rate);
        c.drop_release_altitude =
            json_get(t, "team2", "drop_release_altitude", c.drop_release_altitude);
        c.pursuit_far_range = json_get(t, "team2", "pursuit_far_range", c.pursuit_far_range);
        c.pursuit_far_altitude =
            json_get(t, "team2", "pursuit_far_altitude", c.pursuit_far_altitude);
        c.pursuit_near_altitude =
            json_get(t, "team2", "pursuit_near_altitude", c.pursuit_near_altitude);
        c.confirm_altitude = json_get(t, "team2", "confirm_altitude", c.confirm_altitude);
        c.commit_altitude = json_get(t, "team2", "commit_altitude", c.commit_altitude);
        c.touchdown_altitude = json_get(t, "team2", "touchdown_altitude", c.touchdown_altitude);
        c.velocity_feedforward =
            json_get(t, "team2", "velocity_feedforward", c.velocity_feedforward);
        c.gps_smoothing = json_get(t, "team2", "gps_smoothing", c.gps_smoothing);
    }

    sc.validate();
    return sc;
}

inline Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ScenarioInvalid("cannot open scenario file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::exception& e) {
        throw ScenarioInvalid(path + ": " + e.what());
    }
    return scenario_from_json(j);
}

}  // namespace probesim
