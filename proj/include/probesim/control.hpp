#pragma once

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

#include "probesim/errors.hpp"
#include "probesim/geometry.hpp"
#include "probesim/sensing.hpp"
#include "probesim/vehicle.hpp"

namespace probesim {

struct PidGains {
    double kp = 0.5;
    double ki = 0.000005;
    double kd = 0.4;
    double time_interval = 0.05;

    void validate() const {
        if (time_interval <= 0.0) throw ScenarioInvalid("pid.time_interval must be > 0");
    }
};

struct PidState {
    Vec3 integral_error;
    Vec3 previous_error;
};

struct PidResult {
    PidState state;
    Vec3 command;
};

// Velocity-form PID, applied independently per axis: the command is the
// current velocity plus the PID correction.
inline PidResult pid_step(PidState state, const PidGains& gains, Vec3 error,
                          Vec3 current_velocity) {
    if (!is_finite(error)) throw NonFiniteError();

    const auto axis = [&](double e, double& integral, double& previous, double v) {
        integral += e * gains.time_interval;
        const double derivative = (e - previous) / gains.time_interval;
        previous = e;
        return v + gains.kp * e + gains.ki * integral + gains.kd * derivative;
    };

    Vec3 cmd;
    cmd.x = axis(error.x, state.integral_error.x, state.previous_error.x, current_velocity.x);
    cmd.y = axis(error.y, state.integral_error.y, state.previous_error.y, current_velocity.y);
    cmd.z = axis(error.z, state.integral_error.z, state.previous_error.z, current_velocity.z);
    return {state, cmd};
}

// PID pursuit of the rover estimate at a commanded height above the trunk.
// The caller clips the result through the velocity limiter.
inline PidResult pursuit_command(PidState pid, const PidGains& gains, Vec2 rover_estimate,
                                 const VehicleState& vehicle, double target_altitude_above_trunk,
                                 double trunk_z) {
    const Vec3 error{rover_estimate.x - vehicle.position.x,
                     rover_estimate.y - vehicle.position.y,
                     (trunk_z + target_altitude_above_trunk) - vehicle.position.z};
    return pid_step(pid, gains, error, vehicle.velocity);
}

struct SearchPattern {
    std::vector<Vec3> waypoints;
    std::size_t current_index = 0;

    bool exhausted() const { return current_index >= waypoints.size(); }
    Vec3 current() const { return waypoints[std::min(current_index, waypoints.size() - 1)]; }

    // Advance past any waypoint the vehicle has captured.
    void advance(Vec3 position, double capture_radius) {
        while (!exhausted() && norm(waypoints[current_index] - position) < capture_radius)
            ++current_index;
    }
};

// Boustrophedon rows along x, stepping +spacing in y, final row clamped to ymax.
inline SearchPattern lawnmower_waypoints(double xmin, double ymin, double xmax, double ymax,
                                         double spacing, double altitude) {
    if (!(xmax > xmin)) throw DegenerateBounds("xmax must be > xmin");
    if (!(ymax > ymin)) throw DegenerateBounds("ymax must be > ymin");
    if (!(spacing > 0.0)) throw DegenerateBounds("spacing must be > 0");

    SearchPattern pattern;
    bool eastward = true;
    double y = ymin;
    while (true) {
        const double x0 = eastward ? xmin : xmax;
        const double x1 = eastward ? xmax : xmin;
        pattern.waypoints.push_back({x0, y, altitude});
        pattern.waypoints.push_back({x1, y, altitude});
        if (y >= ymax) break;
        y = std::min(y + spacing, ymax);
        eastward = !eastward;
    }
    return pattern;
}

// Square spiral: segment lengths step, step, 2*step, 2*step, ... turning left
// 90 degrees each segment, starting eastward, truncated at the Chebyshev ball
// of radius max_radius.
inline SearchPattern spiral_waypoints(Vec2 center, double step, double max_radius,
                                      double altitude) {
    if (!(step > 0.0)) throw ScenarioInvalid("spiral step must be > 0");
    if (max_radius < 0.0) throw ScenarioInvalid("spiral max_radius must be >= 0");

    SearchPattern pattern;
    pattern.waypoints.push_back({center.x, center.y, altitude});
    if (max_radius == 0.0) return pattern;

    static constexpr int dx[4] = {1, 0, -1, 0};  // E, N, W, S
    static constexpr int dy[4] = {0, 1, 0, -1};
    double px = center.x;
    double py = center.y;
    int dir = 0;
    for (int segment = 0;; ++segment) {
        const double length = step * (segment / 2 + 1);
        double nx = px + dx[dir] * length;
        double ny = py + dy[dir] * length;
        const bool outside = std::max(std::abs(nx - center.x), std::abs(ny - center.y)) >
                             max_radius;
        if (outside) {
            // Clamp the moving coordinate to the Chebyshev boundary and stop.
            nx = std::clamp(nx, center.x - max_radius, center.x + max_radius);
            ny = std::clamp(ny, center.y - max_radius, center.y + max_radius);
            if (nx != px || ny != py) pattern.waypoints.push_back({nx, ny, altitude});
            break;
        }
        pattern.waypoints.push_back({nx, ny, altitude});
        px = nx;
        py = ny;
        dir = (dir + 1) % 4;
    }
    return pattern;
}

// Visual-servo descent: center the detection while descending at a rate that
// scales with centering quality (full rate within 10% of the image half-width,
// zero at the edge, linear in between).
inline Vec3 servo_descent_command(const Detection& detection, const CameraModel& camera,
                                  const VehicleState& /*vehicle*/, double descent_rate,
                                  double centering_gain) {
    const double f = camera.focal_length_px();
    const double z = detection.world_range;
    const Vec2 ground_offset{detection.centroid_u * z / f, detection.centroid_v * z / f};

    const double half_width = camera.image_width / 2.0;
    const double radial = std::hypot(detection.centroid_u, detection.centroid_v);
    const double quality =
        std::clamp((half_width - radial) / (half_width - 0.1 * half_width), 0.0, 1.0);

    return {centering_gain * ground_offset.x, centering_gain * ground_offset.y,
            -descent_rate * quality};
}

// Climb override: any sonar return inside the trigger range forces a climb
// without touching the horizontal components.
inline Vec3 terrain_avoidance_command(Vec3 base_command,
                                      const std::array<SonarReading, kSonarCount>& readings,
                                      double trigger_range, double climb_rate) {
    for (const auto& reading : readings) {
        if (reading.range && *reading.range < trigger_range) {
            base_command.z = std::max(base_command.z, climb_rate);
            return base_command;
        }
    }
    return base_command;
}

}  // namespace probesim
