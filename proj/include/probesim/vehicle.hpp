#pragma once

#include <algorithm>
#include <cmath>

#include "probesim/errors.hpp"
#include "probesim/geometry.hpp"

namespace probesim {

struct VehicleLimits {
    double max_speed = 3.0;           // m/s, horizontal
    double max_vertical_speed = 1.5;  // m/s
    double response_tau = 0.5;        // s, first-order velocity response
    double pitch_gain = deg2rad(5.0); // rad per (m/s) of horizontal speed
    double pitch_max = deg2rad(30.0);

    void validate() const {
        if (max_speed <= 0.0) throw ScenarioInvalid("vehicle.max_speed must be > 0");
        if (max_vertical_speed <= 0.0) throw ScenarioInvalid("vehicle.max_vertical_speed must be > 0");
        if (response_tau <= 0.0) throw ScenarioInvalid("vehicle.response_tau must be > 0");
        if (pitch_gain <= 0.0) throw ScenarioInvalid("vehicle.pitch_gain must be > 0");
        if (pitch_max <= 0.0) throw ScenarioInvalid("vehicle.pitch_max must be > 0");
    }
};

struct VehicleState {
    Vec3 position;
    Vec3 velocity;
    double yaw = 0.0;
    double pitch = 0.0;  // positive = nose-down forward tilt
    bool probe_attached = false;
    bool landed = false;
};

// Horizontal speed is rescaled (direction preserved); vertical is clamped.
inline Vec3 velocity_limiter(Vec3 command, const VehicleLimits& limits) {
    const double h = horizontal_norm(command);
    if (h > limits.max_speed) {
        const double scale = limits.max_speed / h;
        command.x *= scale;
        command.y *= scale;
    }
    command.z = std::clamp(command.z, -limits.max_vertical_speed, limits.max_vertical_speed);
    return command;
}

inline Vec3 position_setpoint_command(const VehicleState& state, Vec3 setpoint, double gain,
                                      const VehicleLimits& limits) {
    return velocity_limiter(gain * (setpoint - state.position), limits);
}

// Kinematic step: first-order velocity response toward the clipped command,
// semi-implicit position integration, algebraic pitch from horizontal speed.
inline VehicleState step_vehicle(VehicleState state, Vec3 command, const VehicleLimits& limits,
                                 double dt) {
    if (!is_finite(command)) throw NonFiniteCommand();
    const Vec3 clipped = velocity_limiter(command, limits);
    const double alpha = std::min(1.0, dt / limits.response_tau);
    state.velocity = state.velocity + alpha * (clipped - state.velocity);
    state.position = state.position + dt * state.velocity;
    state.pitch = std::min(limits.pitch_max, limits.pitch_gain * horizontal_norm(state.velocity));
    return state;
}

}  // namespace probesim
