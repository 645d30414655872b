#pragma once

#include <Eigen/Dense>
#include <optional>

#include "probesim/errors.hpp"
#include "probesim/geometry.hpp"

namespace probesim {

struct KalmanParams {
    double accel_noise_sigma = 0.5;  // m/s^2 white acceleration
    double gps_sigma = 0.5;          // m
    double odometry_sigma = 0.1;     // m
    double lost_timeout = 5.0;       // s without odometry
    double lost_cov_trace = 4.0;     // m^2 (+ (m/s)^2) trace bound

    void validate() const {
        if (accel_noise_sigma <= 0.0) throw ScenarioInvalid("kalman.accel_noise_sigma must be > 0");
        if (gps_sigma <= 0.0) throw ScenarioInvalid("kalman.gps_sigma must be > 0");
        if (odometry_sigma <= 0.0) throw ScenarioInvalid("kalman.odometry_sigma must be > 0");
        if (lost_timeout <= 0.0) throw ScenarioInvalid("kalman.lost_timeout must be > 0");
        if (lost_cov_trace <= 0.0) throw ScenarioInvalid("kalman.lost_cov_trace must be > 0");
    }
};

// Constant-velocity rover tracker state: mean (px, py, vx, vy).
struct RoverTrackState {
    Eigen::Vector4d mean = Eigen::Vector4d::Zero();
    Eigen::Matrix4d covariance = Eigen::Matrix4d::Identity();
    double last_odometry_time = 0.0;
    bool tracking_lost = false;

    Vec2 position() const { return {mean(0), mean(1)}; }
    Vec2 velocity() const { return {mean(2), mean(3)}; }
    double cov_trace() const { return covariance.trace(); }
};

namespace detail {

inline void require_psd(const Eigen::Matrix4d& p) {
    if ((p - p.transpose()).cwiseAbs().maxCoeff() > 1e-6) throw NonPSDCovariance();
    Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> solver(p, Eigen::EigenvaluesOnly);
    if (solver.eigenvalues().minCoeff() < -1e-9) throw NonPSDCovariance();
}

inline Eigen::Matrix4d cv_transition(double dt) {
    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = dt;
    f(1, 3) = dt;
    return f;
}

// White-acceleration process noise, Q = sigma_a^2 * G G^T per axis.
inline Eigen::Matrix4d cv_process_noise(double accel_sigma, double dt) {
    const double s2 = accel_sigma * accel_sigma;
    const double dt2 = dt * dt;
    Eigen::Matrix4d q = Eigen::Matrix4d::Zero();
    q(0, 0) = q(1, 1) = s2 * dt2 * dt2 / 4.0;
    q(2, 2) = q(3, 3) = s2 * dt2;
    q(0, 2) = q(2, 0) = s2 * dt2 * dt / 2.0;
    q(1, 3) = q(3, 1) = s2 * dt2 * dt / 2.0;
    return q;
}

}  // namespace detail

inline RoverTrackState kf_predict(RoverTrackState state, const KalmanParams& params, double dt) {
    detail::require_psd(state.covariance);
    const Eigen::Matrix4d f = detail::cv_transition(dt);
    state.mean = f * state.mean;
    state.covariance = f * state.covariance * f.transpose() +
                       detail::cv_process_noise(params.accel_noise_sigma, dt);
    state.covariance = 0.5 * (state.covariance + state.covariance.transpose()).eval();
    return state;
}

// Position-only measurement update in Joseph form.
inline RoverTrackState kf_update(RoverTrackState state, Vec2 measurement,
                                 double measurement_sigma) {
    detail::require_psd(state.covariance);
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = 1.0;
    h(1, 1) = 1.0;
    const Eigen::Matrix2d r =
        measurement_sigma * measurement_sigma * Eigen::Matrix2d::Identity();

    const Eigen::Vector2d innovation =
        Eigen::Vector2d(measurement.x, measurement.y) - h * state.mean;
    const Eigen::Matrix2d s = h * state.covariance * h.transpose() + r;
    const Eigen::Matrix<double, 4, 2> k = state.covariance * h.transpose() * s.inverse();

    state.mean += k * innovation;
    const Eigen::Matrix4d ikh = Eigen::Matrix4d::Identity() - k * h;
    state.covariance = ikh * state.covariance * ikh.transpose() + k * r * k.transpose();
    state.covariance = 0.5 * (state.covariance + state.covariance.transpose()).eval();
    return state;
}

// Predict + apply whichever measurements arrived this tick, then maintain the
// tracking-health latch: lost when odometry has been absent past the timeout
// AND the covariance has grown past the bound; cleared only by odometry.
inline RoverTrackState track_rover(RoverTrackState state, const KalmanParams& params, double t,
                                   std::optional<Vec2> gps, std::optional<Vec2> odometry,
                                   double dt) {
    state = kf_predict(state, params, dt);
    if (gps) state = kf_update(state, *gps, params.gps_sigma);
    if (odometry) {
        state = kf_update(state, *odometry, params.odometry_sigma);
        state.last_odometry_time = t;
        state.tracking_lost = false;
    } else if (t - state.last_odometry_time > params.lost_timeout &&
               state.cov_trace() > params.lost_cov_trace) {
        state.tracking_lost = true;
    }
    return state;
}

inline RoverTrackState make_tracker(Vec2 initial_position, double position_sigma,
                                    double velocity_sigma) {
    RoverTrackState s;
    s.mean << initial_position.x, initial_position.y, 0.0, 0.0;
    s.covariance = Eigen::Matrix4d::Zero();
    s.covariance(0, 0) = s.covariance(1, 1) = position_sigma * position_sigma;
    s.covariance(2, 2) = s.covariance(3, 3) = velocity_sigma * velocity_sigma;
    return s;
}

}  // namespace probesim
