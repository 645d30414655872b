#include <Eigen/Dense>
#include <cmath>
#include <random>
#include <vector>

#include <gtest/gtest.h>

#include "probesim/estimation.hpp"
#include "probesim/rng.hpp"

using namespace probesim;

namespace {

KalmanParams default_params() {
    KalmanParams p;
    p.accel_noise_sigma = 0.5;
    p.gps_sigma = 0.5;
    p.odometry_sigma = 0.1;
    p.lost_timeout = 5.0;
    p.lost_cov_trace = 4.0;
    return p;
}

// Batch Bayesian least-squares oracle over the same prior, dynamics and
// measurements the filter saw. Unknowns are the initial state and one white
// acceleration per step; the minimizer's final-state block must match the
// filter posterior exactly (Gauss-Markov equivalence).
Eigen::Vector4d batch_least_squares_final_state(
    const Eigen::Vector4d& prior_mean, const Eigen::Matrix4d& prior_cov,
    const std::vector<Eigen::Vector2d>& measurements, double meas_sigma, double accel_sigma,
    double dt) {
    const int k_steps = static_cast<int>(measurements.size());
    const int n = 4 + 2 * k_steps;  // x0 plus one 2-D acceleration per step

    Eigen::Matrix4d f = Eigen::Matrix4d::Identity();
    f(0, 2) = dt;
    f(1, 3) = dt;
    Eigen::Matrix<double, 4, 2> g = Eigen::Matrix<double, 4, 2>::Zero();
    g(0, 0) = g(1, 1) = dt * dt / 2.0;
    g(2, 0) = g(3, 1) = dt;
    Eigen::Matrix<double, 2, 4> h = Eigen::Matrix<double, 2, 4>::Zero();
    h(0, 0) = h(1, 1) = 1.0;

    // x_k = F^k x0 + sum_i F^(k-1-i) G a_i, linear in the unknowns.
    std::vector<Eigen::Matrix4d> f_pow(k_steps + 1);
    f_pow[0] = Eigen::Matrix4d::Identity();
    for (int i = 1; i <= k_steps; ++i) f_pow[i] = f * f_pow[i - 1];

    Eigen::MatrixXd info = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n);

    // Prior on x0.
    info.topLeftCorner<4, 4>() += prior_cov.inverse();
    rhs.head<4>() += prior_cov.inverse() * prior_mean;

    // Acceleration priors a_i ~ N(0, sigma_a^2 I).
    for (int i = 0; i < k_steps; ++i)
        info.block<2, 2>(4 + 2 * i, 4 + 2 * i) +=
            Eigen::Matrix2d::Identity() / (accel_sigma * accel_sigma);

    // Measurements z_k = H x_k + v, k = 1..K.
    for (int k = 1; k <= k_steps; ++k) {
        Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(2, n);
        jac.leftCols<4>() = h * f_pow[k];
        for (int i = 0; i < k; ++i)
            jac.block<2, 2>(0, 4 + 2 * i) = (h * f_pow[k - 1 - i] * g);
        const double w = 1.0 / (meas_sigma * meas_sigma);
        info += jac.transpose() * w * jac;
        rhs += jac.transpose() * w * measurements[k - 1];
    }

    const Eigen::VectorXd theta = info.ldlt().solve(rhs);
    Eigen::Vector4d xk = f_pow[k_steps] * theta.head<4>();
    for (int i = 0; i < k_steps; ++i)
        xk += f_pow[k_steps - 1 - i] * g * theta.segment<2>(4 + 2 * i);
    return xk;
}

}  // namespace

TEST(KfPredict, StationaryPredictionGrowsCovariance) {
    RoverTrackState s = make_tracker({1.0, 2.0}, 1.0, 1.0);
    const double trace_before = s.cov_trace();
    const RoverTrackState next = kf_predict(s, default_params(), 0.05);
    EXPECT_DOUBLE_EQ(next.mean(0), 1.0);
    EXPECT_DOUBLE_EQ(next.mean(1), 2.0);
    EXPECT_GT(next.cov_trace(), trace_before);
}

TEST(KfPredict, MeanFollowsConstantVelocityTransition) {
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    s.mean << 0.0, 0.0, 2.0, 0.0;
    const RoverTrackState next = kf_predict(s, default_params(), 1.0);
    EXPECT_NEAR(next.mean(0), 2.0, 1e-12);
    EXPECT_NEAR(next.mean(1), 0.0, 1e-12);
    EXPECT_NEAR(next.mean(2), 2.0, 1e-12);
}

TEST(KfPredict, ProcessNoisePositionEntryMatchesWhiteAccelFormula) {
    // sigma_a = 0.5, dt = 1: Q position diagonal = sigma^2 * dt^4 / 4 = 0.0625.
    KalmanParams p = default_params();
    RoverTrackState s = make_tracker({0.0, 0.0}, 0.0, 0.0);
    s.covariance = Eigen::Matrix4d::Zero();
    const RoverTrackState next = kf_predict(s, p, 1.0);
    EXPECT_NEAR(next.covariance(0, 0), 0.0625, 1e-15);
    EXPECT_NEAR(next.covariance(1, 1), 0.0625, 1e-15);
    EXPECT_NEAR(next.covariance(2, 2), 0.25, 1e-15);
    EXPECT_NEAR(next.covariance(0, 2), 0.125, 1e-15);
}

TEST(KfPredict, NonPSDInputThrows) {
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    s.covariance(0, 0) = -1.0;
    EXPECT_THROW(kf_predict(s, default_params(), 0.05), NonPSDCovariance);
}

TEST(KfUpdate, ZeroInnovationKeepsMeanAndShrinksCovariance) {
    RoverTrackState s = make_tracker({3.0, -4.0}, 1.0, 1.0);
    const double trace_before = s.cov_trace();
    const RoverTrackState next = kf_update(s, {3.0, -4.0}, 0.5);
    EXPECT_NEAR(next.mean(0), 3.0, 1e-12);
    EXPECT_NEAR(next.mean(1), -4.0, 1e-12);
    EXPECT_LT(next.cov_trace(), trace_before);
}

TEST(KfUpdate, ScalarAnalogGainHalf) {
    // Prior var 1, measurement var 1, prior 0, measurement 2 -> posterior 1.0,
    // posterior var 0.5 (K = 0.5).
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    const RoverTrackState next = kf_update(s, {2.0, 0.0}, 1.0);
    EXPECT_NEAR(next.mean(0), 1.0, 1e-12);
    EXPECT_NEAR(next.covariance(0, 0), 0.5, 1e-12);
}

TEST(KfUpdate, UninformativeMeasurementIsNoOp) {
    RoverTrackState s = make_tracker({1.0, 1.0}, 1.0, 1.0);
    const RoverTrackState next = kf_update(s, {100.0, -100.0}, 1e12);
    EXPECT_NEAR(next.mean(0), 1.0, 1e-6);
    EXPECT_NEAR(next.mean(1), 1.0, 1e-6);
    EXPECT_NEAR((next.covariance - s.covariance).cwiseAbs().maxCoeff(), 0.0, 1e-6);
}

TEST(KfUpdate, NeverIncreasesCovarianceTrace) {
    std::mt19937 gen(31);
    std::uniform_real_distribution<double> meas(-10.0, 10.0);
    std::uniform_real_distribution<double> sigma(0.05, 5.0);
    RoverTrackState s = make_tracker({0.0, 0.0}, 2.0, 2.0);
    KalmanParams p = default_params();
    for (int i = 0; i < 2000; ++i) {
        s = kf_predict(s, p, 0.05);
        const double before = s.cov_trace();
        s = kf_update(s, {meas(gen), meas(gen)}, sigma(gen));
        ASSERT_LE(s.cov_trace(), before + 1e-12);
    }
}

TEST(KfUpdate, PosteriorBetweenPriorAndMeasurementWithDiagonalCovariance) {
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    const RoverTrackState next = kf_update(s, {4.0, -6.0}, 0.7);
    EXPECT_GT(next.mean(0), 0.0);
    EXPECT_LT(next.mean(0), 4.0);
    EXPECT_LT(next.mean(1), 0.0);
    EXPECT_GT(next.mean(1), -6.0);
}

TEST(Covariance, RemainsSymmetricPSDOverRandomCycles) {
    std::mt19937 gen(77);
    std::uniform_real_distribution<double> meas(-50.0, 50.0);
    std::uniform_real_distribution<double> sigma(0.01, 10.0);
    std::uniform_real_distribution<double> dt(0.01, 1.0);
    std::uniform_int_distribution<int> do_update(0, 1);
    KalmanParams p = default_params();
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    for (int i = 0; i < 10000; ++i) {
        s = kf_predict(s, p, dt(gen));
        if (do_update(gen)) s = kf_update(s, {meas(gen), meas(gen)}, sigma(gen));
        const Eigen::Matrix4d& c = s.covariance;
        ASSERT_LT((c - c.transpose()).cwiseAbs().maxCoeff(), 1e-9);
        Eigen::SelfAdjointEigenSolver<Eigen::Matrix4d> es(c, Eigen::EigenvaluesOnly);
        ASSERT_GE(es.eigenvalues().minCoeff(), -1e-9);
    }
}

TEST(TrackRover, ConvergesOnNoiseFreeConstantVelocityRover) {
    KalmanParams p = default_params();
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    const double dt = 0.05;
    const Vec2 v{1.2, -0.4};
    for (int k = 1; k <= 100; ++k) {
        const double t = k * dt;
        const Vec2 truth{v.x * t, v.y * t};
        s = track_rover(s, p, t, truth, truth, dt);
    }
    const double t_final = 100 * dt;
    EXPECT_NEAR(s.mean(0), v.x * t_final, 1e-3);
    EXPECT_NEAR(s.mean(1), v.y * t_final, 1e-3);
    EXPECT_FALSE(s.tracking_lost);
}

TEST(TrackRover, LostLatchesAndUnlatchesOnOdometry) {
    KalmanParams p = default_params();
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    const double dt = 0.05;
    double t = 0.0;
    // No measurements at all: trace grows, timeout passes, lost fires.
    for (int k = 1; k <= 400; ++k) {
        t = k * dt;
        s = track_rover(s, p, t, std::nullopt, std::nullopt, dt);
    }
    EXPECT_TRUE(s.tracking_lost);
    // GPS alone shrinks the covariance but does not unlatch.
    s = track_rover(s, p, t + dt, Vec2{0.0, 0.0}, std::nullopt, dt);
    EXPECT_TRUE(s.tracking_lost);
    // Odometry unlatches on the next tick.
    s = track_rover(s, p, t + 2 * dt, std::nullopt, Vec2{0.0, 0.0}, dt);
    EXPECT_FALSE(s.tracking_lost);
}

TEST(TrackRover, PosteriorMatchesBatchLeastSquaresOracle) {
    KalmanParams p = default_params();
    const double dt = 0.5;
    const Eigen::Vector4d prior_mean(1.0, -2.0, 0.5, 0.25);
    Eigen::Matrix4d prior_cov = Eigen::Matrix4d::Zero();
    prior_cov.diagonal() << 2.0, 2.0, 1.0, 1.0;

    const std::vector<Eigen::Vector2d> measurements = {
        {1.4, -1.9}, {1.8, -1.7}, {2.5, -1.2}, {2.9, -1.1}, {3.6, -0.6}};

    RoverTrackState s;
    s.mean = prior_mean;
    s.covariance = prior_cov;
    for (const auto& z : measurements) {
        s = kf_predict(s, p, dt);
        s = kf_update(s, {z(0), z(1)}, p.gps_sigma);
    }

    const Eigen::Vector4d oracle = batch_least_squares_final_state(
        prior_mean, prior_cov, measurements, p.gps_sigma, p.accel_noise_sigma, dt);
    for (int i = 0; i < 4; ++i) EXPECT_NEAR(s.mean(i), oracle(i), 1e-6);
}

TEST(TrackRover, FilteredRmseBeatsRawGps) {
    KalmanParams p = default_params();
    RngStream rng(42);
    RoverTrackState s = make_tracker({0.0, 0.0}, 1.0, 1.0);
    const double dt = 0.05;
    double filt_sq = 0.0;
    double raw_sq = 0.0;
    int n = 0;
    for (int k = 1; k <= 1200; ++k) {  // 60 s
        const double t = k * dt;
        const Vec2 truth{0.4 * t, 40.0};
        const Vec2 gps{truth.x + rng.gaussian(p.gps_sigma), truth.y + rng.gaussian(p.gps_sigma)};
        const Vec2 odo{truth.x + rng.gaussian(p.odometry_sigma),
                       truth.y + rng.gaussian(p.odometry_sigma)};
        s = track_rover(s, p, t, gps, odo, dt);
        filt_sq += std::pow(s.mean(0) - truth.x, 2) + std::pow(s.mean(1) - truth.y, 2);
        raw_sq += std::pow(gps.x - truth.x, 2) + std::pow(gps.y - truth.y, 2);
        ++n;
    }
    const double filt_rmse = std::sqrt(filt_sq / n);
    const double raw_rmse = std::sqrt(raw_sq / n);
    EXPECT_LE(filt_rmse, raw_rmse);
}
