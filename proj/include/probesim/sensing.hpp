#pragma once

#include <array>
#include <cmath>
#include <optional>

#include "probesim/geometry.hpp"
#include "probesim/rng.hpp"
#include "probesim/terrain.hpp"
#include "probesim/vehicle.hpp"

namespace probesim {

struct CameraModel {
    double half_fov = deg2rad(40.0);  // half field of view across the image width
    int image_width = 640;
    int image_height = 480;
    double pixel_noise_sigma = 1.0;
    double min_detect_area = 20.0;  // px^2

    double focal_length_px() const { return (image_width / 2.0) / std::tan(half_fov); }

    void validate() const {
        if (half_fov <= 0.0 || half_fov >= kPi / 2.0)
            throw ScenarioInvalid("camera.half_fov must be in (0, 90) degrees");
        if (image_width <= 0 || image_height <= 0)
            throw ScenarioInvalid("camera image dimensions must be > 0");
        if (pixel_noise_sigma < 0.0) throw ScenarioInvalid("camera.pixel_noise_sigma must be >= 0");
        if (min_detect_area < 0.0) throw ScenarioInvalid("camera.min_detect_area must be >= 0");
    }
};

struct Detection {
    double centroid_u = 0.0;   // px from image center, +u toward +x world
    double centroid_v = 0.0;   // px from image center, +v toward +y world
    double area = 0.0;         // apparent area, px^2
    double world_range = 0.0;  // height of the camera above the target, m
};

// Nadir pinhole detector shared by the probe, trunk and fiducial channels.
// Image axes stay world-aligned; the detector reports NONE outside the
// view cone, outside the image rectangle, or below the area threshold.
inline std::optional<Detection> detect_target(const CameraModel& camera,
                                              const VehicleState& vehicle, Vec3 target_position,
                                              double target_radius, RngStream& rng) {
    const double dz = vehicle.position.z - target_position.z;
    if (dz <= 0.0) return std::nullopt;

    const double dx = target_position.x - vehicle.position.x;
    const double dy = target_position.y - vehicle.position.y;
    const double view_angle = std::atan2(std::hypot(dx, dy), dz);
    if (view_angle > camera.half_fov) return std::nullopt;

    const double f = camera.focal_length_px();
    const double u = f * dx / dz;
    const double v = f * dy / dz;
    if (std::abs(u) > camera.image_width / 2.0 || std::abs(v) > camera.image_height / 2.0)
        return std::nullopt;

    const double apparent_radius = target_radius * f / dz;
    const double area = kPi * apparent_radius * apparent_radius;
    if (area < camera.min_detect_area) return std::nullopt;

    Detection det;
    det.centroid_u = u + rng.gaussian(camera.pixel_noise_sigma);
    det.centroid_v = v + rng.gaussian(camera.pixel_noise_sigma);
    det.area = area;
    det.world_range = dz;
    return det;
}

struct SonarReading {
    double azimuth = 0.0;  // body frame, rad
    double max_range = 0.0;
    std::optional<double> range;  // nullopt = NO_RETURN
};

inline constexpr int kSonarCount = 8;
inline constexpr double kSonarMarchStep = 0.1;  // m

// Eight rays at 45-degree spacing around the horizontal-velocity direction.
// Forward rays are depressed by the full pitch angle, lateral rays by none,
// rear rays tilt up: elevation offset = -pitch * cos(azimuth).
inline std::array<SonarReading, kSonarCount> sonar_scan(const VehicleState& vehicle,
                                                        const Terrain& terrain, double max_range,
                                                        double march_step = kSonarMarchStep) {
    const double hspeed = horizontal_norm(vehicle.velocity);
    const double heading =
        hspeed > 1e-9 ? std::atan2(vehicle.velocity.y, vehicle.velocity.x) : vehicle.yaw;

    std::array<SonarReading, kSonarCount> readings;
    for (int i = 0; i < kSonarCount; ++i) {
        const double azimuth = i * (2.0 * kPi / kSonarCount);
        const double depression = vehicle.pitch * std::cos(azimuth);
        const double bearing = heading + azimuth;
        const Vec3 dir{std::cos(depression) * std::cos(bearing),
                       std::cos(depression) * std::sin(bearing), -std::sin(depression)};

        SonarReading reading;
        reading.azimuth = azimuth;
        reading.max_range = max_range;
        for (double s = march_step; s <= max_range + 1e-12; s += march_step) {
            const Vec3 p = vehicle.position + s * dir;
            if (p.z <= terrain_height(terrain, p.x, p.y)) {
                reading.range = s;
                break;
            }
        }
        readings[i] = reading;
    }
    return readings;
}

inline Vec3 gps_read(Vec3 true_position, double sigma, RngStream& rng) {
    return {true_position.x + rng.gaussian(sigma), true_position.y + rng.gaussian(sigma),
            true_position.z + rng.gaussian(sigma)};
}

// Feature-gated rover-position measurement; stands in for odometry-based
// tracking that needs visual texture under the vehicle to function.
inline std::optional<Vec3> odometry_read(const VehicleState& vehicle, Vec3 rover_position,
                                         const Terrain& terrain, double density_threshold,
                                         double sigma, RngStream& rng) {
    const double density = feature_density(terrain, vehicle.position.x, vehicle.position.y);
    if (density < density_threshold) return std::nullopt;
    return gps_read(rover_position, sigma, rng);
}

// One tick's worth of synthetic sensing, as consumed by the executives.
struct SensorFrame {
    double t = 0.0;
    std::optional<Detection> probe;
    std::optional<Detection> trunk;
    std::optional<Detection> fiducial;
    std::array<SonarReading, kSonarCount> sonar;
    std::optional<Vec3> gps;       // rover GPS fix, nullopt during outages
    std::optional<Vec3> odometry;  // nullopt when feature density is too low
};

}  // namespace probesim
