#pragma once

#include <cmath>
#include <vector>

#include "probesim/errors.hpp"

namespace probesim {

struct Hill {
    double center_x = 0.0;
    double center_y = 0.0;
    double amplitude = 0.0;  // m, >= 0
    double sigma = 1.0;      // m, > 0
};

struct FeaturePatch {
    double center_x = 0.0;
    double center_y = 0.0;
    double radius = 0.0;
    double density = 0.0;  // in [0, 1]
};

// Analytic ground-truth environment: a sum-of-Gaussians heightfield plus a
// piecewise-constant visual-feature density map.
struct Terrain {
    double base_height = 0.0;
    double default_density = 0.8;
    std::vector<Hill> hills;
    std::vector<FeaturePatch> feature_patches;

    void validate() const {
        for (const auto& h : hills) {
            if (h.amplitude < 0.0) throw ScenarioInvalid("terrain.hills: amplitude must be >= 0");
            if (h.sigma <= 0.0) throw ScenarioInvalid("terrain.hills: sigma must be > 0");
        }
        if (default_density < 0.0 || default_density > 1.0)
            throw ScenarioInvalid("terrain.default_density must be in [0,1]");
        for (const auto& p : feature_patches) {
            if (p.density < 0.0 || p.density > 1.0)
                throw ScenarioInvalid("terrain.feature_patches: density must be in [0,1]");
            if (p.radius < 0.0)
                throw ScenarioInvalid("terrain.feature_patches: radius must be >= 0");
        }
    }
};

inline double terrain_height(const Terrain& terrain, double x, double y) {
    double h = terrain.base_height;
    for (const auto& hill : terrain.hills) {
        const double dx = x - hill.center_x;
        const double dy = y - hill.center_y;
        h += hill.amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * hill.sigma * hill.sigma));
    }
    return h;
}

// Max over containing patches, else the default. Gates visual odometry.
inline double feature_density(const Terrain& terrain, double x, double y) {
    double best = -1.0;
    for (const auto& p : terrain.feature_patches) {
        const double dx = x - p.center_x;
        const double dy = y - p.center_y;
        if (dx * dx + dy * dy <= p.radius * p.radius) best = std::max(best, p.density);
    }
    return best >= 0.0 ? best : terrain.default_density;
}

}  // namespace probesim
