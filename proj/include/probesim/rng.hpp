#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "probesim/geometry.hpp"

namespace probesim {

// Seeded random stream, one per trial. Gaussian draws use Box-Muller on
// explicit mt19937_64 words rather than std::normal_distribution so the
// stream is fully pinned by the seed (no implementation-defined caching).
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // Uniform in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Uniform in (0, 1].
    double uniform01_open_low() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    // Standard normal; consumes exactly two engine words per call.
    double gaussian() {
        const double u1 = uniform01_open_low();
        const double u2 = uniform01();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    double gaussian(double sigma) { return sigma * gaussian(); }

private:
    std::mt19937_64 engine_;
};

}  // namespace probesim
