#pragma once

#include <cstdint>
#include <random>

#include "vec3.hpp"

namespace renskog {

// Seeded generator with explicit bit-to-double mapping, so runs are
// reproducible independent of the standard library's distribution choices.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform01() { return (eng_() >> 11) * 0x1.0p-53; }
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

    Vec3 uniform_box(double half) {
        return {uniform(-half, half), uniform(-half, half), uniform(-half, half)};
    }

    Vec3 unit_vector() {
        const double u = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, 2.0 * 3.14159265358979323846);
        const double s = std::sqrt(std::max(0.0, 1.0 - u * u));
        return {s * std::cos(phi), s * std::sin(phi), u};
    }

    std::uint64_t raw() { return eng_(); }
    int index(int n) { return static_cast<int>(eng_() % static_cast<std::uint64_t>(n)); }

private:
    std::mt19937_64 eng_;
};

} // namespace renskog
