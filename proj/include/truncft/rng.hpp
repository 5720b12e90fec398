#pragma once

// Counter-based random numbers built on the splitmix64 mixer.
//
// Every draw is a pure function of (key, counter, lane), so parallel trial
// loops produce the same streams regardless of scheduling, and a single
// sample can be regenerated in isolation.

#include <cmath>
#include <cstdint>

namespace truncft {

inline std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Combine a seed with up to two stream identifiers into one stream key.
inline std::uint64_t rng_key(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

/// Uniform draw in the open interval (0,1); never returns 0 or 1.
inline double rng_u01(std::uint64_t key, std::uint64_t counter, std::uint64_t lane) {
    const std::uint64_t bits = splitmix64(splitmix64(key ^ splitmix64(counter)) ^ lane);
    return static_cast<double>(bits >> 11) * 0x1.0p-53 + 0x1.0p-54;
}

struct NormalPair {
    double first;
    double second;
};

/// One Box-Muller pair of independent standard normals for sample `counter`.
inline NormalPair rng_gauss_pair(std::uint64_t key, std::uint64_t counter) {
    const double u1 = rng_u01(key, counter, 0);
    const double u2 = rng_u01(key, counter, 1);
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * 3.14159265358979323846 * u2;
    return {radius * std::cos(angle), radius * std::sin(angle)};
}

}  // namespace truncft
