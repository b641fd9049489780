// SPDX-License-Identifier: Apache-2.0
//
// Deterministic random number streams.
//
// Monte Carlo trials are distributed over a worker pool, so reproducibility
// cannot rely on draw order. Instead every (seed, trial, purpose) triple is
// mapped to its own substream seed by a pure hash, and each substream uses
// std::mt19937_64 raw bits with explicit converters. mt19937_64 output is
// fully specified by the standard and the converters avoid distribution
// objects, whose output may differ between standard libraries, so results
// are bit-identical across platforms and worker counts.

#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace dmasim {

// What a substream is consumed for. Values are part of the seeding scheme;
// do not renumber.
enum class StreamPurpose : std::uint64_t {
    UserDrop = 0,
    Fading = 1,
};

// splitmix64 finalizer (public domain algorithm by Sebastiano Vigna).
constexpr std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

// Substream seed derivation: two chained splitmix64 rounds separate the
// trial index and the purpose tag. A pure function of its arguments, so
// trials can be generated in any order on any number of workers.
constexpr std::uint64_t derive_stream_seed(std::uint64_t master_seed,
                                           std::uint64_t trial,
                                           StreamPurpose purpose) {
    const std::uint64_t mixed = splitmix64(master_seed ^ (0xA0761D6478BD642FULL + trial));
    return splitmix64(mixed ^ (0xE7037ED1A0B428DBULL * (static_cast<std::uint64_t>(purpose) + 1ULL)));
}

class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    // Raw engine output, for deriving bounded integers.
    std::uint64_t bits() {
        return engine_();
    }

    // Uniform on [0, 1) with 53 random bits.
    double uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    // Standard normal via Box-Muller. Generates pairs; the second value is
    // cached, so consecutive calls cost one pair of uniforms on average.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        const double u1 = 1.0 - uniform(); // (0, 1], keeps the log finite
        const double u2 = uniform();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * std::numbers::pi * u2;
        spare_ = radius * std::sin(angle);
        have_spare_ = true;
        return radius * std::cos(angle);
    }

    // Circularly symmetric complex normal with unit total variance.
    std::complex<double> complex_normal() {
        const double re = normal();
        const double im = normal();
        return {re * std::numbers::sqrt2 / 2.0, im * std::numbers::sqrt2 / 2.0};
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace dmasim
