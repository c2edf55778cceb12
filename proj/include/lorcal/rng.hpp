#pragma once

// Portable random streams. The std:: distributions are implementation
// defined, so uniform and Poisson draws are derived directly from the
// mt19937_64 output to keep results identical across standard libraries.

#include <cmath>
#include <cstdint>
#include <random>

namespace lorcal {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    /// Per-task stream: seed XOR task ordinal.
    static Rng stream(std::uint64_t seed, std::uint64_t ordinal) { return Rng(seed ^ ordinal); }

    std::uint64_t next() { return engine_(); }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) {
        // rejection sampling against modulo bias
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t v;
        do {
            v = engine_();
        } while (v >= limit);
        return v % n;
    }

    /// Poisson(mean) as the number of unit-rate exponential arrivals in [0, mean].
    std::uint64_t poisson(double mean) {
        std::uint64_t count = 0;
        double clock = 0.0;
        for (;;) {
            clock += -std::log1p(-uniform());
            if (clock > mean) return count;
            ++count;
        }
    }

    /// Reference type for generic code expecting a URBG.
    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace lorcal
