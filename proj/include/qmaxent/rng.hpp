#pragma once

#include <cstdint>
#include <random>

namespace qmaxent {

// Deterministic random source for all sampling code.
//
// The engine is std::mt19937_64, whose output sequence is specified
// bit-exactly by the C++ standard, so identical seeds reproduce identical
// streams on every platform. The std::*_distribution adapters are *not*
// specified bit-exactly, so the uniform conversions are done here by hand.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform double in [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint64_t below(std::uint64_t n) {
        const std::uint64_t threshold = -n % n; // 2^64 mod n
        for (;;) {
            std::uint64_t x = engine_();
            if (x >= threshold) return x % n;
        }
    }

private:
    std::mt19937_64 engine_;
};

// Non-deterministic seed for runs where the user did not pass one.
inline std::uint64_t entropy_seed() {
    std::random_device rd;
    return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

} // namespace qmaxent
