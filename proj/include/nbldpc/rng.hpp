#pragma once

#include <cstdint>
#include <random>

namespace nbldpc {

// Deterministic random source used everywhere the library needs randomness.
// Wraps std::mt19937_64 (fully specified by the standard) with hand-rolled
// uniform and gaussian draws so that streams do not depend on the standard
// library's distribution implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next() { return gen_(); }

    // Uniform integer in [0, n), unbiased via rejection.
    std::uint32_t below(std::uint32_t n) {
        if (n <= 1) return 0;
        const std::uint64_t span = std::uint64_t(1) << 32;
        const std::uint64_t limit = span - span % n;
        for (;;) {
            std::uint64_t x = next() >> 32;
            if (x < limit) return std::uint32_t(x % n);
        }
    }

    // Uniform double in [0, 1) with 53 random bits.
    double unit() { return double(next() >> 11) * 0x1.0p-53; }

    // Standard normal via Box-Muller; the second value of each pair is cached.
    double gaussian();

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// SplitMix-style avalanche; combines stream identifiers into child seeds.
std::uint64_t mix_bits(std::uint64_t z);
std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b, std::uint64_t c);

}  // namespace nbldpc
