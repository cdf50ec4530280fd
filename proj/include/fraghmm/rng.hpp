#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>

namespace fraghmm {

// Seeded generator with platform-independent output: the mt19937_64 engine is
// bit-specified by the C++ standard, and all derivations below are done by
// hand because std::* distributions are implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform on [0, 1) with 53 random bits.
    double next_double() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    // Unbiased uniform integer in [0, n), by rejection.
    std::uint64_t uniform_index(std::uint64_t n) {
        if (n == 0) throw std::invalid_argument("uniform_index: n must be positive");
        const std::uint64_t reject = (UINT64_MAX % n + 1) % n;  // = 2^64 mod n
        for (;;) {
            const std::uint64_t x = engine_();
            if (reject == 0 || x <= UINT64_MAX - reject) return x % n;
        }
    }

    // Index drawn with probability proportional to probs[i] (cumulative walk;
    // the last index absorbs any rounding shortfall).
    int categorical(std::span<const double> probs) {
        const double u = next_double();
        double cum = 0.0;
        for (std::size_t i = 0; i + 1 < probs.size(); ++i) {
            cum += probs[i];
            if (u < cum) return static_cast<int>(i);
        }
        return static_cast<int>(probs.size()) - 1;
    }

private:
    std::mt19937_64 engine_;
};

}  // namespace fraghmm
