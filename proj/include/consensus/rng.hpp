#pragma once

#include <cstdint>
#include <cmath>

namespace consensus {

/// Finalizer of the splitmix64 generator. Used both to decorrelate
/// user-supplied seeds and to derive independent per-trial streams.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seed for trial k of an experiment with the given base seed. Trials are
/// reproducible independently of thread scheduling.
inline std::uint64_t trial_seed(std::uint64_t base_seed, std::uint64_t k) {
    return mix64(base_seed + 0x632be59bd9b4e019ULL * (k + 1));
}

/// Small counter-style generator (splitmix64 stream). Each simulation trial
/// owns one instance.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t x = state_;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
        return x ^ (x >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Exponential with the given rate (mean 1/rate).
    double exponential(double rate) {
        // -log1p(-u) avoids log(0) and keeps full precision near u = 0.
        return -std::log1p(-uniform01()) / rate;
    }

    /// Uniform integer in [0, bound) by rejection.
    std::uint64_t below(std::uint64_t bound) {
        const std::uint64_t threshold = (0 - bound) % bound;
        for (;;) {
            std::uint64_t r = next_u64();
            if (r >= threshold) return r % bound;
        }
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::uint64_t state_;
};

}  // namespace consensus
