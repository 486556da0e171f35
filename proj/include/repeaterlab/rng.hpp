#pragma once

#include <cstdint>

namespace repeaterlab {

// Counter-based per-trial random stream. Each (seed, trial) pair opens an
// independent SplitMix64 stream whose initial state is a strong 64-bit mix
// of both values, so the sample sequence of a trial is independent of which
// worker executes it and of how many workers exist.
class TrialRng {
public:
    TrialRng(std::uint64_t seed, std::uint64_t trial)
        : state_(mix(seed + 0x9E3779B97F4A7C15ULL * (trial + 1))) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    // Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return next_double() < p; }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    std::uint64_t state_;
};

// Worker-count resolution shared by all parallel kernels: an explicit hint
// wins, then the REPEATERLAB_THREADS environment variable, then the OpenMP
// default.
int resolve_workers(int hint);

} // namespace repeaterlab
