#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace choreo {

// Derives a per-module seed from the master seed, so every component draws
// from its own named stream and pipeline states are reproducible in isolation.
inline std::uint64_t sub_seed(std::uint64_t master, std::string_view stream) {
    // FNV-1a over the stream name, folded into the master seed.
    std::uint64_t h = 14695981039346656037ull ^ master;
    for (char c : stream) {
        h ^= static_cast<std::uint8_t>(c);
        h *= 1099511628211ull;
    }
    return h;
}

// Thin wrapper over mt19937_64 with hand-rolled draws. std::*_distribution is
// not bit-stable across standard libraries; these helpers are, which keeps
// seeded outputs byte-identical everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform integer in [lo, hi], inclusive.
    int uniform_int(int lo, int hi) {
        const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
        return lo + static_cast<int>(engine_() % span);
    }

    // Uniform double in [0, 1).
    double uniform01() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    bool bernoulli(double p) { return uniform01() < p; }

private:
    std::mt19937_64 engine_;
};

} // namespace choreo
